#ifndef PERMSOLVE_SOLVER_HPP
#define PERMSOLVE_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "permsolve/filters.hpp"
#include "permsolve/permutation.hpp"
#include "permsolve/sparsity.hpp"

namespace permsolve {

enum class TieBreak {
  /// Move only when the objective drops by more than 1e-12 of its current value.
  KeepCurrent,
  /// Move to the lexicographically first exact minimiser whenever it is strictly lower.
  Lexicographic,
};

struct SolverConfig {
  NormOrder p{1.0};
  int max_sweeps = 100;
  /// Time-domain zero threshold for p = 0; defaults to default_zero_tol(input).
  std::optional<double> zero_tol;
  TieBreak tie_break = TieBreak::KeepCurrent;
};

struct SolveResult {
  FilterMatrix a_hat;
  /// a_hat(i, j)[w] = a_tilde(i, applied[w](j))[w].
  PermutationSequence applied;
  /// Objective of the starting point followed by one entry per accepted move.
  std::vector<double> objective_trace;
  int sweeps = 0;
  int accepted_moves = 0;
  bool converged = false;
  /// True for p = 2, where every per-frequency permutation leaves the objective unchanged.
  bool permutation_invariant_objective = false;
  std::vector<double> sweep_seconds;
};

/// Incremental state of the greedy sweep.
///
/// Holds the current iterate in both domains plus each filter's l^p cost.
/// Changing bin w of filter (i, j) from X to Y adds (Y - X) e_w to the time
/// signal, where e_w is the unit-norm inverse DFT atom, so a candidate's cost
/// is evaluated in O(L) per (filter, source column) pair; a whole frequency
/// needs M N^2 such evaluations and every one of the N! candidates is a sum of
/// table entries.
class GreedyState {
 public:
  GreedyState(const FilterMatrix& a_tilde, NormOrder p, double zero_tol);

  double objective() const { return combine_current(); }

  /// Objective after applying each permutation at bin w, in all_permutations() order.
  std::vector<double> candidate_objectives(Index w) const;

  /// Applies pi at bin w: spectrum(i, j)[w] <- spectrum(i, pi(j))[w].
  void apply(Index w, const Permutation& pi);

  /// Recomputes the time domain from the spectrum and refreshes every cost.
  void resynchronize();

  const FilterMatrix& time_domain() const noexcept { return time_; }
  const FilterMatrix& spectrum() const noexcept { return spectrum_; }
  const std::vector<Permutation>& candidates() const noexcept { return candidates_; }

 private:
  double filter_cost(Index row) const;
  double shifted_cost(Index row, Complex step, Index w) const;
  double combine_current() const;

  NormOrder p_;
  double zero_tol_;
  FilterMatrix time_;
  FilterMatrix spectrum_;
  std::vector<Complex> twiddles_;  // exp(2 i pi r / L) / sqrt(L)
  std::vector<double> costs_;      // per storage row
  std::vector<Permutation> candidates_;
};

/// Greedy frequency-by-frequency l^p descent. Frequencies are visited
/// 0, 1, ..., L-1 repeatedly, always against the current iterate; the run stops
/// after a full sweep with no accepted move, or after cfg.max_sweeps sweeps.
SolveResult greedy_solve(const FilterMatrix& a_tilde, const SolverConfig& cfg);

/// Maximum number of sequences brute_force_solve will enumerate.
inline constexpr std::uint64_t kBruteForceLimit = 1'000'000;

/// Number of sequences with s[0] = identity, or nullopt beyond 2^64.
std::optional<std::uint64_t> brute_force_size(int num_sources, Index length);

struct BruteForceResult {
  double best_objective = 0.0;
  /// Every minimising sequence with s[0] = identity, in enumeration order.
  std::vector<PermutationSequence> optimal;
  std::uint64_t enumerated = 0;
};

/// Exhaustive minimisation over all (N!)^(L-1) sequences with s[0] fixed to the identity.
/// Values within rel_tie_tol of the minimum count as ties (exact comparison for p = 0).
BruteForceResult brute_force_solve(const FilterMatrix& a_tilde, NormOrder p, std::optional<double> zero_tol = {},
                                   double rel_tie_tol = 1e-9);

enum class UniquenessVerdict { Verified, CounterexampleFound, OutOfScope };

struct UniquenessCheck {
  UniquenessVerdict verdict = UniquenessVerdict::OutOfScope;
  bool hypotheses_hold = false;  // L prime and k / L <= alpha(N)
  Index sparsity = 0;            // max_ij ||a_ij||_0
  BruteForceResult oracle;
  std::optional<PermutationSequence> counterexample;
};

/// Checks by enumeration that A is, up to a global permutation, the only l^0
/// minimiser among its frequency permutations. A non-equivalent minimiser is
/// reported whether or not the sufficient conditions hold; otherwise the
/// verdict is OutOfScope unless L is prime and k / L <= alpha(N).
UniquenessCheck verify_unique_l0_minimizer(const FilterMatrix& a, std::optional<double> zero_tol = {});

}  // namespace permsolve

#endif  // PERMSOLVE_SOLVER_HPP
