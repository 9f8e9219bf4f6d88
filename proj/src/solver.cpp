#include "permsolve/solver.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "permsolve/spectral.hpp"

namespace permsolve {

namespace {

void require_solvable(const FilterMatrix& a) {
  if (a.sources() > kMaxEnumeratedSources)
    throw GuardError("greedy sweep enumerates N! permutations per bin; N = " + std::to_string(a.sources()) +
                     " exceeds " + std::to_string(kMaxEnumeratedSources));
}

double objective_of(const FilterMatrix& time_domain, NormOrder p, double zero_tol) {
  return lp_norm(time_domain, p, zero_tol);
}

}  // namespace

// ---------------------------------------------------------------------------

GreedyState::GreedyState(const FilterMatrix& a_tilde, NormOrder p, double zero_tol)
    : p_(p),
      zero_tol_(zero_tol),
      time_(a_tilde),
      spectrum_(to_frequency(a_tilde)),
      candidates_(all_permutations(static_cast<int>(a_tilde.sources()))) {
  const Index L = a_tilde.filter_length();
  twiddles_.resize(static_cast<std::size_t>(L));
  const double scale = 1.0 / std::sqrt(static_cast<double>(L));
  for (Index r = 0; r < L; ++r) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(L);
    twiddles_[static_cast<std::size_t>(r)] = scale * Complex(std::cos(phase), std::sin(phase));
  }
  costs_.resize(static_cast<std::size_t>(time_.filter_count()));
  for (Index row = 0; row < time_.filter_count(); ++row) costs_[static_cast<std::size_t>(row)] = filter_cost(row);
}

double GreedyState::filter_cost(Index row) const { return lp_norm(time_.data().row(row), p_, zero_tol_); }

double GreedyState::shifted_cost(Index row, Complex step, Index w) const {
  const Index L = time_.filter_length();
  const auto x = time_.data().row(row);
  double acc = 0.0;
  Index phase = 0;  // (w * t) mod L
  const bool generic_power = !p_.is_counting() && !p_.is_max() && p_.value() != 1.0 && p_.value() != 2.0;
  const double half_p = 0.5 * p_.value();
  for (Index t = 0; t < L; ++t) {
    const Complex z = x(t) + step * twiddles_[static_cast<std::size_t>(phase)];
    if (generic_power) {
      acc += std::pow(std::norm(z), half_p);
    } else {
      const double term = lp_term(std::abs(z), p_, zero_tol_);
      acc = p_.is_max() ? std::max(acc, term) : acc + term;
    }
    phase += w;
    if (phase >= L) phase -= L;
  }
  return acc;
}

double GreedyState::combine_current() const {
  double acc = 0.0;
  for (double c : costs_) acc = p_.is_max() ? std::max(acc, c) : acc + c;
  return acc;
}

std::vector<double> GreedyState::candidate_objectives(Index w) const {
  const Index M = time_.channels();
  const Index N = time_.sources();
  // table(i*N + j, n): cost of filter (i, j) once its bin w takes spectrum(i, n)[w].
  Eigen::MatrixXd table(M * N, N);
  for (Index i = 0; i < M; ++i)
    for (Index j = 0; j < N; ++j) {
      const Index row = i * N + j;
      for (Index n = 0; n < N; ++n)
        table(row, n) = n == j ? costs_[static_cast<std::size_t>(row)]
                               : shifted_cost(row, spectrum_(i, n, w) - spectrum_(i, j, w), w);
    }

  std::vector<double> out;
  out.reserve(candidates_.size());
  for (const Permutation& pi : candidates_) {
    double acc = 0.0;
    for (Index i = 0; i < M; ++i)
      for (Index j = 0; j < N; ++j) {
        const double c = table(i * N + j, pi[static_cast<int>(j)]);
        acc = p_.is_max() ? std::max(acc, c) : acc + c;
      }
    out.push_back(acc);
  }
  return out;
}

void GreedyState::apply(Index w, const Permutation& pi) {
  const Index M = time_.channels();
  const Index N = time_.sources();
  const Index L = time_.filter_length();
  std::vector<Complex> old(static_cast<std::size_t>(N));
  for (Index i = 0; i < M; ++i) {
    for (Index j = 0; j < N; ++j) old[static_cast<std::size_t>(j)] = spectrum_(i, j, w);
    for (Index j = 0; j < N; ++j) {
      const int src = pi[static_cast<int>(j)];
      if (src == j) continue;
      const Complex step = old[static_cast<std::size_t>(src)] - old[static_cast<std::size_t>(j)];
      spectrum_(i, j, w) = old[static_cast<std::size_t>(src)];
      auto x = time_.filter(i, j);
      Index phase = 0;
      for (Index t = 0; t < L; ++t) {
        x(t) += step * twiddles_[static_cast<std::size_t>(phase)];
        phase += w;
        if (phase >= L) phase -= L;
      }
      costs_[static_cast<std::size_t>(i * N + j)] = filter_cost(i * N + j);
    }
  }
}

void GreedyState::resynchronize() {
  time_ = to_time(spectrum_);
  for (Index row = 0; row < time_.filter_count(); ++row) costs_[static_cast<std::size_t>(row)] = filter_cost(row);
}

// ---------------------------------------------------------------------------

SolveResult greedy_solve(const FilterMatrix& a_tilde, const SolverConfig& cfg) {
  require_solvable(a_tilde);
  if (cfg.max_sweeps < 1) throw DomainError("max_sweeps must be >= 1");
  const double zero_tol = cfg.zero_tol.value_or(default_zero_tol(a_tilde));
  const Index L = a_tilde.filter_length();
  const int N = static_cast<int>(a_tilde.sources());

  GreedyState state(a_tilde, cfg.p, zero_tol);
  SolveResult result;
  result.applied = PermutationSequence::identity(N, L);
  result.permutation_invariant_objective = cfg.p.value() == 2.0;
  result.objective_trace.push_back(state.objective());

  const auto& candidates = state.candidates();
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    const auto started = std::chrono::steady_clock::now();
    int moves = 0;
    for (Index w = 0; w < L; ++w) {
      const double current = state.objective();
      const std::vector<double> values = state.candidate_objectives(w);
      std::size_t best = 0;  // identity is first in lexicographic order
      for (std::size_t c = 1; c < values.size(); ++c)
        if (values[c] < values[best]) best = c;
      const bool accept = cfg.tie_break == TieBreak::KeepCurrent
                              ? values[best] < current - 1e-12 * std::abs(current)
                              : values[best] < current && best != 0;
      if (!accept || best == 0) continue;
      state.apply(w, candidates[best]);
      result.applied[w] = result.applied[w].compose(candidates[best]);
      result.objective_trace.push_back(values[best]);
      ++moves;
    }
    if (moves > 0) state.resynchronize();
    result.sweep_seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count());
    result.sweeps = sweep + 1;
    result.accepted_moves += moves;
    if (moves == 0) {
      result.converged = true;
      break;
    }
  }
  result.a_hat = state.time_domain();
  return result;
}

// ---------------------------------------------------------------------------

std::optional<std::uint64_t> brute_force_size(int num_sources, Index length) {
  if (num_sources > 20) return std::nullopt;
  const std::uint64_t base = factorial(num_sources);
  std::uint64_t total = 1;
  for (Index w = 1; w < length; ++w) {
    if (base > 1 && total > std::numeric_limits<std::uint64_t>::max() / base) return std::nullopt;
    total *= base;
  }
  return total;
}

BruteForceResult brute_force_solve(const FilterMatrix& a_tilde, NormOrder p, std::optional<double> zero_tol,
                                   double rel_tie_tol) {
  const int N = static_cast<int>(a_tilde.sources());
  const Index L = a_tilde.filter_length();
  const auto size = brute_force_size(N, L);
  if (!size || *size > kBruteForceLimit)
    throw GuardError("exhaustive search over (N!)^(L-1) sequences exceeds the limit of " +
                     std::to_string(kBruteForceLimit) + " (N = " + std::to_string(N) + ", L = " + std::to_string(L) + ")");
  const double tol = zero_tol.value_or(default_zero_tol(a_tilde));
  const FilterMatrix spectrum = to_frequency(a_tilde);
  const std::vector<Permutation> perms = all_permutations(N);
  const std::size_t base = perms.size();

  struct Candidate {
    double value;
    std::vector<std::size_t> digits;
  };
  std::vector<Candidate> pool;
  double best = std::numeric_limits<double>::infinity();
  const auto ties = [&](double v, double ref) {
    return p.is_counting() ? v == ref : std::abs(v - ref) <= rel_tie_tol * std::abs(ref);
  };

  BruteForceResult out;
  std::vector<std::size_t> digits(static_cast<std::size_t>(L), 0);  // digits[0] stays 0
  PermutationSequence seq = PermutationSequence::identity(N, L);
  while (true) {
    for (Index w = 1; w < L; ++w) seq[w] = perms[digits[static_cast<std::size_t>(w)]];
    const double value = objective_of(to_time(permute_spectrum(spectrum, seq)), p, tol);
    ++out.enumerated;
    if (value < best && !ties(value, best)) {
      best = value;
      std::erase_if(pool, [&](const Candidate& c) { return !ties(c.value, best); });
    } else if (value < best) {
      best = value;
    }
    if (ties(value, best)) pool.push_back({value, digits});

    Index w = 1;
    while (w < L && ++digits[static_cast<std::size_t>(w)] == base) digits[static_cast<std::size_t>(w++)] = 0;
    if (w >= L) break;
  }

  out.best_objective = best;
  for (const Candidate& c : pool) {
    if (!ties(c.value, best)) continue;
    PermutationSequence s = PermutationSequence::identity(N, L);
    for (Index w = 1; w < L; ++w) s[w] = perms[c.digits[static_cast<std::size_t>(w)]];
    out.optimal.push_back(std::move(s));
  }
  return out;
}

UniquenessCheck verify_unique_l0_minimizer(const FilterMatrix& a, std::optional<double> zero_tol) {
  const double tol = zero_tol.value_or(default_zero_tol(a));
  UniquenessCheck out;
  for (Index r = 0; r < a.filter_count(); ++r)
    out.sparsity = std::max(out.sparsity, static_cast<Index>(lp_norm(a.data().row(r), NormOrder::counting(), tol)));
  const Index L = a.filter_length();
  out.hypotheses_hold =
      is_prime(L) && Rational(out.sparsity, L) <= alpha(static_cast<int>(a.sources()));

  out.oracle = brute_force_solve(a, NormOrder::counting(), tol);
  const FilterMatrix spectrum = to_frequency(a);
  for (const PermutationSequence& s : out.oracle.optimal) {
    const FilterMatrix candidate = to_time(permute_spectrum(spectrum, s));
    if (!is_equivalent(candidate, a, 1e-8)) {
      out.counterexample = s;
      out.verdict = UniquenessVerdict::CounterexampleFound;
      return out;
    }
  }
  out.verdict = out.hypotheses_hold ? UniquenessVerdict::Verified : UniquenessVerdict::OutOfScope;
  return out;
}

}  // namespace permsolve
