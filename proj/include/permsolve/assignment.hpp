#ifndef PERMSOLVE_ASSIGNMENT_HPP
#define PERMSOLVE_ASSIGNMENT_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "permsolve/permutation.hpp"

namespace permsolve {

using CountEntries = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Matching counts C(j, n) = #{w : s[w](j) = n}; every row and column sums to `total`.
struct CountMatrix {
  CountEntries entries;
  std::int64_t total = 0;

  Index size() const noexcept { return entries.rows(); }
};

/// Nonnegative square matrix with unit row and column sums.
class BistochasticMatrix {
 public:
  /// Throws DomainError if an entry is negative or a row/column sum is off by more than `tol`.
  explicit BistochasticMatrix(Eigen::MatrixXd entries, double tol = 1e-6);

  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  Index size() const noexcept { return entries_.rows(); }
  double operator()(Index j, Index n) const { return entries_(j, n); }

  /// Largest deviation of any row or column sum from one.
  static double sum_defect(const Eigen::MatrixXd& m);

 private:
  Eigen::MatrixXd entries_;
};

CountMatrix count_matrix(const PermutationSequence& s);

/// C / L.
BistochasticMatrix normalized(const CountMatrix& c);

/// Maximum bipartite matching by augmenting paths. allowed(j, n) != 0 marks edge j -> n.
/// Returns match[j] = n or -1.
std::vector<int> maximum_matching(const Eigen::Matrix<char, Eigen::Dynamic, Eigen::Dynamic>& allowed);

/// Lexicographically smallest permutation pi with B(j, pi(j)) >= threshold for all j.
///
/// A transversal is guaranteed at threshold 2 alpha(N); not finding one at or
/// below that level raises ContractError.
std::optional<Permutation> hall_transversal(const BistochasticMatrix& b, double threshold);

struct GlobalMatch {
  Permutation perm;
  std::int64_t min_count = 0;
};

/// Global permutation whose matching counts all reach 2 L alpha(N).
GlobalMatch best_matching_global_perm(const PermutationSequence& s);

/// Most frequent permutation in the sequence and its multiplicity (ties: lexicographic).
struct RepeatedPermutation {
  Permutation perm;
  Index count = 0;
};
RepeatedPermutation most_repeated_permutation(const PermutationSequence& s);

/// Half-width k0 = floor(N / 2) of the extremal count construction.
int sharp_block_count(int num_sources);

/// Sequence reaching the matching-count bound 2 L alpha(N) with equality.
/// Needs L to be a positive multiple of (k0 + 1)(N - k0).
PermutationSequence sharp_permutation_sequence(int num_sources, Index length);

/// Alternating row/column normalization until every sum is within `tol` of one.
/// Entries must be positive.
BistochasticMatrix sinkhorn_normalize(Eigen::MatrixXd m, int max_iters = 10000, double tol = 1e-10);

/// Sinkhorn normalization of a seeded random positive N x N matrix.
BistochasticMatrix sinkhorn_bistochastic(std::uint64_t seed, Index n, int max_iters = 10000);

}  // namespace permsolve

#endif  // PERMSOLVE_ASSIGNMENT_HPP
