#include "permsolve/assignment.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "permsolve/sparsity.hpp"

namespace permsolve {

namespace {

using Adjacency = Eigen::Matrix<char, Eigen::Dynamic, Eigen::Dynamic>;

bool augment(const Adjacency& allowed, int j, std::vector<int>& col_owner, std::vector<char>& visited) {
  for (int n = 0; n < allowed.cols(); ++n) {
    if (!allowed(j, n) || visited[static_cast<std::size_t>(n)]) continue;
    visited[static_cast<std::size_t>(n)] = 1;
    int& owner = col_owner[static_cast<std::size_t>(n)];
    if (owner < 0 || augment(allowed, owner, col_owner, visited)) {
      owner = j;
      return true;
    }
  }
  return false;
}

bool has_perfect_matching(const Adjacency& allowed) {
  const auto match = maximum_matching(allowed);
  return std::none_of(match.begin(), match.end(), [](int n) { return n < 0; });
}

// Slack absorbing round-off when comparing normalized counts against thresholds.
constexpr double kThresholdSlack = 1e-12;

}  // namespace

BistochasticMatrix::BistochasticMatrix(Eigen::MatrixXd entries, double tol) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1)
    throw DimensionError("bistochastic matrix must be square and non-empty");
  if ((entries_.array() < 0.0).any()) throw DomainError("bistochastic matrix has a negative entry");
  const double defect = sum_defect(entries_);
  if (!(defect <= tol))
    throw DomainError("matrix is not bistochastic: a row or column sum is off by " + std::to_string(defect));
}

double BistochasticMatrix::sum_defect(const Eigen::MatrixXd& m) {
  const double rows = (m.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double cols = (m.colwise().sum().array() - 1.0).abs().maxCoeff();
  return std::max(rows, cols);
}

CountMatrix count_matrix(const PermutationSequence& s) {
  const int n = s.num_sources();
  CountMatrix c{CountEntries::Zero(n, n), s.length()};
  for (const Permutation& sigma : s.perms())
    for (int j = 0; j < n; ++j) ++c.entries(j, sigma[j]);
  return c;
}

BistochasticMatrix normalized(const CountMatrix& c) {
  return BistochasticMatrix(c.entries.cast<double>() / static_cast<double>(c.total));
}

std::vector<int> maximum_matching(const Adjacency& allowed) {
  std::vector<int> col_owner(static_cast<std::size_t>(allowed.cols()), -1);
  for (int j = 0; j < allowed.rows(); ++j) {
    std::vector<char> visited(static_cast<std::size_t>(allowed.cols()), 0);
    augment(allowed, j, col_owner, visited);
  }
  std::vector<int> match(static_cast<std::size_t>(allowed.rows()), -1);
  for (int n = 0; n < allowed.cols(); ++n)
    if (col_owner[static_cast<std::size_t>(n)] >= 0) match[static_cast<std::size_t>(col_owner[static_cast<std::size_t>(n)])] = n;
  return match;
}

std::optional<Permutation> hall_transversal(const BistochasticMatrix& b, double threshold) {
  const Index n = b.size();
  Adjacency allowed = (b.entries().array() >= threshold - kThresholdSlack).cast<char>();

  if (!has_perfect_matching(allowed)) {
    if (threshold <= alpha(static_cast<int>(n)).to_double() * 2.0)
      throw ContractError("no transversal found at threshold " + std::to_string(threshold) +
                          " although one is guaranteed at 2*alpha(N)");
    return std::nullopt;
  }

  // Fix rows in order, each to the smallest column that keeps a perfect matching.
  std::vector<int> image(static_cast<std::size_t>(n), -1);
  for (Index j = 0; j < n; ++j) {
    for (Index col = 0; col < n; ++col) {
      if (!allowed(j, col)) continue;
      Adjacency trial = allowed;
      trial.row(j).setZero();
      trial.col(col).setZero();
      trial(j, col) = 1;
      if (has_perfect_matching(trial)) {
        image[static_cast<std::size_t>(j)] = static_cast<int>(col);
        allowed = std::move(trial);
        break;
      }
    }
  }
  return Permutation(std::move(image));
}

GlobalMatch best_matching_global_perm(const PermutationSequence& s) {
  const CountMatrix c = count_matrix(s);
  const int n = s.num_sources();
  const Rational two_alpha = Rational(2, 1) * alpha(n);
  auto perm = hall_transversal(normalized(c), two_alpha.to_double());
  if (!perm) throw ContractError("matching-count transversal missing");

  GlobalMatch out{*perm, c.total};
  for (int j = 0; j < n; ++j) out.min_count = std::min(out.min_count, c.entries(j, (*perm)[j]));
  const std::int64_t bound = (two_alpha * Rational(c.total, 1)).ceil();
  if (out.min_count < bound)
    throw ContractError("matching count " + std::to_string(out.min_count) + " below guaranteed " + std::to_string(bound));
  return out;
}

RepeatedPermutation most_repeated_permutation(const PermutationSequence& s) {
  std::map<Permutation, Index> tally;
  for (const Permutation& p : s.perms()) ++tally[p];
  RepeatedPermutation best;
  for (const auto& [p, count] : tally)
    if (count > best.count) best = {p, count};
  return best;
}

int sharp_block_count(int num_sources) { return num_sources / 2; }

PermutationSequence sharp_permutation_sequence(int num_sources, Index length) {
  if (num_sources < 2) throw DomainError("sharp sequence needs N >= 2");
  const int k0 = sharp_block_count(num_sources);
  const Index period = static_cast<Index>(k0 + 1) * (num_sources - k0);
  if (length < 1 || length % period != 0)
    throw DomainError("sharp sequence needs L to be a positive multiple of (k0+1)(N-k0) = " + std::to_string(period) +
                      ", got L = " + std::to_string(length));

  const Index block = length / (k0 + 1);         // rows per cyclic block
  const Index sub_block = length / period;        // rows per value inside the U block
  std::vector<Permutation> perms;
  perms.reserve(static_cast<std::size_t>(length));
  for (Index row = 0; row < length; ++row) {
    const Index r = row / block;
    std::vector<int> image;
    std::vector<char> used(static_cast<std::size_t>(num_sources), 0);
    // Left part: column c holds block element (r - c) mod (k0 + 1) of (0, ..., k0-1, U).
    for (int c = 0; c <= k0; ++c) {
      const Index e = ((r - c) % (k0 + 1) + (k0 + 1)) % (k0 + 1);
      const int value = e < k0 ? static_cast<int>(e) : k0 + static_cast<int>((row - r * block) / sub_block);
      image.push_back(value);
      used[static_cast<std::size_t>(value)] = 1;
    }
    // Right part: the missing values in ascending order.
    for (int v = 0; v < num_sources; ++v)
      if (!used[static_cast<std::size_t>(v)]) image.push_back(v);
    perms.emplace_back(std::move(image));
  }
  return PermutationSequence(num_sources, std::move(perms));
}

BistochasticMatrix sinkhorn_normalize(Eigen::MatrixXd m, int max_iters, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1) throw DimensionError("Sinkhorn input must be square and non-empty");
  if ((m.array() <= 0.0).any()) throw DomainError("Sinkhorn input must be strictly positive");
  for (int it = 0; it < max_iters; ++it) {
    m.array().colwise() /= m.rowwise().sum().eval().array();
    m.array().rowwise() /= m.colwise().sum().eval().array();
    if (BistochasticMatrix::sum_defect(m) <= tol) break;
  }
  return BistochasticMatrix(std::move(m), tol > 1e-6 ? tol : 1e-6);
}

BistochasticMatrix sinkhorn_bistochastic(std::uint64_t seed, Index n, int max_iters) {
  if (n < 1) throw DomainError("Sinkhorn generator needs N >= 1");
  CounterRng rng(derive_seed(seed, 0x73696e6b));
  std::uniform_real_distribution<double> entry(0.01, 1.0);
  Eigen::MatrixXd m(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index c = 0; c < n; ++c) m(j, c) = entry(rng);
  return sinkhorn_normalize(std::move(m), max_iters);
}

}  // namespace permsolve
