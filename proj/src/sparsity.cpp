#include "permsolve/sparsity.hpp"

#include <algorithm>

#include "permsolve/spectral.hpp"

namespace permsolve {

namespace {

void require_sources(int n) {
  if (n < 1) throw DomainError("number of sources must be >= 1");
}

void require_enumerable(Index n) {
  if (n > kMaxEnumeratedSources)
    throw GuardError("N = " + std::to_string(n) + " exceeds the exhaustive-enumeration limit of " +
                     std::to_string(kMaxEnumeratedSources));
}

}  // namespace

Rational alpha(int num_sources) {
  require_sources(num_sources);
  const std::int64_t n = num_sources;
  return n % 2 == 0 ? Rational(2, n * (n + 2)) : Rational(2, (n + 1) * (n + 1));
}

Rational alpha_weak(int num_sources) {
  require_sources(num_sources);
  return Rational(1, 2 * static_cast<std::int64_t>(factorial(num_sources)));
}

Rational alpha_caratheodory(int num_sources) {
  require_sources(num_sources);
  const std::int64_t n = num_sources;
  return Rational(1, 2 * (1 + (n - 1) * (n - 1)));
}

DeltaReport delta(const FilterMatrix& a_tilde, const FilterMatrix& a, std::optional<double> zero_tol) {
  require_same_shape(a_tilde, a, "delta");
  require_enumerable(a.sources());
  const FilterMatrix ft = to_frequency(a_tilde);
  const FilterMatrix fa = to_frequency(a);
  const double peak = std::max(ft.max_abs(), fa.max_abs());
  const double tol = zero_tol.value_or(1e-9 * (peak > 0.0 ? peak : 1.0));

  const Index M = a.channels();
  const Index N = a.sources();
  // counts(i*N + j, n) = ||F(a_tilde(i,j) - a(i,n))||_0, shared by all pi.
  Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic> counts(M * N, N);
  for (Index i = 0; i < M; ++i)
    for (Index j = 0; j < N; ++j)
      for (Index n = 0; n < N; ++n)
        counts(i * N + j, n) = static_cast<Index>(lp_norm(ft.filter(i, j) - fa.filter(i, n), NormOrder::counting(), tol));

  DeltaReport best;
  best.delta = std::numeric_limits<Index>::max();
  for (const Permutation& pi : all_permutations(static_cast<int>(N))) {
    Index worst = 0;
    for (Index i = 0; i < M; ++i)
      for (Index j = 0; j < N; ++j) worst = std::max(worst, counts(i * N + j, pi[static_cast<int>(j)]));
    if (worst < best.delta) {
      best.delta = worst;
      best.best_global_perm = pi;
    }
  }
  best.per_pair.resize(M, N);
  for (Index i = 0; i < M; ++i)
    for (Index j = 0; j < N; ++j) best.per_pair(i, j) = counts(i * N + j, best.best_global_perm[static_cast<int>(j)]);
  return best;
}

std::optional<Permutation> is_equivalent(const FilterMatrix& a_tilde, const FilterMatrix& a, double tol) {
  require_same_shape(a_tilde, a, "is_equivalent");
  require_enumerable(a.sources());
  const double bound = tol * a.max_abs();
  const Index N = a.sources();
  for (const Permutation& pi : all_permutations(static_cast<int>(N))) {
    bool ok = true;
    for (Index i = 0; i < a.channels() && ok; ++i)
      for (Index j = 0; j < N && ok; ++j)
        ok = (a_tilde.filter(i, j) - a.filter(i, pi[static_cast<int>(j)])).cwiseAbs().maxCoeff() <= bound;
    if (ok) return pi;
  }
  return std::nullopt;
}

SnrReport snr(const FilterMatrix& a, const FilterMatrix& a_hat) {
  require_same_shape(a, a_hat, "snr");
  require_enumerable(a.sources());
  const double signal = a.data().squaredNorm();
  if (signal == 0.0) throw ContractError("SNR is undefined for an all-zero reference matrix");

  const Index M = a.channels();
  const Index N = a.sources();
  // err(j, n) = sum_i ||a(i, j) - a_hat(i, n)||^2
  Eigen::MatrixXd err = Eigen::MatrixXd::Zero(N, N);
  for (Index j = 0; j < N; ++j)
    for (Index n = 0; n < N; ++n)
      for (Index i = 0; i < M; ++i) err(j, n) += (a.filter(i, j) - a_hat.filter(i, n)).squaredNorm();

  SnrReport out;
  out.error_energy = std::numeric_limits<double>::infinity();
  for (const Permutation& pi : all_permutations(static_cast<int>(N))) {
    double e = 0.0;
    for (Index j = 0; j < N; ++j) e += err(j, pi[static_cast<int>(j)]);
    if (e < out.error_energy) {
      out.error_energy = e;
      out.best_perm = pi;
    }
  }
  out.exact_match = out.error_energy == 0.0;
  out.db = out.exact_match ? SnrReport::kExactMatchDb : 10.0 * std::log10(signal / out.error_energy);
  return out;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Wellposedness check_uncertainty_budget(Index k, Index delta_value, Index length, bool prime) {
  if (k < 1 || k > length) throw DomainError("uncertainty budget needs 1 <= k <= L");
  if (delta_value < 0 || delta_value > length) throw DomainError("uncertainty budget needs 0 <= Delta <= L");
  if (prime && !is_prime(length))
    throw DomainError("L = " + std::to_string(length) + " was flagged prime but is composite");
  const bool ok = prime ? 2 * k + delta_value <= length : 2 * k * delta_value < length;
  return ok ? Wellposedness::WellPosed : Wellposedness::NotGuaranteed;
}

}  // namespace permsolve
