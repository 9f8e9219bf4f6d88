#ifndef PERMSOLVE_SPARSITY_HPP
#define PERMSOLVE_SPARSITY_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "permsolve/filters.hpp"
#include "permsolve/permutation.hpp"

namespace permsolve {

/// Order p of an l^p objective. p = 0 counts nonzeros, p = inf takes the max magnitude.
class NormOrder {
 public:
  constexpr NormOrder() = default;
  explicit NormOrder(double p) : p_(p) {
    if (!(p >= 0.0)) throw DomainError("norm order must satisfy p >= 0");
  }
  static NormOrder counting() { return NormOrder(0.0); }
  static NormOrder infinity() { return NormOrder(std::numeric_limits<double>::infinity()); }

  double value() const noexcept { return p_; }
  bool is_counting() const noexcept { return p_ == 0.0; }
  bool is_max() const noexcept { return std::isinf(p_); }

 private:
  double p_ = 1.0;
};

/// Contribution of a single magnitude to the l^p objective.
inline double lp_term(double magnitude, NormOrder p, double zero_tol) {
  if (p.is_counting()) return magnitude > zero_tol ? 1.0 : 0.0;
  if (p.is_max()) return magnitude;
  if (p.value() == 1.0) return magnitude;
  if (p.value() == 2.0) return magnitude * magnitude;
  return std::pow(magnitude, p.value());
}

/// p = 0: count of |x| > zero_tol; 0 < p < inf: sum |x|^p; p = inf: max |x|.
template <typename Derived>
double lp_norm(const Eigen::MatrixBase<Derived>& x, NormOrder p, double zero_tol) {
  double acc = 0.0;
  for (Index r = 0; r < x.rows(); ++r)
    for (Index c = 0; c < x.cols(); ++c) {
      const double term = lp_term(std::abs(x(r, c)), p, zero_tol);
      acc = p.is_max() ? std::max(acc, term) : acc + term;
    }
  return acc;
}

inline double lp_norm(const FilterMatrix& a, NormOrder p, double zero_tol) { return lp_norm(a.data(), p, zero_tol); }
inline double lp_norm(const FilterMatrix& a, NormOrder p) { return lp_norm(a, p, default_zero_tol(a)); }

/// Exact non-negative rational number with a positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  constexpr Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  constexpr double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend constexpr Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
  friend constexpr Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend constexpr bool operator==(Rational a, Rational b) { return a.num * b.den == b.num * a.den; }
  friend constexpr std::strong_ordering operator<=>(Rational a, Rational b) {
    return a.num * b.den <=> b.num * a.den;
  }

  /// Smallest integer >= this value.
  constexpr std::int64_t ceil() const { return num >= 0 ? (num + den - 1) / den : -((-num) / den); }
};

/// Relative sparsity level k/L below which l^0 recovery is unique:
/// 2/(N(N+2)) for even N, 2/(N+1)^2 for odd N.
Rational alpha(int num_sources);

/// Pigeonhole constant 1/(2 N!).
Rational alpha_weak(int num_sources);

/// Half the Birkhoff/Caratheodory threshold: 1/(2 (1 + (N-1)^2)).
Rational alpha_caratheodory(int num_sources);

/// Outcome of the exact minimisation of the spectral-difference count over global permutations.
struct DeltaReport {
  Index delta = 0;
  Permutation best_global_perm;
  /// per_pair(i, j) = ||F(a_tilde(i, j) - a(i, pi(j)))||_0 for the best pi.
  Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic> per_pair;
};

/// Largest N accepted by the N!-enumerating routines.
inline constexpr int kMaxEnumeratedSources = 8;

/// Delta(A_tilde, A) by enumeration of all N! global permutations (ties go to the
/// lexicographically smallest). Without zero_tol, spectra are thresholded at
/// 1e-9 times their largest magnitude.
DeltaReport delta(const FilterMatrix& a_tilde, const FilterMatrix& a, std::optional<double> zero_tol = {});

/// Lexicographically first pi with max |a_tilde(i,j) - a(i, pi(j))| <= tol * max|a|, if any.
std::optional<Permutation> is_equivalent(const FilterMatrix& a_tilde, const FilterMatrix& a, double tol = 1e-9);

struct SnrReport {
  /// Reported SNR in dB; an exactly-zero error reports kExactMatchDb.
  double db = 0.0;
  bool exact_match = false;
  Permutation best_perm;
  double error_energy = 0.0;

  static constexpr double kExactMatchDb = 350.0;
};

/// 10 log10(||A||^2 / min_pi ||A - A_hat_pi||^2), A_hat_pi(i, j) = A_hat(i, pi(j)).
SnrReport snr(const FilterMatrix& a, const FilterMatrix& a_hat);

bool is_prime(std::int64_t n);

enum class Wellposedness { WellPosed, NotGuaranteed };

/// Uncertainty-principle budget: for prime L, 2k + Delta <= L; otherwise 2k Delta < L.
/// Throws DomainError when `prime` is claimed for a composite L.
Wellposedness check_uncertainty_budget(Index k, Index delta_value, Index length, bool prime);

}  // namespace permsolve

#endif  // PERMSOLVE_SPARSITY_HPP
