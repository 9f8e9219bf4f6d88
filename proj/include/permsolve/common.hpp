#ifndef PERMSOLVE_COMMON_HPP
#define PERMSOLVE_COMMON_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace permsolve {

using Index = Eigen::Index;

template <typename Real>
using ComplexT = std::complex<Real>;
using Complex = ComplexT<double>;

template <typename Real>
using VectorXcT = Eigen::Matrix<ComplexT<Real>, Eigen::Dynamic, 1>;
using VectorXc = VectorXcT<double>;

// Error hierarchy. The CLI maps each family onto an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of two operands do not agree, or a document contradicts its own header.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the operation's domain (bad k, bad comb parameters, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration refused because the instance is too large.
class GuardError : public Error {
 public:
  using Error::Error;
};

/// A mathematical guarantee was violated at runtime.
class ContractError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Seeding and random numbers.

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Order-sensitive hash of a seed and any number of integer keys.
template <typename... Keys>
constexpr std::uint64_t derive_seed(std::uint64_t seed, Keys... keys) noexcept {
  std::uint64_t h = mix64(seed);
  ((h = mix64(h ^ mix64(static_cast<std::uint64_t>(keys) + 0x632be59bd9b4e019ULL))), ...);
  return h;
}

/// Counter-based generator: output n is a keyed hash of n, so a stream is
/// fully determined by its key and never depends on scheduling.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(mix64(key)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return mix64(key_ ^ mix64(counter_++)); }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace permsolve

#endif  // PERMSOLVE_COMMON_HPP
