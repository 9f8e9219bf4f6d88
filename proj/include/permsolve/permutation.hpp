#ifndef PERMSOLVE_PERMUTATION_HPP
#define PERMSOLVE_PERMUTATION_HPP

#include <algorithm>
#include <compare>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "permsolve/common.hpp"

namespace permsolve {

/// Bijection on {0, ..., n-1}, stored as its image array. Ordering is lexicographic
/// on the image array, which is the tie-break order used throughout the library.
class Permutation {
 public:
  Permutation() = default;

  /// Throws DomainError unless `image` is a bijection on {0..size-1}.
  explicit Permutation(std::vector<int> image) : image_(std::move(image)) {
    if (!is_bijection(image_)) throw DomainError("permutation image is not a bijection");
  }

  static Permutation identity(int n) {
    std::vector<int> img(static_cast<std::size_t>(n));
    std::iota(img.begin(), img.end(), 0);
    return Permutation(std::move(img), Unchecked{});
  }

  int size() const noexcept { return static_cast<int>(image_.size()); }
  int operator[](int j) const { return image_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& image() const noexcept { return image_; }

  bool is_identity() const noexcept {
    for (std::size_t j = 0; j < image_.size(); ++j)
      if (image_[j] != static_cast<int>(j)) return false;
    return true;
  }

  Permutation inverse() const {
    std::vector<int> inv(image_.size());
    for (std::size_t j = 0; j < image_.size(); ++j) inv[static_cast<std::size_t>(image_[j])] = static_cast<int>(j);
    return Permutation(std::move(inv), Unchecked{});
  }

  /// (this ∘ other)(j) = this(other(j)).
  Permutation compose(const Permutation& other) const {
    if (other.size() != size()) throw DimensionError("composing permutations of different sizes");
    std::vector<int> out(image_.size());
    for (std::size_t j = 0; j < image_.size(); ++j) out[j] = image_[static_cast<std::size_t>(other.image_[j])];
    return Permutation(std::move(out), Unchecked{});
  }

  /// Advances to the lexicographic successor; returns false after the last one.
  bool next() { return std::next_permutation(image_.begin(), image_.end()); }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t j = 0; j < image_.size(); ++j) {
      if (j) s += ",";
      s += std::to_string(image_[j]);
    }
    return s + "]";
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

  static bool is_bijection(const std::vector<int>& img) {
    std::vector<char> seen(img.size(), 0);
    for (int v : img) {
      if (v < 0 || static_cast<std::size_t>(v) >= img.size() || seen[static_cast<std::size_t>(v)]) return false;
      seen[static_cast<std::size_t>(v)] = 1;
    }
    return true;
  }

 private:
  struct Unchecked {};
  Permutation(std::vector<int> image, Unchecked) : image_(std::move(image)) {}

  std::vector<int> image_;
};

/// All n! permutations of {0..n-1} in lexicographic order.
inline std::vector<Permutation> all_permutations(int n) {
  std::vector<Permutation> out;
  Permutation p = Permutation::identity(n);
  do {
    out.push_back(p);
  } while (p.next());
  return out;
}

inline std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

/// One permutation per frequency bin: perms()[w] is σ_w acting on the N source columns.
class PermutationSequence {
 public:
  PermutationSequence() = default;

  PermutationSequence(int num_sources, std::vector<Permutation> perms)
      : num_sources_(num_sources), perms_(std::move(perms)) {
    if (perms_.empty()) throw DomainError("permutation sequence must not be empty");
    for (const auto& p : perms_)
      if (p.size() != num_sources_) throw DimensionError("permutation size differs from N");
  }

  static PermutationSequence identity(int num_sources, Index length) {
    return constant(Permutation::identity(num_sources), length);
  }

  static PermutationSequence constant(const Permutation& p, Index length) {
    return PermutationSequence(p.size(), std::vector<Permutation>(static_cast<std::size_t>(length), p));
  }

  Index length() const noexcept { return static_cast<Index>(perms_.size()); }
  int num_sources() const noexcept { return num_sources_; }

  const Permutation& operator[](Index w) const { return perms_[static_cast<std::size_t>(w)]; }
  Permutation& operator[](Index w) { return perms_[static_cast<std::size_t>(w)]; }
  const std::vector<Permutation>& perms() const noexcept { return perms_; }

  PermutationSequence inverse() const {
    std::vector<Permutation> inv;
    inv.reserve(perms_.size());
    for (const auto& p : perms_) inv.push_back(p.inverse());
    return PermutationSequence(num_sources_, std::move(inv));
  }

  friend bool operator==(const PermutationSequence&, const PermutationSequence&) = default;

 private:
  int num_sources_ = 0;
  std::vector<Permutation> perms_;
};

/// L i.i.d. permutations drawn uniformly from S_N.
inline PermutationSequence random_permutation_sequence(int num_sources, Index length, std::uint64_t seed) {
  const std::vector<Permutation> perms = all_permutations(num_sources);
  CounterRng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, perms.size() - 1);
  PermutationSequence s = PermutationSequence::identity(num_sources, length);
  for (Index w = 0; w < length; ++w) s[w] = perms[pick(rng)];
  return s;
}

}  // namespace permsolve

#endif  // PERMSOLVE_PERMUTATION_HPP
