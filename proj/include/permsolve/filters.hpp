#ifndef PERMSOLVE_FILTERS_HPP
#define PERMSOLVE_FILTERS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "permsolve/common.hpp"
#include "permsolve/permutation.hpp"

namespace permsolve {

/// A single time-domain filter of length L.
template <typename Real>
using FilterT = VectorXcT<Real>;
using Filter = FilterT<double>;

/// Dense M x N grid of length-L complex filters.
///
/// Filters are stored as the rows of one row-major (M*N) x L matrix, in
/// row-major filter order: filter (i, j) is storage row i*N + j. This keeps
/// every filter contiguous and lets whole-matrix reductions run on `data()`.
template <typename Real>
class BasicFilterMatrix {
 public:
  using Scalar = ComplexT<Real>;
  using Storage = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  BasicFilterMatrix() = default;

  BasicFilterMatrix(Index channels, Index sources, Index length)
      : channels_(channels), sources_(sources), data_(Storage::Zero(channels * sources, length)) {
    check_dims(channels, sources, length);
  }

  BasicFilterMatrix(Index channels, Index sources, Storage data)
      : channels_(channels), sources_(sources), data_(std::move(data)) {
    check_dims(channels, sources, data_.cols());
    if (data_.rows() != channels * sources)
      throw DimensionError("filter storage has " + std::to_string(data_.rows()) + " rows, expected M*N = " +
                           std::to_string(channels * sources));
  }

  Index channels() const noexcept { return channels_; }
  Index sources() const noexcept { return sources_; }
  Index filter_length() const noexcept { return data_.cols(); }
  Index filter_count() const noexcept { return data_.rows(); }

  auto filter(Index i, Index j) { return data_.row(i * sources_ + j); }
  auto filter(Index i, Index j) const { return data_.row(i * sources_ + j); }

  Scalar& operator()(Index i, Index j, Index t) { return data_(i * sources_ + j, t); }
  const Scalar& operator()(Index i, Index j, Index t) const { return data_(i * sources_ + j, t); }

  Storage& data() noexcept { return data_; }
  const Storage& data() const noexcept { return data_; }

  Real max_abs() const {
    return data_.size() == 0 ? Real(0) : data_.cwiseAbs().maxCoeff();
  }

  /// Global column permutation: result(i, j) = this(i, perm[j]).
  BasicFilterMatrix permuted_columns(const Permutation& perm) const {
    if (perm.size() != sources_) throw DimensionError("column permutation size differs from N");
    BasicFilterMatrix out(channels_, sources_, filter_length());
    for (Index i = 0; i < channels_; ++i)
      for (Index j = 0; j < sources_; ++j) out.filter(i, j) = filter(i, perm[static_cast<int>(j)]);
    return out;
  }

  bool same_shape(const BasicFilterMatrix& other) const noexcept {
    return channels_ == other.channels_ && sources_ == other.sources_ && filter_length() == other.filter_length();
  }

  friend bool operator==(const BasicFilterMatrix& a, const BasicFilterMatrix& b) {
    return a.same_shape(b) && a.data_ == b.data_;
  }

 private:
  static void check_dims(Index channels, Index sources, Index length) {
    if (channels < 1 || sources < 1 || length < 1)
      throw DimensionError("filter matrix needs M, N, L >= 1");
  }

  Index channels_ = 0;
  Index sources_ = 0;
  Storage data_;
};

using FilterMatrix = BasicFilterMatrix<double>;

/// Throws DimensionError naming `what` unless both matrices share (M, N, L).
void require_same_shape(const FilterMatrix& a, const FilterMatrix& b, const char* what);

enum class SupportMode { UniformRandom, DisjointBlocks };

struct SparseSpec {
  Index k = 1;
  SupportMode mode = SupportMode::UniformRandom;
};

/// Random k-sparse filters with standard Gaussian real coefficients.
///
/// Each filter draws from its own counter-based stream keyed by
/// derive_seed(seed, i, j), so the result does not depend on generation order.
/// In DisjointBlocks mode the N supports within each row are pairwise disjoint;
/// the row shares one random draw of N*k distinct positions.
FilterMatrix generate_sparse_matrix(Index channels, Index sources, Index length, const SparseSpec& spec,
                                    std::uint64_t seed);

/// Default zero threshold: 1e-9 times the largest magnitude (1 if all-zero).
double default_zero_tol(const FilterMatrix& m);

/// Indices t with |f[t]| > zero_tol, ascending.
template <typename Derived>
std::vector<Index> support(const Eigen::MatrixBase<Derived>& f, double zero_tol) {
  std::vector<Index> out;
  for (Index t = 0; t < f.size(); ++t)
    if (std::abs(f(t)) > zero_tol) out.push_back(t);
  return out;
}

/// JSON document {"M","N","L","filters":[[[re,im],...],...]} in row-major
/// filter order, doubles written with 17 significant digits.
std::string serialize(const FilterMatrix& m);

/// Inverse of serialize(). ParseError carries the byte offset of malformed
/// JSON; DimensionError reports header/body disagreement.
FilterMatrix deserialize(std::string_view document);

}  // namespace permsolve

#endif  // PERMSOLVE_FILTERS_HPP
