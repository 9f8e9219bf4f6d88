#ifndef PERMSOLVE_TESTS_ORACLES_HPP
#define PERMSOLVE_TESTS_ORACLES_HPP

// Slow, direct reference implementations used to cross-check the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "permsolve/filters.hpp"
#include "permsolve/permutation.hpp"

namespace oracle {

using permsolve::Complex;
using permsolve::Index;

inline permsolve::VectorXc naive_dft(const permsolve::VectorXc& v, int sign = -1) {
  const Index L = v.size();
  permsolve::VectorXc out(L);
  for (Index w = 0; w < L; ++w) {
    Complex acc = 0.0;
    for (Index t = 0; t < L; ++t) {
      const double phase = sign * 2.0 * std::numbers::pi * static_cast<double>((w * t) % L) / static_cast<double>(L);
      acc += v(t) * Complex(std::cos(phase), std::sin(phase));
    }
    out(w) = acc / std::sqrt(static_cast<double>(L));
  }
  return out;
}

inline permsolve::VectorXc naive_idft(const permsolve::VectorXc& v) { return naive_dft(v, +1); }

inline Index count_nonzero(const permsolve::VectorXc& v, double tol) {
  Index n = 0;
  for (Index t = 0; t < v.size(); ++t) n += std::abs(v(t)) > tol ? 1 : 0;
  return n;
}

inline double lp_sum(const permsolve::FilterMatrix& a, double p, double tol) {
  double acc = 0.0;
  for (Index r = 0; r < a.filter_count(); ++r)
    for (Index t = 0; t < a.filter_length(); ++t) {
      const double m = std::abs(a.data()(r, t));
      if (p == 0.0)
        acc += m > tol ? 1.0 : 0.0;
      else if (std::isinf(p))
        acc = std::max(acc, m);
      else
        acc += std::pow(m, p);
    }
  return acc;
}

// Applies s bin by bin with a naive DFT.
inline permsolve::FilterMatrix naive_apply(const permsolve::FilterMatrix& a, const permsolve::PermutationSequence& s) {
  const Index M = a.channels(), N = a.sources(), L = a.filter_length();
  std::vector<permsolve::VectorXc> spec(static_cast<std::size_t>(M * N));
  for (Index r = 0; r < M * N; ++r) spec[static_cast<std::size_t>(r)] = naive_dft(a.data().row(r).transpose());
  permsolve::FilterMatrix out(M, N, L);
  for (Index i = 0; i < M; ++i)
    for (Index j = 0; j < N; ++j) {
      permsolve::VectorXc f(L);
      for (Index w = 0; w < L; ++w) f(w) = spec[static_cast<std::size_t>(i * N + s[w][static_cast<int>(j)])](w);
      out.filter(i, j) = naive_idft(f).transpose();
    }
  return out;
}

// max over pi of min_j #{w : s_w(j) = pi(j)}, by enumeration of S_N.
inline std::int64_t bottleneck_count(const permsolve::PermutationSequence& s) {
  std::int64_t best = -1;
  for (const auto& pi : permsolve::all_permutations(s.num_sources())) {
    std::int64_t worst = std::numeric_limits<std::int64_t>::max();
    for (int j = 0; j < s.num_sources(); ++j) {
      std::int64_t c = 0;
      for (Index w = 0; w < s.length(); ++w) c += s[w][j] == pi[j] ? 1 : 0;
      worst = std::min(worst, c);
    }
    best = std::max(best, worst);
  }
  return best;
}

// Delta by definition: min over global pi of max over filters of #bins where spectra differ.
inline Index naive_delta(const permsolve::FilterMatrix& at, const permsolve::FilterMatrix& a, double rel_tol = 1e-9) {
  const Index M = a.channels(), N = a.sources();
  double scale = 0.0;
  std::vector<permsolve::VectorXc> fa, ft;
  for (Index r = 0; r < M * N; ++r) {
    fa.push_back(naive_dft(a.data().row(r).transpose()));
    ft.push_back(naive_dft(at.data().row(r).transpose()));
    scale = std::max({scale, fa.back().cwiseAbs().maxCoeff(), ft.back().cwiseAbs().maxCoeff()});
  }
  const double tol = rel_tol * scale;
  Index best = std::numeric_limits<Index>::max();
  for (const auto& pi : permsolve::all_permutations(static_cast<int>(N))) {
    Index worst = 0;
    for (Index i = 0; i < M; ++i)
      for (Index j = 0; j < N; ++j)
        worst = std::max(worst, count_nonzero(ft[static_cast<std::size_t>(i * N + j)] -
                                                  fa[static_cast<std::size_t>(i * N + pi[static_cast<int>(j)])],
                                              tol));
    best = std::min(best, worst);
  }
  return best;
}

}  // namespace oracle

#endif  // PERMSOLVE_TESTS_ORACLES_HPP
