#include "permsolve/filters.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "permsolve/json_io.hpp"

namespace permsolve {

void require_same_shape(const FilterMatrix& a, const FilterMatrix& b, const char* what) {
  if (!a.same_shape(b))
    throw DimensionError(std::string(what) + ": shape mismatch (" + std::to_string(a.channels()) + "x" +
                         std::to_string(a.sources()) + "x" + std::to_string(a.filter_length()) + " vs " +
                         std::to_string(b.channels()) + "x" + std::to_string(b.sources()) + "x" +
                         std::to_string(b.filter_length()) + ")");
}

namespace {

double nonzero_gaussian(CounterRng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  double x = gauss(rng);
  while (x == 0.0) x = gauss(rng);
  return x;
}

// First `count` entries of a seeded partial Fisher-Yates shuffle of {0..length-1}.
std::vector<Index> random_subset(CounterRng& rng, Index length, Index count) {
  std::vector<Index> pool(static_cast<std::size_t>(length));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index r = 0; r < count; ++r) {
    std::uniform_int_distribution<Index> pick(r, length - 1);
    std::swap(pool[static_cast<std::size_t>(r)], pool[static_cast<std::size_t>(pick(rng))]);
  }
  pool.resize(static_cast<std::size_t>(count));
  return pool;
}

}  // namespace

FilterMatrix generate_sparse_matrix(Index channels, Index sources, Index length, const SparseSpec& spec,
                                    std::uint64_t seed) {
  if (spec.k < 1 || spec.k > length)
    throw DomainError("sparsity k=" + std::to_string(spec.k) + " must satisfy 1 <= k <= L=" + std::to_string(length));
  if (spec.mode == SupportMode::DisjointBlocks && sources * spec.k > length)
    throw DomainError("disjoint supports need N*k <= L (N*k=" + std::to_string(sources * spec.k) +
                      ", L=" + std::to_string(length) + ")");

  FilterMatrix m(channels, sources, length);
  for (Index i = 0; i < channels; ++i) {
    std::vector<Index> row_positions;
    if (spec.mode == SupportMode::DisjointBlocks) {
      CounterRng row_rng(derive_seed(seed, 0x726f77, i));
      row_positions = random_subset(row_rng, length, sources * spec.k);
    }
    for (Index j = 0; j < sources; ++j) {
      CounterRng rng(derive_seed(seed, i, j));
      std::vector<Index> supp;
      if (spec.mode == SupportMode::DisjointBlocks) {
        auto first = row_positions.begin() + static_cast<std::ptrdiff_t>(j * spec.k);
        supp.assign(first, first + static_cast<std::ptrdiff_t>(spec.k));
      } else {
        supp = random_subset(rng, length, spec.k);
      }
      std::sort(supp.begin(), supp.end());
      for (Index t : supp) m(i, j, t) = Complex(nonzero_gaussian(rng), 0.0);
    }
  }
  return m;
}

double default_zero_tol(const FilterMatrix& m) {
  const double peak = m.max_abs();
  return 1e-9 * (peak > 0.0 ? peak : 1.0);
}

std::string serialize(const FilterMatrix& m) { return dump_json(to_json(m)); }

FilterMatrix deserialize(std::string_view document) { return filter_matrix_from_json(parse_json(document)); }

}  // namespace permsolve
