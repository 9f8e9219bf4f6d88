#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "permsolve/filters.hpp"
#include "permsolve/json_io.hpp"
#include "permsolve/spectral.hpp"

using namespace permsolve;

TEST_CASE("dense filter when k equals L") {
  const FilterMatrix a = generate_sparse_matrix(1, 1, 4, {4, SupportMode::UniformRandom}, 3);
  CHECK(support(a.filter(0, 0), 0.0).size() == 4);
}

TEST_CASE("uniform mode gives exactly k nonzeros with real Gaussian values") {
  const FilterMatrix a = generate_sparse_matrix(2, 2, 31, {3, SupportMode::UniformRandom}, 7);
  CHECK(a.filter_count() == 4);
  for (Index r = 0; r < a.filter_count(); ++r) {
    CHECK(oracle::count_nonzero(a.data().row(r).transpose(), 0.0) == 3);
    CHECK(a.data().row(r).imag().cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("support cardinality over many generated filters") {
  Index bad = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Index L = 5 + static_cast<Index>(seed % 40);
    const Index k = 1 + static_cast<Index>(seed % static_cast<std::uint64_t>(L));
    const FilterMatrix a = generate_sparse_matrix(4, 5, L, {k, SupportMode::UniformRandom}, seed);
    for (Index r = 0; r < a.filter_count(); ++r)
      bad += oracle::count_nonzero(a.data().row(r).transpose(), 0.0) != k ? 1 : 0;
  }
  CHECK(bad == 0);
}

TEST_CASE("disjoint mode keeps supports in a row apart") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const FilterMatrix a = generate_sparse_matrix(3, 3, 12, {4, SupportMode::DisjointBlocks}, seed);
    for (Index i = 0; i < 3; ++i) {
      std::set<Index> seen;
      Index total = 0;
      for (Index j = 0; j < 3; ++j) {
        const auto s = support(a.filter(i, j), 0.0);
        CHECK(s.size() == 4);
        total += static_cast<Index>(s.size());
        seen.insert(s.begin(), s.end());
      }
      CHECK(static_cast<Index>(seen.size()) == total);
    }
  }
  const FilterMatrix b = generate_sparse_matrix(1, 2, 8, {4, SupportMode::DisjointBlocks}, 1);
  const auto s0 = support(b.filter(0, 0), 0.0);
  const auto s1 = support(b.filter(0, 1), 0.0);
  std::vector<Index> both;
  std::set_intersection(s0.begin(), s0.end(), s1.begin(), s1.end(), std::back_inserter(both));
  CHECK(both.empty());
}

TEST_CASE("generation rejects impossible sparsity") {
  CHECK_THROWS_AS(generate_sparse_matrix(1, 1, 4, {5, SupportMode::UniformRandom}, 0), DomainError);
  CHECK_THROWS_AS(generate_sparse_matrix(1, 1, 4, {0, SupportMode::UniformRandom}, 0), DomainError);
  CHECK_THROWS_AS(generate_sparse_matrix(1, 3, 8, {3, SupportMode::DisjointBlocks}, 0), DomainError);
  CHECK_NOTHROW(generate_sparse_matrix(1, 2, 8, {4, SupportMode::DisjointBlocks}, 0));
}

TEST_CASE("generation is deterministic per seed") {
  const auto a = generate_sparse_matrix(2, 3, 17, {5, SupportMode::UniformRandom}, 42);
  const auto b = generate_sparse_matrix(2, 3, 17, {5, SupportMode::UniformRandom}, 42);
  const auto c = generate_sparse_matrix(2, 3, 17, {5, SupportMode::UniformRandom}, 43);
  CHECK(a == b);
  CHECK_FALSE(a == c);
}

TEST_CASE("support with tolerance") {
  CHECK(support(Filter::Zero(5), 0.0).empty());
  Filter f(4);
  f << 1.0, 0.0, 1e-12, 0.0;
  CHECK(support(f, 1e-9) == std::vector<Index>{0});
  CHECK(support(make_comb({8, 2, 0, 0}), 1e-9) == std::vector<Index>{0, 4});
}

TEST_CASE("default zero tolerance") {
  CHECK(default_zero_tol(FilterMatrix(1, 1, 3)) == 1e-9);
  FilterMatrix a(1, 2, 3);
  a(0, 1, 2) = Complex(0.0, -4.0);
  CHECK(default_zero_tol(a) == doctest::Approx(4e-9));
}

TEST_CASE("column permutation") {
  const auto a = generate_sparse_matrix(2, 3, 5, {2, SupportMode::UniformRandom}, 5);
  const Permutation pi(std::vector<int>{2, 0, 1});
  const auto b = a.permuted_columns(pi);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 3; ++j) CHECK(b.filter(i, j) == a.filter(i, pi[static_cast<int>(j)]));
}

TEST_CASE("serialization round-trips bit-exactly") {
  FilterMatrix a = generate_sparse_matrix(2, 3, 9, {9, SupportMode::UniformRandom}, 11);
  a(1, 2, 3) = Complex(1.0 / 3.0, -std::ldexp(1.0, -1070));
  a(0, 0, 0) = Complex(-0.0, 1e300);
  const FilterMatrix b = deserialize(serialize(a));
  REQUIRE(b.same_shape(a));
  for (Index r = 0; r < a.filter_count(); ++r)
    for (Index t = 0; t < a.filter_length(); ++t) {
      CHECK(b.data()(r, t).real() == a.data()(r, t).real());
      CHECK(b.data()(r, t).imag() == a.data()(r, t).imag());
      CHECK(std::signbit(b.data()(r, t).real()) == std::signbit(a.data()(r, t).real()));
    }
}

TEST_CASE("deserialization errors") {
  CHECK_THROWS_AS(deserialize("{\"M\":1,\"N\":1,\"L\":2,\"filters\":[[[1,0]]]}"), DimensionError);
  CHECK_THROWS_AS(deserialize("{\"M\":1,\"N\":2,\"L\":1,\"filters\":[[[1,0]]]}"), DimensionError);
  CHECK_THROWS_AS(deserialize("{\"M\":1,\"N\":1,\"L\":1,\"filters\":[[[1,0]]"), ParseError);
  CHECK_THROWS_AS(deserialize("{\"M\":1,\"N\":1,\"L\":1}"), ParseError);
  try {
    deserialize("{\"M\": 1, oops}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
}

TEST_CASE("complex entries as [re, im] pairs") {
  const FilterMatrix a = deserialize("{\"M\":1,\"N\":1,\"L\":2,\"filters\":[[[1.5,-2],[0,0.25]]]}");
  CHECK(a(0, 0, 0) == Complex(1.5, -2.0));
  CHECK(a(0, 0, 1) == Complex(0.0, 0.25));
}

TEST_CASE("non-finite entries are rejected on output") {
  FilterMatrix a(1, 1, 2);
  a(0, 0, 1) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(serialize(a), ContractError);
}

TEST_CASE("permutation sequence documents") {
  const PermutationSequence s = random_permutation_sequence(3, 6, 9);
  const PermutationSequence t = deserialize_sequence(serialize(s));
  CHECK(t == s);
  CHECK_THROWS_AS(deserialize_sequence("{\"L\":2,\"N\":2,\"perms\":[[0,1],[0,0]]}"), DomainError);
  CHECK_THROWS_AS(deserialize_sequence("{\"L\":3,\"N\":2,\"perms\":[[0,1],[1,0]]}"), DimensionError);
}

TEST_CASE("permutation algebra") {
  const Permutation p(std::vector<int>{1, 2, 0});
  const Permutation q(std::vector<int>{0, 2, 1});
  CHECK(p.compose(p.inverse()).is_identity());
  CHECK(p.compose(q)[1] == p[q[1]]);
  CHECK_THROWS_AS(Permutation(std::vector<int>{0, 2}), DomainError);
  const auto all = all_permutations(4);
  CHECK(all.size() == 24);
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(all.front().is_identity());
}
