#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "permsolve/adversarial.hpp"
#include "permsolve/filters.hpp"
#include "permsolve/sparsity.hpp"
#include "permsolve/spectral.hpp"

using namespace permsolve;

TEST_CASE("lp norm arithmetic") {
  FilterMatrix a(1, 1, 3);
  a(0, 0, 0) = 3.0;
  a(0, 0, 1) = Complex(0.0, 4.0);
  CHECK(lp_norm(a, NormOrder(1.0)) == 7.0);
  CHECK(lp_norm(a, NormOrder::counting()) == 2.0);
  CHECK(lp_norm(a, NormOrder(2.0)) == 25.0);
  CHECK(lp_norm(a, NormOrder::infinity()) == 4.0);
  CHECK(lp_norm(a, NormOrder(0.5)) == doctest::Approx(std::sqrt(3.0) + 2.0));
  const FilterMatrix z(2, 2, 4);
  for (double p : {0.0, 0.5, 1.0, 2.0}) CHECK(lp_norm(z, NormOrder(p)) == 0.0);
  CHECK(lp_norm(z, NormOrder::infinity()) == 0.0);
  CHECK_THROWS_AS(NormOrder(-1.0), DomainError);
}

TEST_CASE("lp norm matches a direct sum") {
  const FilterMatrix a = apply_frequency_permutations(generate_sparse_matrix(2, 2, 13, {4, SupportMode::UniformRandom}, 3),
                                                      random_permutation_sequence(2, 13, 4));
  const double tol = default_zero_tol(a);
  for (double p : {0.0, 0.3, 1.0, 1.9, 2.0, 3.5})
    CHECK(lp_norm(a, NormOrder(p)) == doctest::Approx(oracle::lp_sum(a, p, tol)).epsilon(1e-12));
}

TEST_CASE("comb sparsity") {
  FilterMatrix a(1, 1, 12);
  a.filter(0, 0) = make_comb({12, 4, 1, 3}).transpose();
  CHECK(lp_norm(a, NormOrder::counting()) == 4.0);
}

TEST_CASE("well-posedness constants") {
  CHECK(alpha(2) == Rational(1, 4));
  CHECK(alpha(3) == Rational(1, 8));
  CHECK(alpha(4) == Rational(1, 12));
  CHECK(alpha_weak(2) == Rational(1, 4));
  CHECK(alpha_weak(3) == Rational(1, 12));
  CHECK(alpha_caratheodory(3) == Rational(1, 10));
  CHECK(alpha(5).to_double() == doctest::Approx(2.0 / 36.0));
  for (int n = 2; n <= 10; ++n) {
    CHECK(alpha_weak(n) <= alpha(n));
    CHECK(alpha_caratheodory(n) <= alpha(n));
  }
}

TEST_CASE("rational helpers") {
  CHECK(Rational(6, -8) == Rational(-3, 4));
  CHECK((Rational(1, 4) * Rational(2, 1)) == Rational(1, 2));
  CHECK(Rational(7, 2).ceil() == 4);
  CHECK(Rational(8, 2).ceil() == 4);
  CHECK(Rational(1, 3) < Rational(1, 2));
}

TEST_CASE("delta of equivalent matrices is zero") {
  const FilterMatrix a = generate_sparse_matrix(2, 3, 11, {3, SupportMode::UniformRandom}, 8);
  const DeltaReport same = delta(a, a);
  CHECK(same.delta == 0);
  CHECK(same.best_global_perm.is_identity());
  const Permutation swap(std::vector<int>{1, 0, 2});
  const DeltaReport swapped = delta(a.permuted_columns(swap), a);
  CHECK(swapped.delta == 0);
  CHECK(swapped.best_global_perm == swap);
}

TEST_CASE("delta matches the definition and is symmetric") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Index L = 5 + static_cast<Index>(seed % 9);
    const FilterMatrix a = generate_sparse_matrix(2, 2, L, {2, SupportMode::UniformRandom}, seed);
    PermutationSequence s = PermutationSequence::identity(2, L);
    CounterRng rng(seed);
    for (Index w = 0; w < L; ++w)
      if (rng() % 3 == 0) s[w] = Permutation(std::vector<int>{1, 0});
    const FilterMatrix at = apply_frequency_permutations(a, s);
    const Index d = delta(at, a).delta;
    CHECK(d == oracle::naive_delta(at, a));
    CHECK(d == delta(a, at).delta);
  }
}

TEST_CASE("delta of the two-comb construction") {
  const CounterexampleBundle b = comb_pair_counterexample(8, 2);
  const DeltaReport r = delta(b.a_tilde, b.a);
  CHECK(r.delta == 2);
  CHECK(r.per_pair.rows() == 1);
  CHECK(r.per_pair.cols() == 2);
}

TEST_CASE("equivalence up to a global permutation") {
  const FilterMatrix a = generate_sparse_matrix(2, 3, 7, {2, SupportMode::UniformRandom}, 4);
  REQUIRE(is_equivalent(a, a));
  CHECK(is_equivalent(a, a)->is_identity());
  const Permutation rev(std::vector<int>{2, 1, 0});
  REQUIRE(is_equivalent(a.permuted_columns(rev), a));
  CHECK(*is_equivalent(a.permuted_columns(rev), a) == rev);
  const CounterexampleBundle b = comb_pair_counterexample(8, 2);
  CHECK_FALSE(is_equivalent(b.a_tilde, b.a));
}

TEST_CASE("snr") {
  const FilterMatrix a = generate_sparse_matrix(2, 2, 16, {4, SupportMode::UniformRandom}, 21);
  const SnrReport exact = snr(a, a);
  CHECK(exact.exact_match);
  CHECK(exact.db == SnrReport::kExactMatchDb);
  CHECK(exact.db > 100.0);

  FilterMatrix noisy = a;
  FilterMatrix e(2, 2, 16);
  CounterRng rng(3);
  std::normal_distribution<double> g;
  for (Index r = 0; r < e.filter_count(); ++r)
    for (Index t = 0; t < 16; ++t) e.data()(r, t) = Complex(g(rng), g(rng));
  e.data() *= std::sqrt(a.data().squaredNorm() * 1e-10 / e.data().squaredNorm());
  noisy.data() += e.data();
  CHECK(snr(a, noisy).db == doctest::Approx(100.0).epsilon(1e-8));

  const Permutation swap(std::vector<int>{1, 0});
  const SnrReport sw = snr(a, a.permuted_columns(swap));
  CHECK(sw.exact_match);
  CHECK(sw.best_perm == swap);

  // Invariant under a common column permutation and a common scale.
  const double base = snr(a, noisy).db;
  CHECK(snr(a.permuted_columns(swap), noisy.permuted_columns(swap)).db == doctest::Approx(base).epsilon(1e-12));
  FilterMatrix as = a, ns = noisy;
  as.data() *= Complex(-2.5, 1.0);
  ns.data() *= Complex(-2.5, 1.0);
  CHECK(snr(as, ns).db == doctest::Approx(base).epsilon(1e-9));

  CHECK_THROWS_AS(snr(FilterMatrix(1, 2, 4), FilterMatrix(1, 2, 4)), ContractError);
  CHECK_THROWS_AS(snr(a, FilterMatrix(2, 2, 15)), DimensionError);
}

TEST_CASE("uncertainty budget") {
  CHECK(check_uncertainty_budget(1, 29, 31, true) == Wellposedness::WellPosed);
  CHECK(check_uncertainty_budget(2, 28, 31, true) == Wellposedness::NotGuaranteed);
  CHECK(check_uncertainty_budget(2, 2, 8, false) == Wellposedness::NotGuaranteed);
  CHECK(check_uncertainty_budget(1, 3, 8, false) == Wellposedness::WellPosed);
  CHECK_THROWS_AS(check_uncertainty_budget(1, 3, 8, true), DomainError);
  CHECK(is_prime(31));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(91));
}

TEST_CASE("discrete uncertainty principles on random sparse vectors") {
  for (Index L : {12, 31}) {
    CounterRng rng(static_cast<std::uint64_t>(L));
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
      const Index k = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(L));
      std::vector<Index> idx(static_cast<std::size_t>(L));
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng);
      VectorXc u = VectorXc::Zero(L);
      for (Index r = 0; r < k; ++r) u(idx[static_cast<std::size_t>(r)]) = g(rng);
      const Index sx = oracle::count_nonzero(u, 1e-9 * u.cwiseAbs().maxCoeff());
      const VectorXc f = dft(u);
      const Index sf = oracle::count_nonzero(f, 1e-9 * f.cwiseAbs().maxCoeff());
      CHECK(sx * sf >= L);
      if (is_prime(L)) CHECK(sx + sf >= L + 1);
    }
  }
}
