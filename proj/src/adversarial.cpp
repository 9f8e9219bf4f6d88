#include "permsolve/adversarial.hpp"

#include <algorithm>
#include <random>

#include "permsolve/sparsity.hpp"
#include "permsolve/spectral.hpp"

namespace permsolve {

namespace {

Filter circular_shift(const Filter& v, Index n) {
  const Index L = v.size();
  Filter out(L);
  for (Index t = 0; t < L; ++t) out((t + n) % L) = v(t);
  return out;
}

// Swap of columns 0 and 1 at every multiple of `period`, identity elsewhere.
PermutationSequence swap_at_multiples(Index length, Index period, int sources) {
  std::vector<int> swap(static_cast<std::size_t>(sources));
  for (int j = 0; j < sources; ++j) swap[static_cast<std::size_t>(j)] = j;
  std::swap(swap[0], swap[1]);
  PermutationSequence s = PermutationSequence::identity(sources, length);
  for (Index w = 0; w < length; w += period) s[w] = Permutation(swap);
  return s;
}

// Builds A = [a + u, b + Tu] and the closed form A_tilde = [b + u, a + Tu].
CounterexampleBundle assemble(const Filter& a, const Filter& b, const Filter& u, Index comb_spikes,
                              CounterexampleFamily family) {
  const Index L = a.size();
  const Filter shifted = circular_shift(u, L / 2);
  FilterMatrix A(1, 2, L);
  A.filter(0, 0) = (a + u).transpose();
  A.filter(0, 1) = (b + shifted).transpose();
  FilterMatrix At(1, 2, L);
  At.filter(0, 0) = (b + u).transpose();
  At.filter(0, 1) = (a + shifted).transpose();
  CounterexampleBundle out{std::move(A), swap_at_multiples(L, 2 * comb_spikes, 2), std::move(At),
                           L / (2 * comb_spikes), family, comb_spikes};
  return out;
}

}  // namespace

std::string family_tag(CounterexampleFamily f) {
  return f == CounterexampleFamily::CombPair ? "lemma3" : "lemma4";
}

CounterexampleFamily family_from_tag(const std::string& tag) {
  if (tag == "lemma3") return CounterexampleFamily::CombPair;
  if (tag == "lemma4") return CounterexampleFamily::DisjointCombPair;
  throw ParseError("unknown counterexample family \"" + tag + "\"");
}

CounterexampleBundle comb_pair_counterexample(Index length, Index k) {
  if (k < 1 || length < 2 || length % (2 * k) != 0)
    throw DomainError("comb-pair counterexample needs 2k | L (L=" + std::to_string(length) + ", k=" + std::to_string(k) +
                      ")");
  if (k == 1)
    throw DomainError("k = 1 is degenerate: the shifted perturbation collides with supp(b), making the second "
                      "filter 2-sparse");
  const Index half_step = length / (2 * k);
  const Filter a = make_comb({length, k, 0, 0});
  const Filter b = -make_comb({length, k, half_step, 0});
  Filter u = Filter::Zero(length);
  u(0) = -a(0);
  u(half_step) = -b(half_step);
  return assemble(a, b, u, k, CounterexampleFamily::CombPair);
}

CounterexampleBundle disjoint_comb_counterexample(Index length, Index k_prime, Index k, std::uint64_t seed) {
  if (k_prime < 1 || length < 2 || length % (2 * k_prime) != 0)
    throw DomainError("disjoint counterexample needs 2k' | L (L=" + std::to_string(length) +
                      ", k'=" + std::to_string(k_prime) + ")");
  if (!(k_prime < k && 2 * k <= length))
    throw DomainError("disjoint counterexample needs k' < k <= L/2 (k'=" + std::to_string(k_prime) +
                      ", k=" + std::to_string(k) + ", L=" + std::to_string(length) + ")");
  const Index spacing = length / (2 * k_prime);  // support of the 2k'-spike comb
  const Index extra = k - k_prime;

  // Each orbit {t, t + L/2} off the comb lattice can host one spike of u.
  std::vector<Index> orbits;
  for (Index t = 0; t < length / 2; ++t)
    if (t % spacing != 0) orbits.push_back(t);
  if (static_cast<Index>(orbits.size()) < extra)
    throw DomainError("not enough free positions for a " + std::to_string(extra) + "-sparse perturbation");

  CounterRng rng(derive_seed(seed, 0x6c656d6d6134));
  for (Index r = 0; r < extra; ++r) {
    std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(r), orbits.size() - 1);
    std::swap(orbits[static_cast<std::size_t>(r)], orbits[pick(rng)]);
  }
  orbits.resize(static_cast<std::size_t>(extra));
  std::sort(orbits.begin(), orbits.end());

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::bernoulli_distribution upper_half(0.5);
  Filter u = Filter::Zero(length);
  for (Index t : orbits) {
    const Index pos = upper_half(rng) ? t + length / 2 : t;
    double v = gauss(rng);
    while (v == 0.0) v = gauss(rng);
    u(pos) = v;
  }

  const Filter a = make_comb({length, k_prime, 0, 0});
  const Filter b = -make_comb({length, k_prime, spacing, 0});
  return assemble(a, b, u, k_prime, CounterexampleFamily::DisjointCombPair);
}

CounterexampleBundle embed_counterexample(const CounterexampleBundle& core, Index channels, Index sources,
                                          Index length, std::uint64_t seed) {
  if (core.a.channels() != 1 || core.a.sources() != 2) throw DimensionError("embedding expects a 1 x 2 core");
  if (length != core.a.filter_length())
    throw DimensionError("embedding length " + std::to_string(length) + " differs from the core's L = " +
                         std::to_string(core.a.filter_length()));
  if (sources < 2) throw DimensionError("embedding needs N >= 2 columns to permute");
  if (channels < 1) throw DimensionError("embedding needs M >= 1");

  Index k = 0;
  for (Index j = 0; j < 2; ++j)
    k = std::max(k, static_cast<Index>(lp_norm(core.a.filter(0, j), NormOrder::counting(), default_zero_tol(core.a))));

  FilterMatrix extra_cols;
  if (sources > 2)
    extra_cols = generate_sparse_matrix(1, sources - 2, length, {k, SupportMode::UniformRandom}, seed);

  FilterMatrix A(channels, sources, length);
  FilterMatrix At(channels, sources, length);
  for (Index i = 0; i < channels; ++i) {
    for (Index j = 0; j < 2; ++j) {
      A.filter(i, j) = core.a.filter(0, j);
      At.filter(i, j) = core.a_tilde.filter(0, j);
    }
    for (Index j = 2; j < sources; ++j) {
      A.filter(i, j) = extra_cols.filter(0, j - 2);
      At.filter(i, j) = extra_cols.filter(0, j - 2);
    }
  }
  CounterexampleBundle out{std::move(A), swap_at_multiples(length, 2 * core.comb_spikes, static_cast<int>(sources)),
                           std::move(At), core.claimed_delta, core.family, core.comb_spikes};
  return out;
}

Json to_json(const CounterexampleBundle& b) {
  Json norms = Json::array();
  const double tol_a = default_zero_tol(b.a);
  const double tol_t = default_zero_tol(b.a_tilde);
  for (double p : {0.0, 0.5, 1.0, 2.0}) {
    norms.push_back(Json{{"p", p},
                         {"A", lp_norm(b.a, NormOrder(p), tol_a)},
                         {"A_tilde", lp_norm(b.a_tilde, NormOrder(p), tol_t)}});
  }
  norms.push_back(Json{{"p", "inf"},
                       {"A", lp_norm(b.a, NormOrder::infinity(), tol_a)},
                       {"A_tilde", lp_norm(b.a_tilde, NormOrder::infinity(), tol_t)}});
  Json j;
  j["family"] = family_tag(b.family);
  j["comb_spikes"] = b.comb_spikes;
  j["claimed_delta"] = b.claimed_delta;
  j["A"] = to_json(b.a);
  j["s"] = to_json(b.s);
  j["A_tilde"] = to_json(b.a_tilde);
  j["lp_norms"] = std::move(norms);
  return j;
}

CounterexampleBundle bundle_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("A") || !j.contains("s") || !j.contains("A_tilde"))
    throw ParseError("bundle document needs \"A\", \"s\" and \"A_tilde\"");
  CounterexampleBundle b{filter_matrix_from_json(j.at("A")), permutation_sequence_from_json(j.at("s")),
                         filter_matrix_from_json(j.at("A_tilde")), j.value("claimed_delta", Index{0}),
                         family_from_tag(j.value("family", std::string("lemma3"))), j.value("comb_spikes", Index{0})};
  return b;
}

}  // namespace permsolve
