#ifndef PERMSOLVE_ADVERSARIAL_HPP
#define PERMSOLVE_ADVERSARIAL_HPP

#include <cstdint>
#include <string>

#include "permsolve/filters.hpp"
#include "permsolve/json_io.hpp"
#include "permsolve/permutation.hpp"

namespace permsolve {

enum class CounterexampleFamily {
  /// Two overlapping combs perturbed by a two-spike u (tag "lemma3").
  CombPair,
  /// Two combs plus a sparse u whose support avoids both combs (tag "lemma4").
  DisjointCombPair,
};

std::string family_tag(CounterexampleFamily f);
CounterexampleFamily family_from_tag(const std::string& tag);

/// A matrix A and a frequency-permutation sequence s whose image A_tilde has
/// the same l^p norm as A for every p, filter by filter, yet is not a
/// global permutation of A.
struct CounterexampleBundle {
  FilterMatrix a;
  PermutationSequence s;
  FilterMatrix a_tilde;
  Index claimed_delta = 0;
  CounterexampleFamily family = CounterexampleFamily::CombPair;
  /// Spike count of the underlying comb (k, resp. k').
  Index comb_spikes = 0;
};

/// A = [a + u, b + T_{L/2} u] with a = comb(k, 0, 0), b = -comb(k, L/2k, 0) and
/// u = -a[0] delta_0 - b[L/2k] delta_{L/2k}; s swaps the columns at w = 2kr.
/// Requires 2k | L and k >= 2.
///
/// For odd k the shifted perturbation lands on supp(b), so the second column
/// carries k + 1 nonzeros; the norm equalities are unaffected.
CounterexampleBundle comb_pair_counterexample(Index length, Index k);

/// Same construction from combs with k' spikes and a seeded (k - k')-sparse
/// Gaussian u such that a, b, u and T_{L/2} u have pairwise disjoint supports.
/// Both columns are then exactly k-sparse with disjoint supports.
/// Requires k' < k <= L/2 and 2k' | L.
CounterexampleBundle disjoint_comb_counterexample(Index length, Index k_prime, Index k, std::uint64_t seed);

/// Places the 1 x 2 core in columns 0 and 1 of an M x N matrix. The other N - 2
/// columns are random sparse filters left untouched by s, and every row copies row 0.
CounterexampleBundle embed_counterexample(const CounterexampleBundle& core, Index channels, Index sources,
                                          Index length, std::uint64_t seed);

Json to_json(const CounterexampleBundle& b);
CounterexampleBundle bundle_from_json(const Json& j);

}  // namespace permsolve

#endif  // PERMSOLVE_ADVERSARIAL_HPP
