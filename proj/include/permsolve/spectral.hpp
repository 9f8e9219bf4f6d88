#ifndef PERMSOLVE_SPECTRAL_HPP
#define PERMSOLVE_SPECTRAL_HPP

#include <optional>

#include "permsolve/filters.hpp"
#include "permsolve/permutation.hpp"

namespace permsolve {

// Unitary DFT: (F v)[w] = L^{-1/2} sum_t v[t] exp(-2 i pi w t / L), and its inverse.
VectorXc dft(const Eigen::Ref<const VectorXc>& v);
VectorXc idft(const Eigen::Ref<const VectorXc>& v);

/// Applies the unitary DFT to every filter (each storage row).
FilterMatrix to_frequency(const FilterMatrix& time_domain);
FilterMatrix to_time(const FilterMatrix& frequency_domain);

/// Per-frequency column permutation: in the frequency domain,
/// result(i, j)[w] = a(i, s[w](j))[w]. The output is returned in the time domain.
FilterMatrix apply_frequency_permutations(const FilterMatrix& a, const PermutationSequence& s);

/// Same as apply_frequency_permutations but both input and output stay in
/// the frequency domain.
FilterMatrix permute_spectrum(const FilterMatrix& spectrum, const PermutationSequence& s);

/// Translated and modulated unit Dirac comb with `spikes` spikes (step L / spikes).
struct CombSpec {
  Index length = 1;
  Index spikes = 1;
  Index shift = 0;       // 0 <= shift < L / spikes
  Index modulation = 0;  // 0 <= modulation < spikes

  Index step() const noexcept { return spikes > 0 ? length / spikes : 0; }
};

/// c[t] = spikes^{-1/2} exp(2 i pi m (t - n) / L) for t = n (mod step), zero elsewhere.
Filter make_comb(const CombSpec& c);

struct CombMatch {
  Complex scale;
  Index shift = 0;
  Index modulation = 0;
};

struct CombDetection {
  std::optional<CombMatch> match;
  bool zero_difference = false;
};

/// Looks for (scale, n, m) with ||(x - y) - scale * comb(q, n, m)|| <= tol ||x - y||.
/// Every (n, m) is tried by projection onto the orthonormal comb basis.
CombDetection detect_comb_difference(const Eigen::Ref<const VectorXc>& x, const Eigen::Ref<const VectorXc>& y,
                                     Index spikes, double tol);

}  // namespace permsolve

#endif  // PERMSOLVE_SPECTRAL_HPP
