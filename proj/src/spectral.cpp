#include "permsolve/spectral.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

namespace permsolve {

namespace {

// Eigen::FFT caches twiddles per size and is not safe to share across threads.
Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::Unscaled);
    return f;
  }();
  return engine;
}

void require_comb_params(Index length, Index spikes) {
  if (length < 1 || spikes < 1 || length % spikes != 0)
    throw DomainError("comb needs spike count dividing L (L=" + std::to_string(length) +
                      ", q=" + std::to_string(spikes) + ")");
}

}  // namespace

VectorXc dft(const Eigen::Ref<const VectorXc>& v) {
  if (v.size() <= 1) return v;
  VectorXc in = v;
  VectorXc out(v.size());
  fft_engine().fwd(out, in);
  return out / std::sqrt(static_cast<double>(v.size()));
}

VectorXc idft(const Eigen::Ref<const VectorXc>& v) {
  if (v.size() <= 1) return v;
  VectorXc in = v;
  VectorXc out(v.size());
  fft_engine().inv(out, in);
  return out / std::sqrt(static_cast<double>(v.size()));
}

FilterMatrix to_frequency(const FilterMatrix& time_domain) {
  FilterMatrix out(time_domain.channels(), time_domain.sources(), time_domain.filter_length());
  for (Index r = 0; r < time_domain.filter_count(); ++r)
    out.data().row(r) = dft(time_domain.data().row(r).transpose()).transpose();
  return out;
}

FilterMatrix to_time(const FilterMatrix& frequency_domain) {
  FilterMatrix out(frequency_domain.channels(), frequency_domain.sources(), frequency_domain.filter_length());
  for (Index r = 0; r < frequency_domain.filter_count(); ++r)
    out.data().row(r) = idft(frequency_domain.data().row(r).transpose()).transpose();
  return out;
}

FilterMatrix permute_spectrum(const FilterMatrix& spectrum, const PermutationSequence& s) {
  if (s.length() != spectrum.filter_length())
    throw DimensionError("permutation sequence length " + std::to_string(s.length()) + " differs from L = " +
                         std::to_string(spectrum.filter_length()));
  if (s.num_sources() != spectrum.sources())
    throw DimensionError("permutations act on " + std::to_string(s.num_sources()) + " sources, matrix has N = " +
                         std::to_string(spectrum.sources()));
  FilterMatrix out(spectrum.channels(), spectrum.sources(), spectrum.filter_length());
  for (Index w = 0; w < spectrum.filter_length(); ++w) {
    const Permutation& sigma = s[w];
    for (Index i = 0; i < spectrum.channels(); ++i)
      for (Index j = 0; j < spectrum.sources(); ++j) out(i, j, w) = spectrum(i, sigma[static_cast<int>(j)], w);
  }
  return out;
}

FilterMatrix apply_frequency_permutations(const FilterMatrix& a, const PermutationSequence& s) {
  return to_time(permute_spectrum(to_frequency(a), s));
}

Filter make_comb(const CombSpec& c) {
  require_comb_params(c.length, c.spikes);
  const Index step = c.step();
  if (c.shift < 0 || c.shift >= step) throw DomainError("comb shift must lie in [0, L/q)");
  if (c.modulation < 0 || c.modulation >= c.spikes) throw DomainError("comb modulation must lie in [0, q)");
  Filter f = Filter::Zero(c.length);
  const double amp = 1.0 / std::sqrt(static_cast<double>(c.spikes));
  for (Index r = 0; r < c.spikes; ++r) {
    const Index t = c.shift + r * step;
    // m (t - n) = m r step, reduced mod L for an exact phase argument.
    const Index phase_index = (c.modulation * r * step) % c.length;
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(phase_index) / static_cast<double>(c.length);
    f(t) = amp * Complex(std::cos(phase), std::sin(phase));
  }
  return f;
}

CombDetection detect_comb_difference(const Eigen::Ref<const VectorXc>& x, const Eigen::Ref<const VectorXc>& y,
                                     Index spikes, double tol) {
  if (x.size() != y.size()) throw DimensionError("comb detection needs equal-length filters");
  require_comb_params(x.size(), spikes);
  const VectorXc d = x - y;
  const double energy = d.squaredNorm();
  CombDetection out;
  if (energy == 0.0) {
    out.zero_difference = true;
    return out;
  }
  const Index step = x.size() / spikes;
  double best_residual = energy;
  for (Index n = 0; n < step; ++n) {
    for (Index m = 0; m < spikes; ++m) {
      const Filter comb = make_comb({x.size(), spikes, n, m});
      const Complex gamma = comb.dot(d);  // conjugates comb
      const double residual = (d - gamma * comb).squaredNorm();
      if (residual < best_residual) {
        best_residual = residual;
        if (residual <= tol * tol * energy) out.match = CombMatch{gamma, n, m};
      }
    }
  }
  return out;
}

}  // namespace permsolve
