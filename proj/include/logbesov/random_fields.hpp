#pragma once

#include <cstdint>
#include <random>

#include "logbesov/fft.hpp"

namespace logbesov {

/// Trigonometric polynomial with Gaussian coefficients on 0 < |m| < band
/// (plus a Gaussian mean), normalized to unit L^inf norm.
inline SampledFunction random_band_limited(const GridSpec &g, double band, std::uint64_t seed) {
  if (!(band >= 1.0) || band > double(g.n()) / 2.0)
    throw ConfigError("band must lie in [1, N/2]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  FrequencyField F(g);
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    if (g.frequency_norm(i) < band) {
      const double re = normal(rng);
      const double im = normal(rng);
      F.coeffs[i] = {re, im};
    }
  }
  auto f = inverse(F);
  const double m = max_abs(f);
  if (m > 0.0)
    f *= 1.0 / m;
  return f;
}

} // namespace logbesov
