#pragma once

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "logbesov/grid.hpp"

namespace logbesov {
namespace detail {

/// Process-wide cache of FFTW plans; planning is serialized, execution is not.
class PlanCache {
public:
  static PlanCache &instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(const GridSpec &g, int sign) {
    const auto key = std::make_tuple(g.dim, g.log2_samples, sign);
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end())
      return it->second;
    std::vector<cplx> in(g.size()), out(g.size());
    auto *pin = reinterpret_cast<fftw_complex *>(in.data());
    auto *pout = reinterpret_cast<fftw_complex *>(out.data());
    const int N = int(g.n());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = g.dim == 1 ? fftw_plan_dft_1d(N, pin, pout, sign, flags)
                                : fftw_plan_dft_2d(N, N, pin, pout, sign, flags);
    if (!plan)
      throw Error("FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto &kv : plans_)
      fftw_destroy_plan(kv.second);
  }

private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

inline void execute(const GridSpec &g, int sign, const std::vector<cplx> &in, std::vector<cplx> &out) {
  out.resize(g.size());
  fftw_plan plan = PlanCache::instance().get(g, sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex *>(const_cast<cplx *>(in.data())),
                   reinterpret_cast<fftw_complex *>(out.data()));
}

/// (-1)^(m1+m2): moves the transform origin from index 0 to the point -pi.
inline double origin_sign(const GridSpec &g, std::size_t flat) {
  auto m = g.frequency_vector(flat);
  return ((m[0] + m[1]) & 1) ? -1.0 : 1.0;
}

} // namespace detail

/// Unnormalized DFT of the samples, FFT order.  Multipliers applied to this
/// spectrum and undone with inverse_raw() need no phase bookkeeping.
inline std::vector<cplx> forward_raw(const SampledFunction &f) {
  std::vector<cplx> out;
  detail::execute(f.grid, FFTW_FORWARD, f.values, out);
  return out;
}

/// Inverse of forward_raw() including the 1/N^dim normalization.
inline SampledFunction inverse_raw(const GridSpec &g, const std::vector<cplx> &spectrum) {
  SampledFunction out(g);
  detail::execute(g, FFTW_BACKWARD, spectrum, out.values);
  const double scale = 1.0 / double(g.size());
  for (auto &v : out.values)
    v *= scale;
  return out;
}

/// Fourier coefficients c_m with f(x) = sum_m c_m e^{i m.x} on [-pi, pi)^dim.
inline FrequencyField forward(const SampledFunction &f) {
  FrequencyField F(f.grid);
  detail::execute(f.grid, FFTW_FORWARD, f.values, F.coeffs);
  const double scale = 1.0 / double(f.grid.size());
  for (std::size_t i = 0; i < F.coeffs.size(); ++i)
    F.coeffs[i] *= scale * detail::origin_sign(f.grid, i);
  return F;
}

inline SampledFunction inverse(const FrequencyField &F) {
  std::vector<cplx> tmp(F.coeffs.size());
  for (std::size_t i = 0; i < tmp.size(); ++i)
    tmp[i] = F.coeffs[i] * detail::origin_sign(F.grid, i);
  SampledFunction out(F.grid);
  detail::execute(F.grid, FFTW_BACKWARD, tmp, out.values);
  return out;
}

/// Applies a real Fourier multiplier given in FFT order.
inline SampledFunction apply_multiplier(const SampledFunction &f, const std::vector<double> &symbol) {
  auto spec = forward_raw(f);
  for (std::size_t i = 0; i < spec.size(); ++i)
    spec[i] *= symbol[i];
  return inverse_raw(f.grid, spec);
}

/// Squared L^2 norm via Parseval: (2 pi)^dim sum |c_m|^2.
inline double parseval_energy(const FrequencyField &F) {
  double s = 0.0;
  for (const auto &c : F.coeffs)
    s += std::norm(c);
  return s * std::pow(2.0 * pi, F.grid.dim);
}

} // namespace logbesov
