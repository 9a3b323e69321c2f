#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "logbesov/errors.hpp"

namespace logbesov {

using cplx = std::complex<double>;
using Point = std::array<double, 2>;

inline constexpr double pi = std::numbers::pi;

/// Periodic grid over [-pi, pi)^dim with N = 2^J samples per axis.
struct GridSpec {
  int dim = 1;
  int log2_samples = 14;

  GridSpec() = default;
  GridSpec(int dim_, int log2_samples_) : dim(dim_), log2_samples(log2_samples_) {
    if (dim != 1 && dim != 2)
      throw ConfigError("grid dimension must be 1 or 2");
    if (log2_samples < 6 || log2_samples > 24)
      throw ConfigError("grid needs 6 <= J <= 24 (N >= 64)");
  }

  std::size_t n() const { return std::size_t(1) << log2_samples; }
  std::size_t size() const { return dim == 1 ? n() : n() * n(); }
  /// Deepest Littlewood-Paley level resolved without aliasing.
  int k_max() const { return log2_samples - 2; }
  double dx() const { return 2.0 * pi / double(n()); }
  double cell_volume() const { return std::pow(dx(), dim); }

  /// Deepest cube level whose edge still spans at least 8 samples.
  int l_max() const {
    int l = 0;
    while (std::ldexp(1.0, -(l + 1)) >= 8.0 * dx())
      ++l;
    return l;
  }

  double coordinate(std::size_t i) const { return -pi + double(i) * dx(); }

  Point point(std::size_t flat) const {
    if (dim == 1)
      return {coordinate(flat), 0.0};
    return {coordinate(flat / n()), coordinate(flat % n())};
  }

  /// Integer frequency stored at FFT-order position i along one axis.
  long frequency(std::size_t i) const {
    const long N = long(n());
    return long(i) < N / 2 ? long(i) : long(i) - N;
  }

  std::array<long, 2> frequency_vector(std::size_t flat) const {
    if (dim == 1)
      return {frequency(flat), 0};
    return {frequency(flat / n()), frequency(flat % n())};
  }

  double frequency_norm(std::size_t flat) const {
    auto m = frequency_vector(flat);
    return std::hypot(double(m[0]), double(m[1]));
  }

  bool operator==(const GridSpec &o) const {
    return dim == o.dim && log2_samples == o.log2_samples;
  }
};

/// Integrability exponent in (0, inf] with an explicit infinity marker.
class LpExponent {
public:
  LpExponent() = default;
  LpExponent(double v) : value_(v) {
    if (!(v > 0.0) || std::isnan(v))
      throw ConfigError("exponent must be positive");
    if (std::isinf(v))
      inf_ = true;
  }
  static LpExponent inf() {
    LpExponent e;
    e.inf_ = true;
    e.value_ = std::numeric_limits<double>::infinity();
    return e;
  }
  static LpExponent parse(const std::string &s) {
    if (s == "inf" || s == "INF" || s == "Inf" || s == "infinity")
      return inf();
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size())
      throw ConfigError("cannot parse exponent '" + s + "'");
    return LpExponent(v);
  }

  bool is_inf() const { return inf_; }
  double value() const { return value_; }

  /// Hoelder conjugate; defined for exponents >= 1.
  LpExponent conjugate() const {
    if (inf_)
      return LpExponent(1.0);
    if (value_ < 1.0)
      throw ConfigError("conjugate exponent needs p >= 1");
    if (value_ == 1.0)
      return inf();
    return LpExponent(value_ / (value_ - 1.0));
  }

  std::string str() const {
    if (inf_)
      return "inf";
    std::string s = std::to_string(value_);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.')
      s.pop_back();
    return s;
  }

  bool operator==(const LpExponent &o) const {
    return inf_ == o.inf_ && (inf_ || value_ == o.value_);
  }

private:
  double value_ = 1.0;
  bool inf_ = false;
};

/// Complex samples on the grid, row-major.
struct SampledFunction {
  GridSpec grid;
  std::vector<cplx> values;

  SampledFunction() = default;
  explicit SampledFunction(const GridSpec &g) : grid(g), values(g.size(), cplx{}) {}
  SampledFunction(const GridSpec &g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size())
      throw InputError("sample count does not match grid");
  }

  std::size_t size() const { return values.size(); }
  cplx &operator[](std::size_t i) { return values[i]; }
  const cplx &operator[](std::size_t i) const { return values[i]; }

  SampledFunction &operator+=(const SampledFunction &o) {
    check_same(o);
    for (std::size_t i = 0; i < values.size(); ++i)
      values[i] += o.values[i];
    return *this;
  }
  SampledFunction &operator-=(const SampledFunction &o) {
    check_same(o);
    for (std::size_t i = 0; i < values.size(); ++i)
      values[i] -= o.values[i];
    return *this;
  }
  SampledFunction &operator*=(cplx c) {
    for (auto &v : values)
      v *= c;
    return *this;
  }

  void check_same(const SampledFunction &o) const {
    if (!(grid == o.grid))
      throw InputError("functions live on different grids");
  }
};

inline SampledFunction operator+(SampledFunction a, const SampledFunction &b) { return a += b; }
inline SampledFunction operator-(SampledFunction a, const SampledFunction &b) { return a -= b; }
inline SampledFunction operator*(SampledFunction a, cplx c) { return a *= c; }
inline SampledFunction operator*(cplx c, SampledFunction a) { return a *= c; }

/// Pointwise product.
inline SampledFunction pointwise_product(const SampledFunction &a, const SampledFunction &b) {
  a.check_same(b);
  SampledFunction out(a.grid);
  for (std::size_t i = 0; i < a.size(); ++i)
    out.values[i] = a.values[i] * b.values[i];
  return out;
}

/// Samples fn at every grid point.
template <typename Fn>
SampledFunction sample(const GridSpec &grid, Fn &&fn) {
  SampledFunction out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    out.values[i] = cplx(fn(grid.point(i)));
  return out;
}

/// Fourier coefficients in FFT order along each axis.
struct FrequencyField {
  GridSpec grid;
  std::vector<cplx> coeffs;

  FrequencyField() = default;
  explicit FrequencyField(const GridSpec &g) : grid(g), coeffs(g.size(), cplx{}) {}

  std::size_t index_of(long m1, long m2 = 0) const {
    const long N = long(grid.n());
    if (m1 < -N / 2 || m1 >= N / 2 || m2 < -N / 2 || m2 >= N / 2)
      throw AliasingError("frequency outside [-N/2, N/2)");
    auto wrap = [N](long m) { return std::size_t(m < 0 ? m + N : m); };
    if (grid.dim == 1) {
      if (m2 != 0)
        throw DomainError("second frequency component on a 1D grid");
      return wrap(m1);
    }
    return wrap(m1) * grid.n() + wrap(m2);
  }
  cplx &at(long m1, long m2 = 0) { return coeffs[index_of(m1, m2)]; }
  const cplx &at(long m1, long m2 = 0) const { return coeffs[index_of(m1, m2)]; }
};

inline void require_finite(const SampledFunction &f) {
  for (const auto &v : f.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw InputError("non-finite sample");
}

/// Riemann-sum L^p norm over the torus; quasi-norm for p < 1.
inline double lp_norm(const SampledFunction &f, const LpExponent &p) {
  require_finite(f);
  if (p.is_inf()) {
    double m = 0.0;
    for (const auto &v : f.values)
      m = std::max(m, std::abs(v));
    return m;
  }
  const double e = p.value();
  double s = 0.0;
  if (e == 2.0) {
    for (const auto &v : f.values)
      s += std::norm(v);
  } else if (e == 1.0) {
    for (const auto &v : f.values)
      s += std::abs(v);
  } else {
    for (const auto &v : f.values)
      s += std::pow(std::abs(v), e);
  }
  return std::pow(s * f.grid.cell_volume(), 1.0 / e);
}

inline double max_abs(const SampledFunction &f) { return lp_norm(f, LpExponent::inf()); }

} // namespace logbesov
