#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "logbesov/cubes.hpp"
#include "logbesov/fft.hpp"
#include "logbesov/partition.hpp"

namespace logbesov {

/// Samples of e^{i k.x}.
inline SampledFunction make_exponential(const GridSpec &g, std::array<long, 2> k) {
  const long half = long(g.n()) / 2;
  if (std::labs(k[0]) >= half || std::labs(k[1]) >= half)
    throw AliasingError("frequency at or beyond N/2");
  if (g.dim == 1 && k[1] != 0)
    throw DomainError("second frequency component on a 1D grid");
  return sample(g, [&](const Point &x) {
    return std::polar(1.0, double(k[0]) * x[0] + double(k[1]) * x[1]);
  });
}

enum class IndicatorShape { Halfspace, Cube, Rectangle };

struct IndicatorSpec {
  IndicatorShape shape = IndicatorShape::Cube;
  /// Rectangle [lo, hi) per axis, used only for IndicatorShape::Rectangle.
  std::array<double, 2> lo{-pi, -pi};
  std::array<double, 2> hi{pi, pi};
};

/// {0,1}-valued samples of a halfspace {x_n >= 0}, the open cube (-1,1)^n, or a rectangle.
inline SampledFunction make_indicator(const GridSpec &g, const IndicatorSpec &spec) {
  if (spec.shape == IndicatorShape::Rectangle)
    for (int a = 0; a < g.dim; ++a)
      if (spec.lo[a] < -pi || spec.hi[a] > pi || spec.lo[a] > spec.hi[a])
        throw DomainError("rectangle outside the torus");
  return sample(g, [&](const Point &x) {
    switch (spec.shape) {
    case IndicatorShape::Halfspace:
      return x[g.dim - 1] >= 0.0 ? 1.0 : 0.0;
    case IndicatorShape::Cube:
      for (int a = 0; a < g.dim; ++a)
        if (!(x[a] > -1.0 && x[a] < 1.0))
          return 0.0;
      return 1.0;
    case IndicatorShape::Rectangle:
      for (int a = 0; a < g.dim; ++a)
        if (!(x[a] >= spec.lo[a] && x[a] < spec.hi[a]))
          return 0.0;
      return 1.0;
    }
    return 0.0;
  });
}

/// Convolution with a normalized C-infinity bump of radius width.
inline SampledFunction make_mollified(const SampledFunction &f, double width) {
  if (!(width > 0.0) || width >= pi)
    throw ConfigError("mollifier width must lie in (0, pi)");
  auto kernel = sample(f.grid, [&](const Point &x) {
    double r2 = x[0] * x[0] + (f.grid.dim == 2 ? x[1] * x[1] : 0.0);
    r2 /= width * width;
    return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
  });
  double mass = 0.0;
  for (const auto &v : kernel.values)
    mass += v.real();
  // Kernel centred at x = 0, which sits at index N/2 of each axis.
  auto kf = forward(kernel);
  auto ff = forward(f);
  const double vol = std::pow(2.0 * pi, f.grid.dim);
  const double norm = 1.0 / (mass * f.grid.cell_volume());
  for (std::size_t i = 0; i < ff.coeffs.size(); ++i)
    ff.coeffs[i] *= kf.coeffs[i] * vol * norm;
  return inverse(ff);
}

// ---------------------------------------------------------------------------
// Bumps and stacks

/// Profile along one axis: 1 on [0,1/4], 0 outside (-1/8, 3/8).
inline double positive_lobe(double t) { return smooth_step(8.0 * (t + 0.125)) * (1.0 - smooth_step(8.0 * (t - 0.25))); }

/// Profile along one axis: 1 on [1/2,3/4], 0 outside (3/8, 7/8).
inline double negative_lobe(double t) { return smooth_step(8.0 * (t - 0.375)) * (1.0 - smooth_step(8.0 * (t - 0.75))); }

struct BumpSpec {
  int level = 0;
  /// x_l; the plateau h_l = 1 is the cube x_l + [0, 2^{-l})^n.
  Point anchor{0.0, 0.0};
};

/// Support of h_l along each axis: anchor + 2^{2-l} [-1/8, 7/8).
inline std::array<double, 2> bump_support(const BumpSpec &spec, int axis) {
  const double w = std::ldexp(1.0, 2 - spec.level);
  return {spec.anchor[axis] - w / 8.0, spec.anchor[axis] + 7.0 * w / 8.0};
}

/// h_l(x) = h(2^{l-2}(x - x_l)) with |h| <= 1, h = 1 on [0,1/4)^n,
/// h = -1 on [1/2,3/4)^n, supported in [-1/8,7/8)^n, zero grid sum.
inline SampledFunction make_bump(const GridSpec &g, const BumpSpec &spec) {
  if (spec.level < 0)
    throw DomainError("bump level must be nonnegative");
  for (int a = 0; a < g.dim; ++a) {
    auto s = bump_support(spec, a);
    if (s[0] < -pi || s[1] > pi)
      throw DomainError("bump support overflows the torus");
  }
  const double scale = std::ldexp(1.0, spec.level - 2);
  std::vector<double> up(g.size()), down(g.size());
  double sum_up = 0.0, sum_down = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point x = g.point(i);
    double u = 1.0, v = 1.0;
    for (int a = 0; a < g.dim; ++a) {
      const double t = scale * (x[a] - spec.anchor[a]);
      u *= positive_lobe(t);
      v *= negative_lobe(t);
    }
    up[i] = u;
    down[i] = v;
    sum_up += u;
    sum_down += v;
  }
  if (!(sum_up > 0.0) || !(sum_down > 0.0))
    throw ResolutionError("bump level too deep for the grid");
  // Shrink the heavier lobe so the discrete sum vanishes; support and |h| <= 1 are kept.
  const double cu = std::min(1.0, sum_down / sum_up);
  const double cd = std::min(1.0, sum_up / sum_down);
  SampledFunction h(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    h.values[i] = cu * up[i] - cd * down[i];
  return h;
}

struct StackSpec {
  int spacing = 1;  // m
  int offset = 0;   // N_0 in [0, m)
  int depth = 0;    // N
  LpExponent p = LpExponent(1.0);
  double b = 0.0;
  /// Corner of the plateau cube per term (l = 0, 1, ...); empty selects nested
  /// cubes with common corner -2.
  std::vector<Point> anchors;

  std::vector<int> levels() const {
    std::vector<int> out;
    for (int l = 0; l * spacing + offset <= depth; ++l)
      out.push_back(l * spacing + offset);
    return out;
  }
};

inline Point default_stack_anchor(int dim) { return dim == 1 ? Point{-2.0, 0.0} : Point{-2.0, -2.0}; }

/// Coefficient i^l 2^{level n/p} (1+level)^{-b} of the l-th stack term.
inline cplx stack_coefficient(const StackSpec &spec, int l, int dim) {
  const int level = l * spec.spacing + spec.offset;
  static const cplx powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const double growth = spec.p.is_inf() ? 1.0 : std::exp2(double(level) * dim / spec.p.value());
  return powers[l % 4] * growth * std::pow(1.0 + level, -spec.b);
}

/// g_{N,N_0} = sum_l i^l 2^{(lm+N_0)n/p} (1+lm+N_0)^{-b} h_{lm+N_0}.
inline SampledFunction make_stack(const GridSpec &g, const StackSpec &spec) {
  if (spec.spacing < 1 || spec.offset < 0 || spec.offset >= spec.spacing || spec.depth < 0)
    throw ConfigError("stack needs m >= 1, 0 <= N_0 < m, N >= 0");
  const auto levels = spec.levels();
  if (levels.empty())
    throw ConfigError("stack has no terms (N < N_0)");
  if (levels.back() > g.k_max() - 1)
    throw DomainError("stack level " + std::to_string(levels.back()) + " exceeds K_max - 1");
  if (!spec.anchors.empty() && spec.anchors.size() < levels.size())
    throw ConfigError("one anchor per stack term required");
  SampledFunction out(g);
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const Point anchor = spec.anchors.empty() ? default_stack_anchor(g.dim) : spec.anchors[l];
    auto h = make_bump(g, {levels[l], anchor});
    out += h * stack_coefficient(spec, int(l), g.dim);
  }
  return out;
}

/// g_k = sum_{l<=k} (1+l)^{-b} e^{i 2^l (x_1 - z_k)}.
inline SampledFunction make_exp_stack(const GridSpec &g, int k, double b, double anchor = 0.0) {
  if (k < 0 || k > g.k_max() - 1)
    throw DomainError("exponential stack level outside [0, K_max - 1]");
  return sample(g, [&](const Point &x) {
    cplx s{};
    for (int l = 0; l <= k; ++l)
      s += std::pow(1.0 + l, -b) * std::polar(1.0, std::ldexp(1.0, l) * (x[0] - anchor));
    return s;
  });
}

// ---------------------------------------------------------------------------
// Modulated packets

/// Spectral profile exp(-1/((r-3/2)(2-r))) on 3/2 < r < 2, zero elsewhere.
inline double annulus_profile(double r) {
  if (r <= 1.5 || r >= 2.0)
    return 0.0;
  return std::exp(-1.0 / ((r - 1.5) * (2.0 - r)));
}

/// Envelope whose coefficients follow annulus_profile(|m| / scale).
inline FrequencyField annulus_envelope(const GridSpec &g, double scale = 1.0) {
  FrequencyField F(g);
  double total = 0.0;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    F.coeffs[i] = annulus_profile(g.frequency_norm(i) / scale);
    total += F.coeffs[i].real();
  }
  if (!(total > 0.0))
    throw DegenerateInputError("no lattice frequency inside the envelope annulus at this scale");
  return F;
}

/// Constant envelope (single zero-frequency coefficient).
inline FrequencyField unit_envelope(const GridSpec &g) {
  FrequencyField F(g);
  F.at(0, 0) = 1.0;
  return F;
}

struct PacketSpec {
  int m = 3;
  /// alpha_1 ... alpha_{m-2}, stored from index 0.
  std::vector<cplx> alpha;
  FrequencyField envelope;
  /// Replace the sum by the single carrier e^{i 2^m x_1}.
  bool top_carrier = false;
};

/// Psi(x) sum_{j=1}^{m-2} alpha_j e^{i 2^j x_1}, or e^{i 2^m x_1} Psi(x).
inline SampledFunction make_modulated_packet(const PacketSpec &spec) {
  const GridSpec &g = spec.envelope.grid;
  if (spec.m < 3)
    throw ConfigError("packet needs m >= 3");
  if (spec.m > g.k_max() - 2)
    throw DomainError("packet level exceeds K_max - 2");
  if (!spec.top_carrier && spec.alpha.size() != std::size_t(spec.m - 2))
    throw ConfigError("packet needs m - 2 coefficients");
  auto carrier = sample(g, [&](const Point &x) {
    if (spec.top_carrier)
      return std::polar(1.0, std::ldexp(1.0, spec.m) * x[0]);
    cplx s{};
    for (int j = 1; j <= spec.m - 2; ++j)
      s += spec.alpha[std::size_t(j - 1)] * std::polar(1.0, std::ldexp(1.0, j) * x[0]);
    return s;
  });
  return pointwise_product(carrier, inverse(spec.envelope));
}

/// Coefficient patterns of the packet family: 1 unit, 2 (1+j)^{-1/2},
/// 3 and 4 (1+j)^{-b}, 5 single top carrier.
inline PacketSpec packet_case(int m, int which, double b, const FrequencyField &envelope) {
  PacketSpec spec{m, {}, envelope, false};
  if (which < 1 || which > 5)
    throw ConfigError("packet case must be 1..5");
  if (which == 5) {
    spec.top_carrier = true;
    return spec;
  }
  for (int j = 1; j <= m - 2; ++j) {
    double a = 1.0;
    if (which == 2)
      a = std::pow(1.0 + j, -0.5);
    else if (which == 3 || which == 4)
      a = std::pow(1.0 + j, -b);
    spec.alpha.push_back(a);
  }
  return spec;
}

} // namespace logbesov
