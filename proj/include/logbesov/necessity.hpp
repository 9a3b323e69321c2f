#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "logbesov/cubes.hpp"
#include "logbesov/gallery.hpp"
#include "logbesov/partition.hpp"

namespace logbesov {

namespace detail {

/// Inverse transform of the radial profile phi_0 on R^n, (2 pi)^{-n/2} normalization.
inline double low_pass_kernel_1d(double x) {
  const int M = 3000;
  const double h = 1.5 / M;
  double s = 0.0;
  for (int i = 0; i <= M; ++i) {
    const double xi = i * h;
    const double w = (i == 0 || i == M) ? 0.5 : 1.0;
    s += w * bump_profile(xi) * std::cos(x * xi);
  }
  return 2.0 * h * s / std::sqrt(2.0 * pi);
}

inline double low_pass_kernel_radial_2d(double r) {
  const int M = 3000;
  const double h = 1.5 / M;
  double s = 0.0;
  for (int i = 0; i <= M; ++i) {
    const double rho = i * h;
    const double w = (i == 0 || i == M) ? 0.5 : 1.0;
    s += w * bump_profile(rho) * std::cyl_bessel_j(0.0, rho * r) * rho;
  }
  return h * s;
}

} // namespace detail

/// Kernel of phi_0 evaluated at x on R^n.
inline double low_pass_kernel(const DyadicPartition &P, const Point &x) {
  if (P.grid().dim == 1)
    return detail::low_pass_kernel_1d(x[0]);
  if (P.kind() == PartitionKind::Tensor)
    return detail::low_pass_kernel_1d(x[0]) * detail::low_pass_kernel_1d(x[1]);
  return detail::low_pass_kernel_radial_2d(std::hypot(x[0], x[1]));
}

/// Kernel of phi_k: 2^{kn} K_0(2^k x) - 2^{(k-1)n} K_0(2^{k-1} x).
inline double partition_kernel(const DyadicPartition &P, int k, const Point &x) {
  const int n = P.grid().dim;
  auto dilated = [&](int j) {
    const double s = std::ldexp(1.0, j);
    return std::pow(s, n) * low_pass_kernel(P, {s * x[0], s * x[1]});
  };
  if (k == 0)
    return dilated(0);
  return dilated(k) - dilated(k - 1);
}

struct KernelCalibration {
  int sigma = 0;
  std::array<long, 2> nu0{0, 0};
  double lambda = 0.0;
};

/// Grid search for the dyadic cell 2^{-sigma}(nu0 +- [0,1)^n) in {x_n >= 0}
/// with 2^sigma < |nu0| < 3 2^sigma maximizing the minimum of the phi_1 kernel.
inline KernelCalibration calibrate_kernel(const DyadicPartition &P, int max_sigma = -1) {
  const int n = P.grid().dim;
  if (max_sigma < 0)
    max_sigma = n == 1 ? 5 : 3;
  const int samples = n == 1 ? 33 : 9;
  KernelCalibration best{0, {0, 0}, -std::numeric_limits<double>::infinity()};
  bool found = false;
  for (int sigma = 0; sigma <= max_sigma; ++sigma) {
    const long lo = 1L << sigma, hi = 3L << sigma;
    const double edge = std::ldexp(1.0, -sigma);
    auto region_min = [&](std::array<long, 2> nu) {
      double m = std::numeric_limits<double>::infinity();
      const int steps = samples - 1;
      if (n == 1) {
        for (int i = 0; i <= 2 * steps; ++i) {
          const double x = edge * (double(nu[0]) - 1.0 + double(i) / steps);
          m = std::min(m, partition_kernel(P, 1, {x, 0.0}));
        }
        return m;
      }
      for (int i = 0; i <= 2 * steps; ++i)
        for (int j = 0; j <= 2 * steps; ++j) {
          const double x1 = edge * (double(nu[0]) - 1.0 + double(i) / steps);
          const double x2 = edge * (double(nu[1]) - 1.0 + double(j) / steps);
          m = std::min(m, partition_kernel(P, 1, {x1, x2}));
        }
      return m;
    };
    if (n == 1) {
      for (long v = lo + 1; v < hi; ++v) {
        const double lam = region_min({v, 0});
        if (lam > best.lambda) {
          best = {sigma, {v, 0}, lam};
          found = true;
        }
      }
      continue;
    }
    for (long v2 = 1; v2 < hi; ++v2)
      for (long v1 = -hi; v1 < hi; ++v1) {
        const double r = std::hypot(double(v1), double(v2));
        if (!(r > double(lo) && r < double(hi)))
          continue;
        const double lam = region_min({v1, v2});
        if (lam > best.lambda) {
          best = {sigma, {v1, v2}, lam};
          found = true;
        }
      }
  }
  if (!found || !(best.lambda > 0.0))
    throw CalibrationError("no dyadic cell with positive kernel minimum", found ? best.lambda : 0.0);
  return best;
}

/// Pieces below this fraction of the largest piece count as vanishing.
inline constexpr double negligible_piece = 1e-12;

struct NecessityPacketSpec {
  int k = 0;
  int shift = 6;  // N
  LpExponent p = LpExponent(2.0);
  double b = 0.0;
  KernelCalibration kernel;
  /// Corner index of Q_k^{(j)} at level k + sigma for each j; empty picks,
  /// per j, the cube maximizing the L^{p'} mass of S_j f on the shifted cell.
  std::vector<std::array<long, 2>> cubes;
};

/// g_k = sum_{j >= k+N} (1+j)^{-b} ||S_j f||^{1-p'}_{L^{p'}(Q~)} S_j(eta_k(.-x_Q) sgn(S_j f)|S_j f|^{p'-1}),
/// truncated at K_max.
inline SampledFunction make_necessity_packet(const SampledFunction &f, const DyadicPartition &P,
                                             const NecessityPacketSpec &spec) {
  check_partition_grid(f, P);
  if (!spec.p.is_inf() && spec.p.value() <= 1.0)
    throw CapabilityError("necessity packet needs p > 1 (finite conjugate exponent)");
  const LpExponent pc = spec.p.conjugate();
  const GridSpec &g = f.grid;
  const int level = spec.k + spec.kernel.sigma;
  const int first = spec.k + spec.shift;
  const auto D = decompose(f, P);
  const auto bounds = cube_index_bounds(level);
  double scale = 0.0;
  for (int j = 0; j <= P.k_max(); ++j)
    scale = std::max(scale, max_abs(D[j]));
  SampledFunction out(g);
  bool any = false;
  for (int j = first; j <= P.k_max(); ++j) {
    const auto &piece = D[j];
    const double peak = max_abs(piece);
    if (!(peak > negligible_piece * scale))
      continue;
    // Shifted cell x_Q + 2^{-k-sigma}(nu0 + [0,1)^n) for a candidate corner index.
    auto cell = [&](std::array<long, 2> c) {
      DyadicCube Q{level, {c[0] + spec.kernel.nu0[0], c[1] + spec.kernel.nu0[1]}};
      return Q;
    };
    auto cell_norm = [&](const DyadicCube &Q) {
      auto rg = cube_ranges(g, Q);
      double acc = 0.0;
      for (std::size_t a = rg[0].lo; a < rg[0].hi; ++a)
        for (std::size_t c = rg[1].lo; c < rg[1].hi; ++c) {
          const double v = std::abs(piece.values[g.dim == 1 ? a : a * g.n() + c]);
          acc += std::pow(v, pc.value());
        }
      return std::pow(acc * g.cell_volume(), 1.0 / pc.value());
    };
    std::array<long, 2> corner{0, 0};
    double norm = 0.0;
    if (!spec.cubes.empty()) {
      if (std::size_t(j - first) >= spec.cubes.size())
        throw ConfigError("missing cube for level " + std::to_string(j));
      corner = spec.cubes[std::size_t(j - first)];
      const auto Q = cell(corner);
      if (!cube_inside_domain(Q, g.dim))
        throw DomainError("shifted cell outside the domain");
      norm = cell_norm(Q);
    } else {
      for (long c1 = bounds[0]; c1 <= bounds[1]; ++c1)
        for (long c2 = (g.dim == 1 ? 0 : bounds[0]); c2 <= (g.dim == 1 ? 0 : bounds[1]); ++c2) {
          const auto Q = cell({c1, c2});
          if (!cube_inside_domain(Q, g.dim))
            continue;
          const double v = cell_norm(Q);
          if (v > norm) {
            norm = v;
            corner = {c1, c2};
          }
        }
    }
    if (!(norm > negligible_piece * peak))
      continue;
    const auto Q = cell(corner);
    auto rg = cube_ranges(g, Q);
    if (rg[0].count() == 0 || rg[1].count() == 0)
      throw ResolutionError("shifted cell contains no samples");
    SampledFunction inner(g);
    for (std::size_t a = rg[0].lo; a < rg[0].hi; ++a)
      for (std::size_t c = rg[1].lo; c < rg[1].hi; ++c) {
        const std::size_t idx = g.dim == 1 ? a : a * g.n() + c;
        const cplx v = piece.values[idx];
        const double mag = std::abs(v);
        if (mag == 0.0)
          continue;
        inner.values[idx] = (v / mag) * std::pow(mag, pc.value() - 1.0);
      }
    const double weight = std::pow(1.0 + j, -spec.b) * std::pow(norm, 1.0 - pc.value());
    out += project(inner, P, j) * weight;
    any = true;
  }
  if (!any)
    throw DegenerateInputError("every term of the necessity packet vanished");
  return out;
}

} // namespace logbesov
