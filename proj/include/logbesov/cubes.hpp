#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "logbesov/grid.hpp"

namespace logbesov {

/// Grid-aligned dyadic cube 2^{-level}(nu + [0,1)^dim).
struct DyadicCube {
  int level = 0;
  std::array<long, 2> nu{0, 0};

  double edge() const { return std::ldexp(1.0, -level); }
  double corner(int axis) const { return std::ldexp(double(nu[axis]), -level); }
};

/// Half-open sample index range [lo, hi) along one axis.
struct IndexRange {
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::size_t count() const { return hi - lo; }
};

namespace detail {

inline std::size_t first_sample_at_or_after(const GridSpec &g, double a) {
  const double t = (a + pi) / g.dx();
  const double r = std::round(t);
  const double c = std::abs(t - r) < 1e-9 ? r : std::ceil(t);
  return std::size_t(std::max(0.0, c));
}

} // namespace detail

/// Samples of one axis lying in [a, b).
inline IndexRange axis_range(const GridSpec &g, double a, double b) {
  IndexRange r{detail::first_sample_at_or_after(g, a), detail::first_sample_at_or_after(g, b)};
  r.hi = std::min(r.hi, g.n());
  return r;
}

/// Cube-index range along one axis for cubes of the given level inside [-pi, pi).
inline std::array<long, 2> cube_index_bounds(int level) {
  const double scale = std::ldexp(1.0, level);
  return {long(std::ceil(-pi * scale)), long(std::floor(pi * scale)) - 1};
}

inline bool cube_inside_domain(const DyadicCube &Q, int dim) {
  auto b = cube_index_bounds(Q.level);
  for (int a = 0; a < dim; ++a)
    if (Q.nu[a] < b[0] || Q.nu[a] > b[1])
      return false;
  return Q.level >= 0;
}

/// Validates a cube against the domain and the 8-samples-per-edge guard.
inline void check_cube(const GridSpec &g, const DyadicCube &Q) {
  if (!cube_inside_domain(Q, g.dim))
    throw DomainError("cube outside the domain");
  if (Q.level > g.l_max())
    throw ResolutionError("cube level " + std::to_string(Q.level) + " exceeds grid guard " +
                          std::to_string(g.l_max()));
}

/// Every cube of a level lying inside the domain, in row-major order of nu.
inline std::vector<DyadicCube> cubes_at_level(const GridSpec &g, int level) {
  auto b = cube_index_bounds(level);
  std::vector<DyadicCube> out;
  for (long i = b[0]; i <= b[1]; ++i) {
    if (g.dim == 1) {
      out.push_back({level, {i, 0}});
      continue;
    }
    for (long j = b[0]; j <= b[1]; ++j)
      out.push_back({level, {i, j}});
  }
  return out;
}

inline std::array<IndexRange, 2> cube_ranges(const GridSpec &g, const DyadicCube &Q) {
  std::array<IndexRange, 2> r{};
  for (int a = 0; a < g.dim; ++a)
    r[a] = axis_range(g, Q.corner(a), Q.corner(a) + Q.edge());
  if (g.dim == 1)
    r[1] = {0, 1};
  return r;
}

/// Summed-area table over a nonnegative density on the grid.
class PrefixTable {
public:
  PrefixTable(const GridSpec &g, const std::vector<double> &density) : grid_(g) {
    const std::size_t N = g.n();
    if (g.dim == 1) {
      sums_.assign(N + 1, 0.0);
      for (std::size_t i = 0; i < N; ++i)
        sums_[i + 1] = sums_[i] + density[i];
    } else {
      sums_.assign((N + 1) * (N + 1), 0.0);
      for (std::size_t i = 0; i < N; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
          row += density[i * N + j];
          sums_[(i + 1) * (N + 1) + j + 1] = sums_[i * (N + 1) + j + 1] + row;
        }
      }
    }
  }

  double box_sum(const std::array<IndexRange, 2> &r) const {
    if (grid_.dim == 1)
      return sums_[r[0].hi] - sums_[r[0].lo];
    const std::size_t W = grid_.n() + 1;
    return sums_[r[0].hi * W + r[1].hi] - sums_[r[0].lo * W + r[1].hi] -
           sums_[r[0].hi * W + r[1].lo] + sums_[r[0].lo * W + r[1].lo];
  }

  double box_mean(const std::array<IndexRange, 2> &r) const {
    const double count = double(r[0].count() * r[1].count());
    return count > 0 ? std::max(0.0, box_sum(r)) / count : 0.0;
  }

private:
  GridSpec grid_;
  std::vector<double> sums_;
};

/// Per-cube power means (mean |f|^r)^{1/r}, or maxima for r = inf, of one function.
class CubeMeans {
public:
  CubeMeans(const SampledFunction &f, const LpExponent &r) : grid_(f.grid), r_(r) {
    abs_.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
      abs_[i] = std::abs(f.values[i]);
    if (!r.is_inf()) {
      std::vector<double> dens(abs_.size());
      for (std::size_t i = 0; i < abs_.size(); ++i)
        dens[i] = r.value() == 1.0 ? abs_[i] : r.value() == 2.0 ? abs_[i] * abs_[i]
                                                                : std::pow(abs_[i], r.value());
      table_.emplace_back(grid_, dens);
    }
  }

  double value(const DyadicCube &Q) const { return value(cube_ranges(grid_, Q)); }

  double value(const std::array<IndexRange, 2> &rg) const {
    if (r_.is_inf()) {
      double m = 0.0;
      for (std::size_t i = rg[0].lo; i < rg[0].hi; ++i)
        for (std::size_t j = rg[1].lo; j < rg[1].hi; ++j)
          m = std::max(m, abs_[grid_.dim == 1 ? i : i * grid_.n() + j]);
      return m;
    }
    const double mean = table_.front().box_mean(rg);
    return r_.value() == 1.0 ? mean : std::pow(mean, 1.0 / r_.value());
  }

  /// Values for cubes_at_level(grid, level), same order.
  std::vector<double> level_values(int level) const {
    auto cubes = cubes_at_level(grid_, level);
    std::vector<double> out(cubes.size());
    for (std::size_t c = 0; c < cubes.size(); ++c)
      out[c] = value(cubes[c]);
    return out;
  }

  double level_sup(int level) const {
    double m = 0.0;
    for (double v : level_values(level))
      m = std::max(m, v);
    return m;
  }

private:
  GridSpec grid_;
  LpExponent r_;
  std::vector<double> abs_;
  std::vector<PrefixTable> table_;
};

/// (mean over Q of |f|^r)^{1/r}; r = inf gives the maximum over Q.
inline double cube_mean_power(const SampledFunction &f, const DyadicCube &Q, const LpExponent &r) {
  check_cube(f.grid, Q);
  auto rg = cube_ranges(f.grid, Q);
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = rg[0].lo; i < rg[0].hi; ++i)
    for (std::size_t j = rg[1].lo; j < rg[1].hi; ++j) {
      const double a = std::abs(f.values[f.grid.dim == 1 ? i : i * f.grid.n() + j]);
      if (r.is_inf())
        acc = std::max(acc, a);
      else
        acc += std::pow(a, r.value());
      ++count;
    }
  if (r.is_inf())
    return acc;
  return std::pow(acc / double(count), 1.0 / r.value());
}

/// Largest cube_mean_power over all level-l cubes inside the domain.
inline double sup_over_cubes(const SampledFunction &f, int level, const LpExponent &r) {
  if (level < 0)
    throw DomainError("negative cube level");
  if (level > f.grid.l_max())
    throw ResolutionError("cube level " + std::to_string(level) + " exceeds grid guard " +
                          std::to_string(f.grid.l_max()));
  return CubeMeans(f, r).level_sup(level);
}

} // namespace logbesov
