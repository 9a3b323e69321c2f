#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "logbesov/cubes.hpp"
#include "logbesov/fft.hpp"
#include "logbesov/partition.hpp"

namespace logbesov {

/// Geometric-trend extrapolation of a truncated sequence of nonnegative terms.
struct TailDiagnostic {
  double estimate = 0.0;  ///< extrapolated size of the omitted terms; +inf when the trend does not decay
  double ratio = 0.0;     ///< per-step decay ratio from the last three terms
  bool divergent = false;
};

inline constexpr double divergence_ratio = 0.85;

/// Extrapolates from the last three terms; q = inf estimates the next term,
/// finite q the l^q mass of the omitted terms.
inline TailDiagnostic geometric_tail(const std::vector<double> &terms, double value,
                                     const LpExponent &q = LpExponent(1.0)) {
  TailDiagnostic t;
  const std::size_t K = terms.size();
  if (K < 3)
    return t;
  double peak = 0.0;
  for (double v : terms)
    peak = std::max(peak, std::abs(v));
  const double a0 = std::abs(terms[K - 3]), a2 = std::abs(terms[K - 1]);
  if (a2 <= 1e-12 * peak || a2 == 0.0)
    return t;
  t.ratio = a0 > 0.0 ? std::sqrt(a2 / a0) : std::numeric_limits<double>::infinity();
  t.divergent = t.ratio >= divergence_ratio && a2 >= 1e-6 * std::abs(value);
  if (t.ratio >= 1.0) {
    t.estimate = std::numeric_limits<double>::infinity();
  } else if (q.is_inf()) {
    t.estimate = a2 * t.ratio;
  } else {
    const double r = std::pow(t.ratio, q.value());
    t.estimate = std::pow(std::pow(a2, q.value()) * r / (1.0 - r), 1.0 / q.value());
  }
  return t;
}

struct BesovParams {
  double s = 0.0;
  double b = 0.0;
  LpExponent p = LpExponent::inf();
  LpExponent q = LpExponent::inf();
};

struct NormResult {
  double value = 0.0;
  TailDiagnostic tail;
  std::vector<double> per_level;
  /// Fraction of spectral energy above 2^{K_max - 1}.
  double band_excess = 0.0;
};

/// l^q (quasi-)norm of nonnegative terms; q = inf is the maximum.
inline double lq_sum(const std::vector<double> &terms, const LpExponent &q) {
  if (q.is_inf()) {
    double m = 0.0;
    for (double v : terms)
      m = std::max(m, v);
    return m;
  }
  double s = 0.0;
  for (double v : terms)
    s += std::pow(v, q.value());
  return std::pow(s, 1.0 / q.value());
}

inline double level_weight(int k, double s, double b) { return std::exp2(k * s) * std::pow(1.0 + k, b); }

/// ||{u_k}|| = (sum_k [2^{ks}(1+k)^b ||u_k||_p]^q)^{1/q}.
inline NormResult seq_norm(const std::vector<SampledFunction> &u, double s, double b, const LpExponent &p,
                           const LpExponent &q) {
  NormResult r;
  for (std::size_t k = 0; k < u.size(); ++k)
    r.per_level.push_back(level_weight(int(k), s, b) * lp_norm(u[k], p));
  r.value = lq_sum(r.per_level, q);
  r.tail = geometric_tail(r.per_level, r.value, q);
  return r;
}

inline double band_excess(const SampledFunction &f) {
  const double cut = std::ldexp(1.0, f.grid.k_max() - 1);
  return energy_outside(f, [&](std::size_t i) { return f.grid.frequency_norm(i) <= cut; });
}

inline NormResult besov_norm(const SpectralDecomposition &D, const BesovParams &params) {
  return seq_norm(D.pieces, params.s, params.b, params.p, params.q);
}

/// Logarithmic Besov norm truncated at K_max.
inline NormResult besov_norm(const SampledFunction &f, const DyadicPartition &P, const BesovParams &params) {
  auto r = besov_norm(decompose(f, P), params);
  r.band_excess = band_excess(f);
  return r;
}

/// Cube levels deeper than the grid guard are evaluated on the deepest admissible level.
inline int clamp_level(const GridSpec &g, int level) { return std::min(level, g.l_max()); }

/// Triebel-Lizorkin F^{s,b}_{inf,q}: sup over k and level-k cubes of
/// (mean over Q of sum_{j>=k} [2^{js}(1+j)^b |S_j f|]^q)^{1/q}.
inline NormResult tl_norm_inf(const SpectralDecomposition &D, double s, double b, const LpExponent &q) {
  const GridSpec &g = D.grid;
  const int K = D.k_max();
  NormResult r;
  std::vector<double> suffix(g.size(), 0.0);
  r.per_level.assign(std::size_t(K + 1), 0.0);
  for (int k = K; k >= 0; --k) {
    const double w = level_weight(k, s, b);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double a = w * std::abs(D[k].values[i]);
      if (q.is_inf())
        suffix[i] = std::max(suffix[i], a);
      else
        suffix[i] += std::pow(a, q.value());
    }
    SampledFunction dens(g);
    for (std::size_t i = 0; i < g.size(); ++i)
      dens.values[i] = suffix[i];
    const LpExponent mean_kind = q.is_inf() ? LpExponent::inf() : LpExponent(1.0);
    const double sup = CubeMeans(dens, mean_kind).level_sup(clamp_level(g, k));
    r.per_level[std::size_t(k)] = q.is_inf() ? sup : std::pow(sup, 1.0 / q.value());
  }
  r.value = lq_sum(r.per_level, LpExponent::inf());
  std::vector<double> pieces;
  for (int k = 0; k <= K; ++k)
    pieces.push_back(level_weight(k, s, b) * max_abs(D[k]));
  r.tail = geometric_tail(pieces, r.value, q);
  return r;
}

inline NormResult tl_norm_inf(const SampledFunction &f, const DyadicPartition &P, double s, double b,
                              const LpExponent &q) {
  auto r = tl_norm_inf(decompose(f, P), s, b, q);
  r.band_excess = band_excess(f);
  return r;
}

// ---------------------------------------------------------------------------
// Moduli of smoothness

namespace detail {

inline double binomial(int m, int i) {
  double c = 1.0;
  for (int k = 1; k <= i; ++k)
    c = c * double(m - i + k) / double(k);
  return c;
}

/// ||Delta^m_h f||_p for the grid shift h = (d1, d2) dx.
inline double grid_difference_norm(const SampledFunction &f, int m, long d1, long d2, const LpExponent &p) {
  const GridSpec &g = f.grid;
  const long N = long(g.n());
  SampledFunction diff(g);
  for (int i = 0; i <= m; ++i) {
    const double c = ((m - i) % 2 ? -1.0 : 1.0) * binomial(m, i);
    const long s1 = ((i * d1) % N + N) % N, s2 = ((i * d2) % N + N) % N;
    if (g.dim == 1) {
      for (long x = 0; x < N; ++x)
        diff.values[std::size_t(x)] += c * f.values[std::size_t((x + s1) % N)];
    } else {
      for (long x = 0; x < N; ++x)
        for (long y = 0; y < N; ++y)
          diff.values[std::size_t(x * N + y)] += c * f.values[std::size_t(((x + s1) % N) * N + (y + s2) % N)];
    }
  }
  return lp_norm(diff, p);
}

/// ||Delta^m_h f||_p for an arbitrary shift, via the multiplier (e^{i h.xi} - 1)^m.
inline double spectral_difference_norm(const std::vector<cplx> &spectrum, const GridSpec &g, int m,
                                       const Point &h, const LpExponent &p) {
  std::vector<cplx> tmp(spectrum.size());
  for (std::size_t i = 0; i < tmp.size(); ++i) {
    auto xi = g.frequency_vector(i);
    const cplx e = std::polar(1.0, h[0] * double(xi[0]) + h[1] * double(xi[1])) - 1.0;
    tmp[i] = spectrum[i] * std::pow(e, m);
  }
  return lp_norm(inverse_raw(g, tmp), p);
}

} // namespace detail

/// omega_m(f, t)_p = sup_{|h| < t} ||Delta^m_h f||_p.  Grid shifts inside the
/// ball are scanned, then the supremum is refined with sub-grid shifts up to |h| = t.
inline double modulus(const SampledFunction &f, int m, double t, const LpExponent &p) {
  const GridSpec &g = f.grid;
  if (m < 1)
    throw ConfigError("modulus order must be positive");
  if (!(t > 0.0) || t > pi)
    throw DomainError("modulus scale must lie in (0, pi]");
  if (t < g.dx())
    throw ResolutionError("modulus scale below one grid cell");
  require_finite(f);
  const auto spectrum = forward_raw(f);
  const long reach = long(std::ceil(t / g.dx()));
  double best = 0.0;
  Point best_h{0.0, 0.0};
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  // Golden-section maximization of fn on [a, c].
  auto golden = [&](auto &&fn, double a, double c) {
    double x1 = c - gr * (c - a), x2 = a + gr * (c - a);
    double f1 = fn(x1), f2 = fn(x2);
    for (int it = 0; it < 30; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (c - a);
        f2 = fn(x2);
      } else {
        c = x2;
        x2 = x1;
        f2 = f1;
        x1 = c - gr * (c - a);
        f1 = fn(x1);
      }
    }
    return std::max(f1, f2);
  };
  if (g.dim == 1) {
    // Grid shifts thinned to at most ~128, then refined with sub-grid shifts.
    const long stride = std::max(1L, reach / 128);
    for (long d = 1; d < reach && double(d) * g.dx() < t; d += stride) {
      const double v = std::max(detail::grid_difference_norm(f, m, d, 0, p),
                                detail::grid_difference_norm(f, m, -d, 0, p));
      if (v > best) {
        best = v;
        best_h = {double(d) * g.dx(), 0.0};
      }
    }
    auto phi = [&](double h) {
      return std::max(detail::spectral_difference_norm(spectrum, g, m, {h, 0.0}, p),
                      detail::spectral_difference_norm(spectrum, g, m, {-h, 0.0}, p));
    };
    best = std::max(best, phi(t));
    const double span = double(stride) * g.dx();
    const double a = std::max(g.dx() * 1e-3, best_h[0] - span), c = std::min(t, best_h[0] + span);
    if (best_h[0] > 0.0 && c > a)
      best = std::max(best, golden(phi, a, c));
    return best;
  }
  // 2D: grid shifts inside the disc, thinned to a bounded count, plus boundary
  // directions refined in angle.
  const long stride = std::max(1L, reach / 24);
  for (long d1 = -reach; d1 <= reach; d1 += stride)
    for (long d2 = -reach; d2 <= reach; d2 += stride) {
      if ((d1 == 0 && d2 == 0) || std::hypot(double(d1), double(d2)) * g.dx() >= t)
        continue;
      best = std::max(best, detail::grid_difference_norm(f, m, d1, d2, p));
    }
  auto on_circle = [&](double th) {
    return detail::spectral_difference_norm(spectrum, g, m, {t * std::cos(th), t * std::sin(th)}, p);
  };
  const int directions = 16;
  double best_th = 0.0, best_circle = -1.0;
  for (int a = 0; a < directions; ++a) {
    const double th = 2.0 * pi * a / directions;
    const double v = on_circle(th);
    if (v > best_circle) {
      best_circle = v;
      best_th = th;
    }
  }
  const double width = 2.0 * pi / directions;
  best = std::max({best, best_circle, golden(on_circle, best_th - width, best_th + width)});
  return best;
}

struct DiffParams {
  double s = 0.0;
  double b = 0.0;
  double d = 0.0;
  LpExponent p = LpExponent::inf();
  LpExponent q = LpExponent::inf();
  int m = 1;
};

/// Dyadic cells [2^{-j-1}, 2^{-j}] for j in [first, l_max], sampled at 2^{-j-1/2} with weight ln 2.
inline std::vector<double> dyadic_nodes(const GridSpec &g, int first) {
  std::vector<double> t;
  for (int j = first; j <= g.l_max(); ++j)
    t.push_back(std::exp2(-j - 0.5));
  return t;
}

/// ||f||_p + (int_0^1 {t^{-s}(1-log t)^b [1+log(1-log t)]^d omega_m(f,t)_p}^q dt/t)^{1/q}.
inline NormResult diffspace_norm(const SampledFunction &f, const DiffParams &params) {
  if (!(double(params.m) > params.s))
    throw ConfigError("modulus order must exceed the smoothness");
  NormResult r;
  const auto nodes = dyadic_nodes(f.grid, 0);
  const double ln2 = std::log(2.0);
  for (double t : nodes) {
    const double L = 1.0 - std::log(t);
    const double w = std::pow(t, -params.s) * std::pow(L, params.b) * std::pow(1.0 + std::log(L), params.d);
    const double v = w * modulus(f, params.m, t, params.p);
    r.per_level.push_back(params.q.is_inf() ? v : v * std::pow(ln2, 1.0 / params.q.value()));
  }
  const double semi = lq_sum(r.per_level, params.q);
  r.value = lp_norm(f, params.p) + semi;
  r.tail = geometric_tail(r.per_level, semi, params.q);
  return r;
}

/// int_0^{1/2} omega_1(f,t)_inf dt/t on dyadic cells; per_level holds the cell contributions.
inline NormResult dini_norm(const SampledFunction &f) {
  NormResult r;
  const double ln2 = std::log(2.0);
  for (double t : dyadic_nodes(f.grid, 1))
    r.per_level.push_back(modulus(f, 1, t, LpExponent::inf()) * ln2);
  r.value = lq_sum(r.per_level, LpExponent(1.0));
  r.tail = geometric_tail(r.per_level, r.value);
  return r;
}

// ---------------------------------------------------------------------------
// Sums of logarithmic weights

struct LogSumBracket {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// sum_{j>=k} (1+j)^{-b} for b > 1 with bounds (k+1)^{1-b}/(b-1) and (1 + 1/(b-1))(k+1)^{1-b}.
inline LogSumBracket log_sum_tail(double b, int k) {
  if (!(b > 1.0))
    throw ConfigError("tail sum needs b > 1");
  if (k < 0)
    throw ConfigError("k must be nonnegative");
  const long terms = 100000;
  double s = 0.0;
  for (long j = k + terms - 1; j >= k; --j)
    s += std::pow(1.0 + double(j), -b);
  // Euler-Maclaurin remainder for sum_{t >= T} t^{-b}.
  const double T = 1.0 + double(k + terms);
  s += std::pow(T, 1.0 - b) / (b - 1.0) + 0.5 * std::pow(T, -b) + b / 12.0 * std::pow(T, -b - 1.0);
  const double base = std::pow(1.0 + k, 1.0 - b);
  return {s, base / (b - 1.0), (1.0 + 1.0 / (b - 1.0)) * base};
}

/// sum_{j=0}^{k} (1+j)^b for b > -1 with bounds (k+1)^{b+1}/(b+1) and C (k+1)^{b+1}.
inline LogSumBracket log_sum_head(double b, int k) {
  if (!(b > -1.0))
    throw ConfigError("head sum needs b > -1");
  if (k < 0)
    throw ConfigError("k must be nonnegative");
  double s = 0.0;
  for (int j = 0; j <= k; ++j)
    s += std::pow(1.0 + j, b);
  const double base = std::pow(1.0 + k, b + 1.0);
  const double c = b >= 0.0 ? 1.0 : 1.0 + 1.0 / (b + 1.0);
  return {s, base / (b + 1.0), c * base};
}

} // namespace logbesov
