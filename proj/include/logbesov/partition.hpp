#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "logbesov/fft.hpp"
#include "logbesov/grid.hpp"

namespace logbesov {

enum class PartitionKind { Radial, Tensor };

inline std::string to_string(PartitionKind k) { return k == PartitionKind::Radial ? "RADIAL" : "TENSOR"; }

inline PartitionKind parse_partition_kind(const std::string &s) {
  if (s == "RADIAL" || s == "radial")
    return PartitionKind::Radial;
  if (s == "TENSOR" || s == "tensor")
    return PartitionKind::Tensor;
  throw ConfigError("unknown partition kind '" + s + "'");
}

/// exp(-1/t) for t > 0, zero otherwise.
inline double flat_exp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

/// Smooth step rising from 0 at t <= 0 to 1 at t >= 1.
inline double smooth_step(double t) {
  if (t <= 0.0)
    return 0.0;
  if (t >= 1.0)
    return 1.0;
  const double a = flat_exp(t), b = flat_exp(1.0 - t);
  return a / (a + b);
}

/// Monotone radial profile: 1 on [0,1], 0 on [3/2, inf), smooth in between.
inline double bump_profile(double r) {
  if (r <= 1.0)
    return 1.0;
  if (r >= 1.5)
    return 0.0;
  const double a = flat_exp(3.0 - 2.0 * r), b = flat_exp(2.0 * r - 2.0);
  return a / (a + b);
}

/// Smooth dyadic partition of unity sampled on the frequency lattice.
class DyadicPartition {
public:
  DyadicPartition(const GridSpec &g, PartitionKind kind = PartitionKind::Radial) : grid_(g), kind_(kind) {
    symbols_.assign(std::size_t(g.k_max() + 1), std::vector<double>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
      auto m = g.frequency_vector(i);
      const double xi[2] = {double(m[0]), double(m[1])};
      double prev = low_pass(xi, 0);
      symbols_[0][i] = prev;
      for (int k = 1; k <= g.k_max(); ++k) {
        const double cur = low_pass(xi, k);
        symbols_[std::size_t(k)][i] = cur - prev;
        prev = cur;
      }
    }
  }

  const GridSpec &grid() const { return grid_; }
  PartitionKind kind() const { return kind_; }
  int k_max() const { return grid_.k_max(); }

  /// phi_0(2^{-k} xi) evaluated at a real frequency vector.
  double low_pass(const double xi[2], int k) const {
    const double s = std::ldexp(1.0, -k);
    if (kind_ == PartitionKind::Radial)
      return bump_profile(std::hypot(xi[0], grid_.dim == 2 ? xi[1] : 0.0) * s);
    double v = bump_profile(std::abs(xi[0]) * s);
    if (grid_.dim == 2)
      v *= bump_profile(std::abs(xi[1]) * s);
    return v;
  }

  /// phi_k at a real frequency vector, evaluated off-lattice.
  double evaluate(int k, const double xi[2]) const {
    if (k == 0)
      return low_pass(xi, 0);
    return low_pass(xi, k) - low_pass(xi, k - 1);
  }

  const std::vector<double> &symbol(int k) const {
    check_level(k);
    return symbols_[std::size_t(k)];
  }

  /// Norm used by the support annuli: Euclidean for radial, max-norm for tensor.
  double support_norm(std::size_t flat) const {
    auto m = grid_.frequency_vector(flat);
    if (kind_ == PartitionKind::Radial)
      return std::hypot(double(m[0]), double(m[1]));
    return double(std::max(std::labs(m[0]), std::labs(m[1])));
  }

  void check_level(int k) const {
    if (k < 0 || k > k_max())
      throw DomainError("level " + std::to_string(k) + " outside [0, " + std::to_string(k_max()) + "]");
  }

private:
  GridSpec grid_;
  PartitionKind kind_;
  std::vector<std::vector<double>> symbols_;
};

/// max over K <= K_max and lattice frequencies of |sum_{k<=K} phi_k - phi_0(2^{-K} .)|.
inline double partition_residual(const DyadicPartition &P) {
  const GridSpec &g = P.grid();
  double worst = 0.0;
  std::vector<double> acc(g.size(), 0.0);
  for (int K = 0; K <= P.k_max(); ++K) {
    const auto &sym = P.symbol(K);
    for (std::size_t i = 0; i < g.size(); ++i) {
      acc[i] += sym[i];
      const auto m = g.frequency_vector(i);
      const double xi[2] = {double(m[0]), double(m[1])};
      worst = std::max(worst, std::abs(acc[i] - P.low_pass(xi, K)));
    }
  }
  return worst;
}

/// Largest fraction of symbol energy of phi_k outside its annulus 2^{k-1} <= |xi| <= 3 2^{k-1}.
inline double annulus_leakage(const DyadicPartition &P) {
  const GridSpec &g = P.grid();
  double worst = 0.0;
  for (int k = 0; k <= P.k_max(); ++k) {
    const auto &sym = P.symbol(k);
    const double lo = k == 0 ? 0.0 : std::ldexp(1.0, k - 1), hi = 3.0 * std::ldexp(1.0, k - 1);
    double in = 0.0, out = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = P.support_norm(i);
      (r >= lo && r <= hi ? in : out) += sym[i] * sym[i];
    }
    if (in + out > 0.0)
      worst = std::max(worst, out / (in + out));
  }
  return worst;
}

/// The pieces S_0 f, ..., S_{K_max} f.
struct SpectralDecomposition {
  GridSpec grid;
  std::vector<SampledFunction> pieces;

  int k_max() const { return int(pieces.size()) - 1; }
  const SampledFunction &operator[](int k) const { return pieces[std::size_t(k)]; }
};

inline void check_partition_grid(const SampledFunction &f, const DyadicPartition &P) {
  if (!(f.grid == P.grid()))
    throw InputError("function and partition live on different grids");
}

inline SampledFunction project(const SampledFunction &f, const DyadicPartition &P, int k) {
  check_partition_grid(f, P);
  P.check_level(k);
  return apply_multiplier(f, P.symbol(k));
}

inline SpectralDecomposition decompose(const SampledFunction &f, const DyadicPartition &P) {
  check_partition_grid(f, P);
  require_finite(f);
  const auto spec = forward_raw(f);
  SpectralDecomposition D{f.grid, {}};
  std::vector<cplx> tmp(spec.size());
  for (int k = 0; k <= P.k_max(); ++k) {
    const auto &sym = P.symbol(k);
    for (std::size_t i = 0; i < spec.size(); ++i)
      tmp[i] = spec[i] * sym[i];
    D.pieces.push_back(inverse_raw(f.grid, tmp));
  }
  return D;
}

/// S^k f = sum of S_j f over j <= k.
inline SampledFunction partial_sum(const SampledFunction &f, const DyadicPartition &P, int k) {
  check_partition_grid(f, P);
  P.check_level(k);
  std::vector<double> sym(f.grid.size());
  for (std::size_t i = 0; i < sym.size(); ++i) {
    auto m = f.grid.frequency_vector(i);
    const double xi[2] = {double(m[0]), double(m[1])};
    sym[i] = P.low_pass(xi, k);
  }
  return apply_multiplier(f, sym);
}

/// Partial sums S^k built from an existing decomposition; k < 0 gives zero.
inline SampledFunction partial_sum(const SpectralDecomposition &D, int k) {
  SampledFunction out(D.grid);
  for (int j = 0; j <= std::min(k, D.k_max()); ++j)
    out += D[j];
  return out;
}

/// Peetre maximal function max_y |S_j f(x-y)| / (1 + 2^j |y|)^a over grid shifts y.
/// window: search radius in units of 2^{-j}; std::nullopt scans the full torus.
inline SampledFunction peetre_maximal(const SampledFunction &f, const DyadicPartition &P, int j, double a,
                                      std::optional<double> window = 64.0) {
  if (!(a > 0.0))
    throw ConfigError("Peetre exponent must be positive");
  const auto piece = project(f, P, j);
  const GridSpec &g = f.grid;
  const long N = long(g.n());
  long R = N / 2;
  if (window) {
    if (!(*window > 0.0))
      throw ConfigError("Peetre window must be positive");
    R = std::min<long>(R, long(std::ceil(*window * std::ldexp(1.0, -j) / g.dx())));
  }
  const double scale = std::ldexp(1.0, j) * g.dx();
  std::vector<double> amp(piece.size());
  for (std::size_t i = 0; i < amp.size(); ++i)
    amp[i] = std::abs(piece.values[i]);
  // Offsets d with |d| <= R, distinct modulo N.
  const long lo = (2 * R >= N) ? -(N / 2) + 1 : -R;
  const long hi = (2 * R >= N) ? N / 2 : R;
  auto weight = [&](long d1, long d2) { return std::pow(1.0 + scale * std::hypot(double(d1), double(d2)), -a); };
  SampledFunction out(g);
  if (g.dim == 1) {
    std::vector<double> w(std::size_t(hi - lo + 1));
    for (long d = lo; d <= hi; ++d)
      w[std::size_t(d - lo)] = weight(d, 0);
    for (long x = 0; x < N; ++x) {
      double m = 0.0;
      for (long d = lo; d <= hi; ++d) {
        const long y = ((x - d) % N + N) % N;
        m = std::max(m, amp[std::size_t(y)] * w[std::size_t(d - lo)]);
      }
      out.values[std::size_t(x)] = m;
    }
    return out;
  }
  const long span = hi - lo + 1;
  std::vector<double> w(std::size_t(span * span));
  for (long d1 = lo; d1 <= hi; ++d1)
    for (long d2 = lo; d2 <= hi; ++d2)
      w[std::size_t((d1 - lo) * span + (d2 - lo))] = weight(d1, d2);
  for (long x1 = 0; x1 < N; ++x1)
    for (long x2 = 0; x2 < N; ++x2) {
      double m = 0.0;
      for (long d1 = lo; d1 <= hi; ++d1) {
        const long y1 = ((x1 - d1) % N + N) % N;
        for (long d2 = lo; d2 <= hi; ++d2) {
          const long y2 = ((x2 - d2) % N + N) % N;
          m = std::max(m, amp[std::size_t(y1 * N + y2)] * w[std::size_t((d1 - lo) * span + (d2 - lo))]);
        }
      }
      out.values[std::size_t(x1 * N + x2)] = m;
    }
  return out;
}

/// Fraction of spectral energy outside a frequency set.
template <typename Inside>
double energy_outside(const SampledFunction &f, Inside &&inside) {
  auto F = forward(f);
  double total = 0.0, out = 0.0;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    const double e = std::norm(F.coeffs[i]);
    total += e;
    if (!inside(i))
      out += e;
  }
  return total > 0.0 ? out / total : 0.0;
}

} // namespace logbesov
