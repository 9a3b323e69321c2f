#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "logbesov/cubes.hpp"
#include "logbesov/norms.hpp"
#include "logbesov/partition.hpp"

namespace logbesov {

/// Decomposition of one function plus cached cube statistics of its pieces.
/// Not safe for concurrent use; build one per thread.
class CriteriaContext {
public:
  CriteriaContext(const SampledFunction &f, const DyadicPartition &P)
      : grid_(f.grid), linf_(max_abs(f)), pieces_(decompose(f, P)) {
    for (int k = 0; k <= pieces_.k_max(); ++k)
      sup_.push_back(max_abs(pieces_[k]));
  }

  const GridSpec &grid() const { return grid_; }
  const SpectralDecomposition &pieces() const { return pieces_; }
  int k_max() const { return pieces_.k_max(); }
  double linf() const { return linf_; }
  double sup_norm(int k) const { return sup_[std::size_t(k)]; }

  const CubeMeans &means(int k, const LpExponent &r) const {
    const auto key = std::make_pair(k, r.is_inf() ? -1.0 : r.value());
    auto it = means_.find(key);
    if (it == means_.end())
      it = means_.emplace(key, CubeMeans(pieces_[k], r)).first;
    return it->second;
  }

  /// Per-cube values (mean |S_k f|^r)^{1/r} at a level, clamped to the grid guard.
  const std::vector<double> &level_values(int k, int level, const LpExponent &r) const {
    const int lv = clamp_level(grid_, level);
    const auto key = std::make_tuple(k, lv, r.is_inf() ? -1.0 : r.value());
    auto it = values_.find(key);
    if (it == values_.end())
      it = values_.emplace(key, means(k, r).level_values(lv)).first;
    return it->second;
  }

  double cube_sup(int k, int level, const LpExponent &r) const {
    double m = 0.0;
    for (double v : level_values(k, level, r))
      m = std::max(m, v);
    return m;
  }

private:
  GridSpec grid_;
  double linf_;
  SpectralDecomposition pieces_;
  std::vector<double> sup_;
  mutable std::map<std::pair<int, double>, CubeMeans> means_;
  mutable std::map<std::tuple<int, int, double>, std::vector<double>> values_;
};

/// One criterion functional: its value, the per-level supremands, and the
/// truncation diagnostic from values at truncations K_max-3 ... K_max.
struct CriterionTerm {
  double value = 0.0;
  std::vector<double> per_level;
  TailDiagnostic tail;
};

namespace detail {

struct Partial {
  double value = 0.0;
  std::vector<double> per_level;
};

inline double ratio_weight(double num, double den, double b) { return std::pow((1.0 + num) / (1.0 + den), b); }

template <typename Eval>
CriterionTerm with_truncation_tail(const CriteriaContext &ctx, Eval &&eval) {
  const int K = ctx.k_max();
  auto full = eval(K);
  CriterionTerm t{full.value, full.per_level, {}};
  std::vector<double> inc;
  double prev = eval(K - 3).value;
  for (int top = K - 2; top <= K; ++top) {
    const double cur = top == K ? full.value : eval(top).value;
    inc.push_back(std::max(0.0, cur - prev));
    prev = cur;
  }
  t.tail = geometric_tail(inc, full.value);
  return t;
}

inline void require_finite_p(const LpExponent &p, const char *what) {
  if (p.is_inf() || p.value() < 1.0)
    throw CapabilityError(std::string(what) + " needs p in [1, inf)");
}

} // namespace detail

/// sup_l sum_{k>=l} ((1+l)/(1+k))^b sup_{l(P)=2^{-l}} (mean_P |S_k f|^{p'})^{1/p'}.
inline CriterionTerm suff_term2(const CriteriaContext &ctx, const LpExponent &p, double b) {
  detail::require_finite_p(p, "suff_term2");
  const LpExponent pc = p.conjugate();
  return detail::with_truncation_tail(ctx, [&](int top) {
    detail::Partial r;
    for (int l = 0; l <= top; ++l) {
      double s = 0.0;
      for (int k = l; k <= top; ++k)
        s += detail::ratio_weight(l, k, b) * (pc.is_inf() ? ctx.sup_norm(k) : ctx.cube_sup(k, l, pc));
      r.per_level.push_back(s);
      r.value = std::max(r.value, s);
    }
    return r;
  });
}

/// Weight of the p = inf third term: (1+k)^b, (1+k)ln(1+k) or (1+k) for b >, =, < 1.
inline double pinf_weight(int k, double b) {
  if (b > 1.0)
    return std::pow(1.0 + k, b);
  if (b == 1.0)
    return (1.0 + k) * std::log(1.0 + k);
  return 1.0 + k;
}

/// sup_{k>=2} weight(k) ||S_k f||_inf.
inline CriterionTerm pinf_term3(const CriteriaContext &ctx, double b) {
  return detail::with_truncation_tail(ctx, [&](int top) {
    detail::Partial r;
    for (int k = 2; k <= top; ++k) {
      const double v = pinf_weight(k, b) * ctx.sup_norm(k);
      r.per_level.push_back(v);
      r.value = std::max(r.value, v);
    }
    return r;
  });
}

/// sup_{k>=2} sum_{j=0}^{k-2} ((1+k)/(1+j))^b sup_{l(P)=2^{-j}} (mean_P |S_k f|^p)^{1/p};
/// p = inf uses pinf_term3.
inline CriterionTerm suff_term3(const CriteriaContext &ctx, const LpExponent &p, double b) {
  if (p.is_inf())
    return pinf_term3(ctx, b);
  detail::require_finite_p(p, "suff_term3");
  return detail::with_truncation_tail(ctx, [&](int top) {
    detail::Partial r;
    for (int k = 2; k <= top; ++k) {
      double s = 0.0;
      for (int j = 0; j <= k - 2; ++j)
        s += detail::ratio_weight(k, j, b) * ctx.cube_sup(k, j, p);
      r.per_level.push_back(s);
      r.value = std::max(r.value, s);
    }
    return r;
  });
}

/// sup_l (1+l)^b sup_{l(P)=2^{-l}} mean_P sum_{k>=l} (1+k)^{-b} |S_k f|.
inline CriterionTerm pinf_term2(const CriteriaContext &ctx, double b) {
  const GridSpec &g = ctx.grid();
  return detail::with_truncation_tail(ctx, [&](int top) {
    detail::Partial r;
    r.per_level.assign(std::size_t(top + 1), 0.0);
    SampledFunction acc(g);
    for (int l = top; l >= 0; --l) {
      const double w = std::pow(1.0 + l, -b);
      const auto &piece = ctx.pieces()[l];
      for (std::size_t i = 0; i < g.size(); ++i)
        acc.values[i] += w * std::abs(piece.values[i]);
      const double v = std::pow(1.0 + l, b) * CubeMeans(acc, LpExponent(1.0)).level_sup(clamp_level(g, l));
      r.per_level[std::size_t(l)] = v;
      r.value = std::max(r.value, v);
    }
    return r;
  });
}

/// sup_l sup_{l(Q)=2^{-l}} sum_{k>=l} ((1+l)/(1+k))^b (mean_Q |S_k f|^{p'})^{1/p'}.
inline CriterionTerm nece_term2(const CriteriaContext &ctx, const LpExponent &p, double b) {
  if (!p.is_inf() && p.value() < 1.0)
    throw CapabilityError("nece_term2 needs p >= 1");
  if (!p.is_inf() && p.value() == 1.0)
    return suff_term2(ctx, p, b);
  const LpExponent pc = p.conjugate();
  return detail::with_truncation_tail(ctx, [&](int top) {
    detail::Partial r;
    for (int l = 0; l <= top; ++l) {
      std::vector<double> per_cube;
      for (int k = l; k <= top; ++k) {
        const auto &vals = ctx.level_values(k, l, pc);
        if (per_cube.empty())
          per_cube.assign(vals.size(), 0.0);
        const double w = detail::ratio_weight(l, k, b);
        for (std::size_t c = 0; c < vals.size(); ++c)
          per_cube[c] += w * vals[c];
      }
      double best = 0.0;
      for (double v : per_cube)
        best = std::max(best, v);
      r.per_level.push_back(best);
      r.value = std::max(r.value, best);
    }
    return r;
  });
}

/// p < inf: sup_k (sum_{j=0}^{k-2} ((1+k)/(1+j))^{bp} sup_{l(P)=2^{-j}} mean_P |S_k f|^p)^{1/p};
/// p = inf: sup_k sum_{j=0}^{k-2} ((1+k)/(1+j))^b ||S_k f||_inf.
inline CriterionTerm nece_term3(const CriteriaContext &ctx, const LpExponent &p, double b) {
  if (!p.is_inf() && p.value() < 1.0)
    throw CapabilityError("nece_term3 needs p >= 1");
  return detail::with_truncation_tail(ctx, [&](int top) {
    detail::Partial r;
    for (int k = 2; k <= top; ++k) {
      double s = 0.0;
      for (int j = 0; j <= k - 2; ++j) {
        if (p.is_inf())
          s += detail::ratio_weight(k, j, b) * ctx.sup_norm(k);
        else
          s += std::pow(detail::ratio_weight(k, j, b) * ctx.cube_sup(k, j, p), p.value());
      }
      const double v = p.is_inf() ? s : std::pow(s, 1.0 / p.value());
      r.per_level.push_back(v);
      r.value = std::max(r.value, v);
    }
    return r;
  });
}

enum class MixedStrategy { Greedy, Exhaustive };

inline constexpr int exhaustive_max_level = 3;

namespace detail {

/// Best assignment of the j-terms to cubes: partitions of the j-set into groups
/// sharing a cube, scored by sum over groups of max_P (sum_{j in G} c_j(P))^p.
/// Merging groups never lowers the score, so distinct-cube constraints are inactive.
inline double exhaustive_assignment(const std::vector<std::vector<double>> &c, double p) {
  const std::size_t J = c.size();
  if (J == 0)
    return 0.0;
  if (J > 16)
    throw CapabilityError("exhaustive search limited to 16 levels");
  const std::size_t cubes = c.front().size();
  const std::size_t full = (std::size_t(1) << J) - 1;
  std::vector<double> best(full + 1, 0.0);
  std::vector<double> sums(cubes);
  for (std::size_t G = 1; G <= full; ++G) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < J; ++j)
      if (G >> j & 1)
        for (std::size_t q = 0; q < cubes; ++q)
          sums[q] += c[j][q];
    double m = 0.0;
    for (double v : sums)
      m = std::max(m, v);
    best[G] = std::pow(m, p);
  }
  std::vector<double> F(full + 1, 0.0);
  for (std::size_t S = 1; S <= full; ++S) {
    const std::size_t low = S & (~S + 1);
    const std::size_t rest = S ^ low;
    double m = 0.0;
    // Groups containing the lowest element of S.
    for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
      const std::size_t G = sub | low;
      m = std::max(m, best[G] + F[S ^ G]);
      if (sub == 0)
        break;
    }
    F[S] = m;
  }
  return std::pow(F[full], 1.0 / p);
}

inline double greedy_assignment(const std::vector<std::vector<double>> &c, double p) {
  if (c.empty())
    return 0.0;
  std::vector<double> load(c.front().size(), 0.0);
  for (const auto &row : c) {
    std::size_t arg = 0;
    for (std::size_t q = 1; q < row.size(); ++q)
      if (row[q] > row[arg])
        arg = q;
    load[arg] += row[arg];
  }
  double s = 0.0;
  for (double v : load)
    s += std::pow(v, p);
  return std::pow(s, 1.0 / p);
}

} // namespace detail

/// sup_l sup_{P_j} || 2^{ln/p} sum_{j>=l} ((1+l)/(1+j))^b (mean_{P_j}|S_j f|^{p'})^{1/p'} 1_{P_j} ||_p.
/// At p = 1 and p = inf the supremum over cube sequences is attained by the
/// closed forms of nece_term2, which both strategies return.
/// max_level < 0 selects every level for Greedy and exhaustive_max_level for Exhaustive.
inline CriterionTerm nece_mixed(const CriteriaContext &ctx, const LpExponent &p, double b, MixedStrategy strategy,
                                int max_level = -1) {
  if (strategy == MixedStrategy::Exhaustive) {
    if (ctx.grid().dim != 1)
      throw CapabilityError("exhaustive cube search only in 1D");
    if (max_level < 0)
      max_level = exhaustive_max_level;
    if (max_level > exhaustive_max_level)
      throw CapabilityError("exhaustive cube search only for levels <= " + std::to_string(exhaustive_max_level));
  }
  if (!p.is_inf() && p.value() < 1.0)
    throw CapabilityError("nece_mixed needs p >= 1");
  const int K = ctx.k_max();
  const int lmax = max_level < 0 ? K : std::min(max_level, K);
  if (p.is_inf() || p.value() == 1.0) {
    auto t = nece_term2(ctx, p, b);
    t.per_level.resize(std::size_t(lmax + 1));
    t.value = 0.0;
    for (double v : t.per_level)
      t.value = std::max(t.value, v);
    return t;
  }
  const LpExponent pc = p.conjugate();
  return detail::with_truncation_tail(ctx, [&](int top) {
    detail::Partial r;
    for (int l = 0; l <= std::min(lmax, top); ++l) {
      std::vector<std::vector<double>> c;
      for (int j = l; j <= top; ++j) {
        auto row = ctx.level_values(j, l, pc);
        const double w = detail::ratio_weight(l, j, b);
        for (auto &v : row)
          v *= w;
        c.push_back(std::move(row));
      }
      const double v = strategy == MixedStrategy::Greedy ? detail::greedy_assignment(c, p.value())
                                                         : detail::exhaustive_assignment(c, p.value());
      r.per_level.push_back(v);
      r.value = std::max(r.value, v);
    }
    return r;
  });
}

namespace detail {

/// Largest mean of a nonnegative periodic density over all axis-aligned windows of w samples per axis.
inline double sliding_window_max_mean(const GridSpec &g, const std::vector<double> &dens, std::size_t w) {
  const std::size_t N = g.n();
  if (g.dim == 1) {
    std::vector<double> pre(2 * N + 1, 0.0);
    for (std::size_t i = 0; i < 2 * N; ++i)
      pre[i + 1] = pre[i] + dens[i % N];
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      m = std::max(m, pre[i + w] - pre[i]);
    return m / double(w);
  }
  // Row-wise window sums, then column-wise windows over those.
  std::vector<double> rows(N * N);
  std::vector<double> pre(2 * N + 1);
  for (std::size_t i = 0; i < N; ++i) {
    pre[0] = 0.0;
    for (std::size_t j = 0; j < 2 * N; ++j)
      pre[j + 1] = pre[j] + dens[i * N + j % N];
    for (std::size_t j = 0; j < N; ++j)
      rows[i * N + j] = pre[j + w] - pre[j];
  }
  double m = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    pre[0] = 0.0;
    for (std::size_t i = 0; i < 2 * N; ++i)
      pre[i + 1] = pre[i] + rows[(i % N) * N + j];
    for (std::size_t i = 0; i < N; ++i)
      m = std::max(m, pre[i + w] - pre[i]);
  }
  return m / double(w * w);
}

} // namespace detail

/// sup_i 2^{is} sum_{l=0}^{i} 2^{-ls} sup_x mean over the cube of side 2^{1-l} at x of |S_i f|.
inline CriterionTerm netrusov(const CriteriaContext &ctx, double s) {
  const GridSpec &g = ctx.grid();
  if (!(s > 0.0 && s < double(g.dim)))
    throw ConfigError("Netrusov smoothness must lie in (0, n)");
  const int deepest = g.l_max() + 1;
  return detail::with_truncation_tail(ctx, [&](int top) {
    detail::Partial r;
    for (int i = 0; i <= top; ++i) {
      const auto &piece = ctx.pieces()[i];
      std::vector<double> dens(g.size());
      for (std::size_t x = 0; x < g.size(); ++x)
        dens[x] = std::abs(piece.values[x]);
      double sum = 0.0;
      for (int l = 0; l <= i; ++l) {
        const int lv = std::min(l, deepest);
        const auto w = std::size_t(std::llround(std::ldexp(2.0, -lv) / g.dx()));
        sum += std::exp2(-l * s) * detail::sliding_window_max_mean(g, dens, std::max<std::size_t>(w, 1));
      }
      const double v = std::exp2(i * s) * sum;
      r.per_level.push_back(v);
      r.value = std::max(r.value, v);
    }
    return r;
  });
}

/// Exponents (a, c) of the weight (1+j)^a [ln(1+j)]^c bounding the third paraproduct.
inline std::pair<double, double> pi3_log_exponents(const LpExponent &p, double b) {
  if (p.is_inf() || p.value() <= 1.0)
    throw CapabilityError("pi3_log_bound needs p in (1, inf); use suff_term3 or pinf_term3");
  const double pv = p.value();
  if (pv >= 2.0)
    return {std::max(b, 0.5), b == 0.5 ? 0.5 : 0.0};
  return {std::max(b, 1.0 / pv), b == 1.0 / pv ? 1.0 / pv : 0.0};
}

/// sup_j (1+j)^a [ln(1+j)]^c ||S_j f||_inf.
inline CriterionTerm pi3_log_bound(const CriteriaContext &ctx, const LpExponent &p, double b) {
  const auto [a, c] = pi3_log_exponents(p, b);
  return detail::with_truncation_tail(ctx, [&](int top) {
    detail::Partial r;
    for (int j = 0; j <= top; ++j) {
      const double v = std::pow(1.0 + j, a) * std::pow(std::log(1.0 + j), c) * ctx.sup_norm(j);
      r.per_level.push_back(v);
      r.value = std::max(r.value, v);
    }
    return r;
  });
}

enum class Verdict { Multiplier, NotMultiplier, Undecided };

inline std::string to_string(Verdict v) {
  switch (v) {
  case Verdict::Multiplier:
    return "MULTIPLIER";
  case Verdict::NotMultiplier:
    return "NOT";
  case Verdict::Undecided:
    return "UNDECIDED";
  }
  return "UNDECIDED";
}

struct CriterionReport {
  double term_linf = 0.0;
  CriterionTerm term2;
  CriterionTerm term3;
  double combined = 0.0;
  /// Necessity side for p in (1, inf); equal to the main terms at p = 1 and p = inf.
  CriterionTerm nece2;
  CriterionTerm nece3;
  double necessity = 0.0;
  Verdict verdict = Verdict::Undecided;
};

/// Gap factor between sufficiency and necessity values beyond which p in (1, inf) is undecided.
inline constexpr double undecided_gap = 10.0;

inline CriterionReport verdict(const CriteriaContext &ctx, const LpExponent &p, double b) {
  CriterionReport r;
  r.term_linf = ctx.linf();
  const bool endpoint = p.is_inf() || p.value() == 1.0;
  if (!p.is_inf() && p.value() < 1.0)
    throw CapabilityError("criteria need p >= 1");
  if (p.is_inf()) {
    r.term2 = pinf_term2(ctx, b);
    r.term3 = pinf_term3(ctx, b);
  } else {
    r.term2 = suff_term2(ctx, p, b);
    r.term3 = suff_term3(ctx, p, b);
  }
  r.combined = r.term_linf + r.term2.value + r.term3.value;
  const bool suff_div = r.term2.tail.divergent || r.term3.tail.divergent;
  if (endpoint) {
    r.nece2 = r.term2;
    r.nece3 = r.term3;
    r.necessity = r.combined;
    r.verdict = suff_div ? Verdict::NotMultiplier : Verdict::Multiplier;
    return r;
  }
  r.nece2 = nece_term2(ctx, p, b);
  r.nece3 = nece_term3(ctx, p, b);
  r.necessity = r.term_linf + r.nece2.value + r.nece3.value;
  const bool nece_div = r.nece2.tail.divergent || r.nece3.tail.divergent;
  if (nece_div)
    r.verdict = Verdict::NotMultiplier;
  else if (suff_div || r.combined > undecided_gap * r.necessity)
    r.verdict = Verdict::Undecided;
  else
    r.verdict = Verdict::Multiplier;
  return r;
}

} // namespace logbesov
