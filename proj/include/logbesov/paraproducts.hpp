#pragma once

#include <string>
#include <vector>

#include "logbesov/norms.hpp"
#include "logbesov/partition.hpp"

namespace logbesov {

namespace detail {

inline void accumulate_product(SampledFunction &out, const SampledFunction &a, const SampledFunction &b) {
  for (std::size_t i = 0; i < out.size(); ++i)
    out.values[i] += a.values[i] * b.values[i];
}

} // namespace detail

/// Pi_1 = sum_{k>=2} (S^{k-2} f) S_k g; Pi_2 = sum_k sum_{|i|<=1} (S_{k+i} f) S_k g;
/// Pi_3 = sum_{k>=2} (S_k f) S^{k-2} g; all truncated at K_max.
inline SampledFunction paraproduct(const SpectralDecomposition &F, const SpectralDecomposition &G, int which) {
  if (!(F.grid == G.grid) || F.k_max() != G.k_max())
    throw InputError("decompositions do not match");
  const int K = F.k_max();
  SampledFunction out(F.grid);
  switch (which) {
  case 1: {
    SampledFunction low(F.grid);
    for (int k = 2; k <= K; ++k) {
      low += F[k - 2];
      detail::accumulate_product(out, low, G[k]);
    }
    break;
  }
  case 2:
    for (int k = 0; k <= K; ++k)
      for (int i = -1; i <= 1; ++i)
        if (k + i >= 0 && k + i <= K)
          detail::accumulate_product(out, F[k + i], G[k]);
    break;
  case 3: {
    SampledFunction low(F.grid);
    for (int k = 2; k <= K; ++k) {
      low += G[k - 2];
      detail::accumulate_product(out, F[k], low);
    }
    break;
  }
  default:
    throw ConfigError("paraproduct index must be 1, 2 or 3");
  }
  return out;
}

inline SampledFunction paraproduct(const SampledFunction &f, const SampledFunction &g, const DyadicPartition &P,
                                   int which) {
  return paraproduct(decompose(f, P), decompose(g, P), which);
}

/// k-th summand of Pi_2: sum_{|i|<=1} (S_{k+i} f) S_k g.
inline SampledFunction pi2_summand(const SpectralDecomposition &F, const SpectralDecomposition &G, int k) {
  SampledFunction out(F.grid);
  for (int i = -1; i <= 1; ++i)
    if (k + i >= 0 && k + i <= F.k_max())
      detail::accumulate_product(out, F[k + i], G[k]);
  return out;
}

struct ProductReport {
  SampledFunction pi1, pi2, pi3;
  /// ||Pi_1 + Pi_2 + Pi_3 - f g||_2 / ||f g||_2.
  double residual = 0.0;
};

inline ProductReport decompose_product(const SampledFunction &f, const SampledFunction &g, const DyadicPartition &P) {
  const auto F = decompose(f, P), G = decompose(g, P);
  ProductReport r{paraproduct(F, G, 1), paraproduct(F, G, 2), paraproduct(F, G, 3), 0.0};
  const auto fg = pointwise_product(f, g);
  const auto diff = r.pi1 + r.pi2 + r.pi3 - fg;
  const double denom = lp_norm(fg, LpExponent(2.0));
  r.residual = denom > 0.0 ? lp_norm(diff, LpExponent(2.0)) / denom : lp_norm(diff, LpExponent(2.0));
  return r;
}

struct TruncatedProduct {
  SampledFunction product;
  /// ||P_J - P_{J-1}||_2, ||P_{J-1} - P_{J-2}||_2, ||P_{J-2} - P_{J-3}||_2 where P_j = (S^j f)(S^j g).
  std::vector<double> successive_differences;
};

inline TruncatedProduct truncated_product(const SampledFunction &f, const SampledFunction &g, const DyadicPartition &P,
                                          int J) {
  P.check_level(J);
  const auto F = decompose(f, P), G = decompose(g, P);
  auto at = [&](int j) { return pointwise_product(partial_sum(F, j), partial_sum(G, j)); };
  TruncatedProduct r{at(J), {}};
  SampledFunction prev = r.product;
  for (int j = J - 1; j >= J - 3 && j >= -1; --j) {
    auto cur = at(j);
    r.successive_differences.push_back(lp_norm(prev - cur, LpExponent(2.0)));
    prev = std::move(cur);
  }
  return r;
}

struct FamilyMember {
  std::string id;
  SampledFunction g;
};

struct LowerBound {
  double value = 0.0;
  std::string argmax;
  std::vector<double> ratios;
};

/// max over the family of ||f g||_B / ||g||_B; a lower bound for the multiplier norm.
inline LowerBound multiplier_lower_bound(const SampledFunction &f, const DyadicPartition &P, const BesovParams &params,
                                         const std::vector<FamilyMember> &family) {
  if (family.empty())
    throw InputError("empty test family");
  LowerBound r;
  for (const auto &member : family) {
    const double gn = besov_norm(member.g, P, params).value;
    if (!(gn > 0.0))
      throw InputError("family member '" + member.id + "' has zero norm");
    const double ratio = besov_norm(pointwise_product(f, member.g), P, params).value / gn;
    r.ratios.push_back(ratio);
    if (r.argmax.empty() || ratio > r.value) {
      r.value = ratio;
      r.argmax = member.id;
    }
  }
  return r;
}

} // namespace logbesov
