// Acceptance runner: `acceptance N` checks criterion N and prints one line.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "logbesov/experiments.hpp"
#include "logbesov/random_fields.hpp"
#include "oracles.hpp"

using namespace logbesov;

namespace {

const LpExponent INF = LpExponent::inf();

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string failing(const ExperimentResult &r) {
  std::ostringstream os;
  int bad = 0;
  for (const auto &a : r.assertions)
    if (!a.passed)
      os << (bad++ ? "; " : "") << a.name << " (" << a.detail << ")";
  return bad ? os.str() : std::to_string(r.assertions.size()) + " assertions hold";
}

Outcome partition_exactness() {
  const DyadicPartition P(GridSpec(1, 14));
  const double res = partition_residual(P), leak = annulus_leakage(P);
  std::ostringstream os;
  os << "residual " << res << ", leakage " << leak;
  return {res <= 1e-12 && leak < 1e-10, os.str()};
}

Outcome delta_selection() {
  const GridSpec g(1, 14);
  const DyadicPartition P(g);
  double worst = 0.0;
  for (int m = 2; m <= g.k_max() - 1; ++m) {
    const auto f = make_exponential(g, {1L << m, 0});
    const auto D = decompose(f, P);
    for (int j = 0; j <= D.k_max(); ++j)
      worst = std::max(worst, j == m ? max_abs(D[j] - f) : max_abs(D[j]));
  }
  std::ostringstream os;
  os << "max deviation " << worst;
  return {worst < 1e-10, os.str()};
}

Outcome bump_decay() {
  const GridSpec g(1, 14);
  const DyadicPartition P(g);
  const int l = 9;
  const auto D = decompose(make_bump(g, {l, {0.0, 0.0}}), P);
  bool ok = true;
  std::ostringstream os;
  for (const auto &p : {LpExponent(1.0), LpExponent(2.0), INF}) {
    std::vector<double> lo_j, lo_v, hi_j, hi_v;
    for (int j = 1; j <= D.k_max(); ++j) {
      const double v = lp_norm(D[j], p);
      (j < l ? lo_j : hi_j).push_back(j);
      (j < l ? lo_v : hi_v).push_back(v);
    }
    const double rise = 1.0 + 1.0 / p.conjugate().value();
    const double below = fit_slope(lo_j, lo_v, FitScale::SemiLog2).slope;
    const double above = fit_slope(hi_j, hi_v, FitScale::SemiLog2).slope;
    const bool pass = std::abs(below - rise) <= exponent_tolerance && std::abs(above + 1.0) <= exponent_tolerance;
    ok = ok && pass;
    os << "p=" << p.str() << ": j<l " << below << " vs " << rise << ", j>=l " << above << " vs -1"
       << (pass ? "" : " [off]") << (p.is_inf() ? "" : "; ");
  }
  return {ok, os.str()};
}

Outcome exp_growth(const LpExponent &p, std::vector<double> bs) {
  ExperimentConfig c;
  c.name = "exp-growth";
  c.p_list = {p};
  c.b_list = std::move(bs);
  const auto r = run_exp_growth(c);
  return {r.passed(), failing(r)};
}

Outcome characteristic_functions() {
  CharfunConfig c;
  const auto r = run_charfun(c);
  return {r.passed(), failing(r)};
}

Outcome ordering() {
  const GridSpec g(1, 10);
  const DyadicPartition P(g);
  int violations = 0, checks = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const CriteriaContext ctx(random_band_limited(g, 16.0 + 6.0 * double(seed), seed), P);
    for (double p : {1.0, 1.5, 2.0, 4.0})
      for (double b : {-1.0, 0.0, 0.5, 1.0}) {
        const LpExponent pe(p);
        const double s2 = suff_term2(ctx, pe, b).value, n2 = nece_term2(ctx, pe, b).value;
        const double s3 = suff_term3(ctx, pe, b).value, n3 = nece_term3(ctx, pe, b).value;
        violations += n2 > s2 * (1.0 + 1e-12);
        violations += n3 > s3 * (1.0 + 1e-12);
        checks += 2;
      }
  }
  return {violations == 0, std::to_string(violations) + " violations in " + std::to_string(checks) + " comparisons"};
}

Outcome paraproduct_completeness() {
  const GridSpec g(1, 12);
  const DyadicPartition P(g);
  const double band = std::ldexp(1.0, g.k_max() - 3) - 1.0;
  double worst = 0.0, leak = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto f = random_band_limited(g, band, seed);
    const auto h = random_band_limited(g, band, seed + 1000);
    worst = std::max(worst, decompose_product(f, h, P).residual);
    const auto F = decompose(f, P), G = decompose(h, P);
    for (int k = 0; k <= g.k_max(); ++k) {
      const auto s = pi2_summand(F, G, k);
      if (max_abs(s) == 0.0)
        continue;
      const double reach = 5.0 * std::ldexp(1.0, k);
      leak = std::max(leak, energy_outside(s, [&](std::size_t i) { return g.frequency_norm(i) <= reach; }));
    }
  }
  std::ostringstream os;
  os << "max residual " << worst << ", envelope leakage " << leak;
  return {worst < 1e-8 && leak < 1e-10, os.str()};
}

Outcome norm_oracle() {
  double worst = 0.0;
  int cases = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int dim = seed % 4 == 0 ? 2 : 1;
    const GridSpec g(dim, dim == 1 ? 8 : 6);
    const DyadicPartition P(g);
    const auto f = random_band_limited(g, double(g.n() / 2) - 1.0, seed);
    const auto u = oracle::pieces(f);
    for (double s : {-1.0, 0.0, 1.0})
      for (double b : {-1.0, 0.0, 1.0})
        for (double p : {1.0, 2.0, 0.0})
          for (double q : {1.0, 2.0, 0.0}) {
            const BesovParams params{s, b, p == 0.0 ? INF : LpExponent(p), q == 0.0 ? INF : LpExponent(q)};
            const double ref = oracle::besov(u, g.cell_volume(), s, b, p, q);
            worst = std::max(worst, std::abs(besov_norm(f, P, params).value - ref) / ref);
            ++cases;
          }
  }
  std::ostringstream os;
  os << "max relative error " << worst << " over " << cases << " evaluations";
  return {worst <= 1e-12, os.str()};
}

Outcome modulus_closed_form() {
  const GridSpec g(1, 12);
  const auto e = make_exponential(g, {1, 0});
  double worst = 0.0;
  for (int j = 0; j <= g.l_max(); ++j) {
    const double t = std::ldexp(pi, -j);
    worst = std::max(worst, std::abs(modulus(e, 1, t, INF) - 2.0 * std::sin(t / 2.0)));
  }
  const double t_min = std::exp2(-g.l_max() - 1);
  const double quad = oracle::simpson([](double t) { return 2.0 * std::sin(t / 2.0) / t; }, t_min, 0.5, 20000);
  const double rel = std::abs(dini_norm(e).value - quad) / quad;
  std::ostringstream os;
  os << "modulus error " << worst << ", Dini relative error " << rel;
  return {worst < 1e-6 && rel <= 0.05, os.str()};
}

const std::vector<Criterion> &criteria() {
  static const std::vector<Criterion> all{
      {"partition exactness", 1.0, partition_exactness},
      {"delta selection", 5.0, delta_selection},
      {"bump decay rates", 30.0, bump_decay},
      {"exponential growth p=1", 120.0, [] { return exp_growth(LpExponent(1.0), {-2.0, -1.0, 0.0, 0.5, 1.0, 2.0}); }},
      {"exponential growth p=inf", 120.0, [] { return exp_growth(INF, {-2.0, -1.0, 0.0, 0.5, 1.0, 2.0}); }},
      {"lower-bound family p=4", 180.0, [] { return exp_growth(LpExponent(4.0), {0.0, 2.0, -1.0}); }},
      {"characteristic functions", 30.0, characteristic_functions},
      {"ordering invariants", 120.0, ordering},
      {"paraproduct completeness", 60.0, paraproduct_completeness},
      {"norm oracle equivalence", 60.0, norm_oracle},
      {"modulus closed form", 60.0, modulus_closed_form},
  };
  return all;
}

bool run(int n) {
  const auto &c = criteria()[std::size_t(n - 1)];
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception &e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs <= c.budget_seconds;
  const bool ok = o.passed && in_time;
  std::printf("criterion %d: %s %s: %s; %.2f s of %.0f s%s\n", n, ok ? "PASS" : "FAIL", c.title.c_str(),
              o.detail.c_str(), secs, c.budget_seconds, in_time ? "" : " [over budget]");
  std::fflush(stdout);
  return ok;
}

} // namespace

int main(int argc, char **argv) {
  const int count = int(criteria().size());
  if (argc > 2) {
    std::fprintf(stderr, "usage: acceptance [1-%d]\n", count);
    return 2;
  }
  if (argc == 2) {
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > count) {
      std::fprintf(stderr, "criterion must be 1-%d\n", count);
      return 2;
    }
    return run(n) ? 0 : 1;
  }
  bool all = true;
  for (int n = 1; n <= count; ++n)
    all = run(n) && all;
  return all ? 0 : 1;
}
