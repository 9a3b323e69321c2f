#include <catch2/catch_amalgamated.hpp>

#include "logbesov/gallery_spec.hpp"
#include "logbesov/necessity.hpp"
#include "logbesov/norms.hpp"
#include "oracles.hpp"

using namespace logbesov;
using Catch::Approx;

namespace {

double grid_sum(const SampledFunction &f) {
  cplx s{};
  for (const auto &v : f.values)
    s += v;
  return std::abs(s);
}

double max_diff(const SampledFunction &a, const SampledFunction &b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

std::size_t nonzero_coefficients(const SampledFunction &f) {
  std::size_t n = 0;
  for (const auto &c : forward(f).coeffs)
    n += std::abs(c) > 1e-12;
  return n;
}

} // namespace

TEST_CASE("exponentials") {
  const GridSpec g(2, 7);
  const auto one = make_exponential(g, {0, 0});
  for (const auto &v : one.values)
    CHECK(std::abs(v - 1.0) < 1e-15);
  const auto e = make_exponential(g, {5, -3});
  CHECK(nonzero_coefficients(e) == 1);
  CHECK(std::abs(forward(e).at(5, -3) - 1.0) < 1e-12);
  CHECK_THROWS_AS(make_exponential(g, {64, 0}), AliasingError);
  CHECK_NOTHROW(make_exponential(g, {-63, 0}));
}

TEST_CASE("indicators") {
  const GridSpec g(1, 12);
  IndicatorSpec full{IndicatorShape::Rectangle, {-pi, -pi}, {pi, pi}};
  for (const auto &v : make_indicator(g, full).values)
    CHECK(v == 1.0);
  const auto cube = make_indicator(g, {IndicatorShape::Cube});
  CHECK(max_abs(cube) == 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(i);
    CHECK(cube.values[i].real() == ((x > -1.0 && x < 1.0) ? 1.0 : 0.0));
  }
  const auto half = make_indicator(GridSpec(2, 6), {IndicatorShape::Halfspace});
  const GridSpec h(2, 6);
  for (std::size_t i = 0; i < h.size(); ++i)
    CHECK(half.values[i].real() == (h.point(i)[1] >= 0.0 ? 1.0 : 0.0));
  const DyadicPartition P(GridSpec(1, 14));
  const auto D = decompose(make_indicator(P.grid(), {IndicatorShape::Cube}), P);
  double floor_value = INFINITY;
  for (int k = 6; k <= P.k_max(); ++k)
    floor_value = std::min(floor_value, max_abs(D[k]));
  CHECK(floor_value > 0.1);
}

TEST_CASE("bumps have plateaus, zero sum and translation invariant norms") {
  const GridSpec g(1, 13);
  const auto h = make_bump(g, {2, {0.0, 0.0}});
  double hi = -INFINITY, lo = INFINITY;
  for (const auto &v : h.values) {
    hi = std::max(hi, v.real());
    lo = std::min(lo, v.real());
  }
  CHECK(std::max(hi, -lo) == 1.0);
  CHECK(std::min(hi, -lo) > 1.0 - 1e-6);
  CHECK(grid_sum(h) * g.dx() < 1e-10);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(i);
    if (x >= 0.0 && x < 0.25)
      CHECK(h.values[i].real() > 1.0 - 1e-6);
    if (x >= 0.5 && x < 0.75)
      CHECK(h.values[i].real() < -1.0 + 1e-6);
    if (x < -0.125 || x >= 0.875)
      CHECK(h.values[i] == 0.0);
  }
  const DyadicPartition P(g);
  const auto a = decompose(make_bump(g, {6, {0.0, 0.0}}), P);
  const auto b = decompose(make_bump(g, {6, {-500.0 * g.dx(), 0.0}}), P);
  for (int j = 0; j <= P.k_max(); ++j)
    for (auto p : {LpExponent(1.0), LpExponent(2.0), LpExponent::inf()})
      CHECK(std::abs(lp_norm(a[j], p) - lp_norm(b[j], p)) < 1e-10);
  CHECK_THROWS_AS(make_bump(g, {0, {3.0, 0.0}}), DomainError);
  const auto h2 = make_bump(GridSpec(2, 8), {3, {0.0, 0.0}});
  CHECK(grid_sum(h2) < 1e-9);
  CHECK(max_abs(h2) == 1.0);
}

TEST_CASE("bump projections decay away from the bump level") {
  const GridSpec g(1, 14);
  const DyadicPartition P(g);
  const auto D = decompose(make_bump(g, {9, {0.0, 0.0}}), P);
  for (int j = 1; j + 1 <= 7; ++j)
    CHECK(max_abs(D[j]) < max_abs(D[j + 1]));
  CHECK(max_abs(D[11]) < max_abs(D[10]));
}

TEST_CASE("stacks") {
  const GridSpec g(1, 14);
  StackSpec single{4, 2, 3, LpExponent(2.0), 1.0, {}};
  const auto s = make_stack(g, single);
  const auto h = make_bump(g, {2, default_stack_anchor(1)});
  CHECK(max_diff(s, h * stack_coefficient(single, 0, 1)) < 1e-15);
  CHECK(std::abs(stack_coefficient(single, 0, 1) - std::exp2(1.0) / 3.0) < 1e-14);
  StackSpec flat{2, 0, 10, LpExponent::inf(), 0.0, {}};
  const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int l = 0; l < 6; ++l)
    CHECK(stack_coefficient(flat, l, 1) == ipow[l % 4]);
  CHECK_THROWS_AS(make_stack(g, {2, 0, g.k_max(), LpExponent(1.0), 0.0, {}}), DomainError);
  CHECK_THROWS_AS(make_stack(g, {2, 2, 4, LpExponent(1.0), 0.0, {}}), ConfigError);

  // Norm in B^{0,b}_{p,inf} stays bounded as the depth grows.
  const DyadicPartition P(g);
  std::vector<double> norms;
  for (int N = 1; N <= 10; N += 3)
    norms.push_back(besov_norm(make_stack(g, {3, 1, N, LpExponent(2.0), 0.5, {}}), P,
                               {0.0, 0.5, LpExponent(2.0), LpExponent::inf()})
                        .value);
  const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
  CHECK(*hi / *lo < 2.0);

  // On each plateau the stack dominates the coefficient of the deepest term covering it.
  const StackSpec deep{3, 0, 9, LpExponent(1.0), 0.0, {}};
  const auto gs = make_stack(g, deep);
  const auto levels = deep.levels();
  double worst = INFINITY;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const double edge = std::ldexp(1.0, -levels[l]);
    const double deeper = l + 1 < levels.size() ? std::ldexp(1.0, -levels[l + 1]) : 0.0;
    const double coeff = std::abs(stack_coefficient(deep, int(l), 1));
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.coordinate(i) + 2.0;
      if (x >= deeper && x < edge)
        worst = std::min(worst, std::abs(gs.values[i]) / coeff);
    }
  }
  CHECK(worst > 0.5);
}

TEST_CASE("exponential stacks") {
  const GridSpec g(1, 13);
  const DyadicPartition P(g);
  CHECK(max_diff(make_exp_stack(g, 0, 3.0), make_exponential(g, {1, 0})) < 1e-14);
  CHECK_THROWS_AS(make_exp_stack(g, g.k_max(), 0.0), DomainError);
  std::vector<double> tails0, tails1;
  for (int k = 4; k <= 10; ++k) {
    for (double b : {0.0, 1.0}) {
      const auto D = decompose(make_exp_stack(g, k, b), P);
      double t = 0.0;
      for (int j = k - 1; j <= P.k_max(); ++j)
        t += max_abs(D[j]);
      (b == 0.0 ? tails0 : tails1).push_back(b == 0.0 ? t : t * (1.0 + k));
    }
  }
  for (auto *v : {&tails0, &tails1}) {
    const auto [lo, hi] = std::minmax_element(v->begin(), v->end());
    CHECK(*hi / *lo < 1.5);
  }
}

TEST_CASE("kernel calibration and scaling") {
  const DyadicPartition P(GridSpec(1, 12));
  const auto cal = calibrate_kernel(P);
  CHECK(cal.lambda > 0.0);
  CHECK(std::abs(cal.nu0[0]) > (1L << cal.sigma));
  CHECK(std::abs(cal.nu0[0]) < (3L << cal.sigma));
  double peak = 0.0;
  for (double x = 0.0; x < 20.0; x += 0.01)
    peak = std::max(peak, partition_kernel(P, 1, {x, 0.0}));
  CHECK(cal.lambda <= peak);

  // Direct Simpson quadrature of (2 pi)^{-1/2} int phi_k(xi) e^{i x xi} d xi.
  auto direct = [](int k, double x) {
    const double top = 1.5 * std::ldexp(1.0, k);
    return 2.0 * oracle::simpson([&](double xi) { return oracle::phik(k, xi) * std::cos(x * xi); }, 0.0, top, 20000) /
           std::sqrt(2.0 * pi);
  };
  for (double x : {0.0, 0.3, 1.1, 2.8}) {
    CHECK(std::abs(partition_kernel(P, 1, {x, 0.0}) - direct(1, x)) < 1e-8);
    for (int k = 2; k <= 5; ++k) {
      const double y = x / std::ldexp(1.0, k - 1);
      CHECK(std::abs(partition_kernel(P, k, {y, 0.0}) - std::ldexp(1.0, k - 1) * partition_kernel(P, 1, {x, 0.0})) <
            1e-8);
      CHECK(std::abs(partition_kernel(P, k, {y, 0.0}) - direct(k, y)) < 1e-8);
    }
  }
}

TEST_CASE("necessity packets") {
  const GridSpec g(1, 12);
  const DyadicPartition P(g);
  const auto cal = calibrate_kernel(P);
  NecessityPacketSpec spec{0, 6, LpExponent(2.0), 0.0, cal, {}};
  const auto one = sample(g, [](const Point &) { return 1.0; });
  CHECK_THROWS_AS(make_necessity_packet(one, P, spec), DegenerateInputError);
  spec.p = LpExponent(1.0);
  CHECK_THROWS_AS(make_necessity_packet(make_exponential(g, {256, 0}), P, spec), CapabilityError);

  spec.p = LpExponent(2.0);
  const int m = 8;
  const auto f = make_exponential(g, {1L << m, 0});
  const auto packet = make_necessity_packet(f, P, spec);
  CHECK(max_abs(packet) > 0.0);
  const double lo = std::ldexp(1.0, m - 1), hi = 3.0 * lo;
  CHECK(energy_outside(packet, [&](std::size_t i) {
          const double r = g.frequency_norm(i);
          return r >= lo && r <= hi;
        }) < 1e-20);

  // p = 2: the single term is S_m(eta sgn(f)|f|) / ||f||_{L^2(cell)}.
  const int level = spec.k + cal.sigma;
  spec.cubes.assign(std::size_t(P.k_max() - spec.shift + 1), {0, 0});
  const DyadicCube best{level, {cal.nu0[0], 0}};
  const auto pinned = make_necessity_packet(f, P, spec);
  SampledFunction inner(g);
  const auto rg = cube_ranges(g, best);
  double mass = 0.0;
  for (std::size_t i = rg[0].lo; i < rg[0].hi; ++i) {
    inner.values[i] = f.values[i];
    mass += std::norm(f.values[i]) * g.dx();
  }
  const double best_norm = std::sqrt(mass);
  const auto expected = project(inner, P, m) * (1.0 / best_norm);
  CHECK(max_diff(pinned, expected) < 1e-10);
  spec.cubes.clear();

  std::vector<double> norms;
  for (int k = 0; k <= 3; ++k) {
    spec.k = k;
    norms.push_back(besov_norm(make_necessity_packet(make_exponential(g, {1L << 10, 0}), P, spec), P,
                               {0.0, 0.0, LpExponent(2.0), LpExponent::inf()})
                        .value);
  }
  const auto [a, b] = std::minmax_element(norms.begin(), norms.end());
  CHECK(*b / *a < 3.0);
}

TEST_CASE("modulated packets") {
  const GridSpec g(1, 12);
  const auto env = unit_envelope(g);
  const auto three = make_modulated_packet(packet_case(3, 1, 0.0, env));
  CHECK(max_diff(three, make_exponential(g, {2, 0})) < 1e-14);
  const auto top = make_modulated_packet(packet_case(6, 5, 0.0, env));
  CHECK(max_diff(top, make_exponential(g, {64, 0})) < 1e-14);
  const auto c2 = make_modulated_packet(packet_case(6, 2, 0.0, env));
  const auto F = forward(c2);
  for (int j = 1; j <= 4; ++j)
    CHECK(std::abs(F.at(1L << j) - std::pow(1.0 + j, -0.5)) < 1e-12);
  CHECK(nonzero_coefficients(c2) == 4);
  CHECK_THROWS_AS(make_modulated_packet(packet_case(g.k_max() - 1, 1, 0.0, env)), DomainError);
  CHECK_THROWS_AS(packet_case(5, 6, 0.0, env), ConfigError);
  CHECK_THROWS_AS(annulus_envelope(g), DegenerateInputError);
  const auto wide = annulus_envelope(g, 8.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = std::abs(double(g.frequency(i))) / 8.0;
    if (r <= 1.5 || r >= 2.0)
      CHECK(wide.coeffs[i] == 0.0);
  }
}

TEST_CASE("gallery specifications") {
  const GridSpec g(1, 12);
  CHECK(max_diff(gallery_function(g, "exp:m=4,neg"), make_exponential(g, {-16, 0})) == 0.0);
  CHECK(max_diff(gallery_function(g, "exp:k=5"), make_exponential(g, {5, 0})) == 0.0);
  CHECK(max_diff(gallery_function(g, "const:c=2.5"), make_exponential(g, {0, 0}) * 2.5) == 0.0);
  CHECK(max_diff(gallery_function(g, "cube"), make_indicator(g, {IndicatorShape::Cube})) == 0.0);
  CHECK(max_diff(gallery_function(g, "random:band=10,seed=3"), gallery_function(g, "random:band=10,seed=3")) == 0.0);
  CHECK(max_diff(gallery_function(g, "packet:m=5,case=5"), make_exponential(g, {32, 0})) < 1e-14);
  CHECK_NOTHROW(gallery_function(g, "stack:m=3,b=1,p=2"));
  CHECK_NOTHROW(gallery_function(g, "bump:l=5"));
  CHECK_NOTHROW(gallery_function(g, "mollified-cube:w=0.1"));
  CHECK_THROWS_AS(gallery_function(g, "exp:m=4,q=2"), ConfigError);
  CHECK_THROWS_AS(gallery_function(g, "nosuch"), ConfigError);
  CHECK_THROWS_AS(gallery_function(g, "bump:l=x"), ConfigError);
  CHECK(parse_int_list("1-5") == std::vector<int>{1, 2, 3, 4, 5});
  CHECK(parse_int_list("1+2+5") == std::vector<int>{1, 2, 5});
}
