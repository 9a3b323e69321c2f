#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "logbesov/cubes.hpp"
#include "logbesov/fft.hpp"
#include "logbesov/io.hpp"
#include "logbesov/random_fields.hpp"
#include "oracles.hpp"

using namespace logbesov;
using Catch::Approx;

TEST_CASE("grid spec validation and derived sizes") {
  const GridSpec g(1, 14);
  CHECK(g.n() == 16384);
  CHECK(g.k_max() == 12);
  CHECK(3 * (1L << (g.k_max() - 1)) <= long(g.n() / 2));
  CHECK(g.l_max() == 8);
  CHECK(GridSpec(1, 10).l_max() == 4);
  CHECK_THROWS_AS(GridSpec(3, 10), ConfigError);
  CHECK_THROWS_AS(GridSpec(1, 5), ConfigError);
}

TEST_CASE("conjugate exponents") {
  CHECK(LpExponent(1.0).conjugate().is_inf());
  CHECK(LpExponent::inf().conjugate().value() == 1.0);
  CHECK(LpExponent(4.0).conjugate().value() == Approx(4.0 / 3.0));
  CHECK(LpExponent::parse("inf").is_inf());
  CHECK(LpExponent::parse("2.5").value() == 2.5);
  CHECK_THROWS_AS(LpExponent(0.0), ConfigError);
  CHECK_THROWS_AS(LpExponent::parse("2x"), ConfigError);
}

TEST_CASE("lp norms of closed-form functions") {
  const GridSpec g(1, 12);
  const auto one = sample(g, [](const Point &) { return 1.0; });
  CHECK(lp_norm(one, LpExponent(2.0)) == Approx(std::sqrt(2.0 * pi)).epsilon(1e-14));
  CHECK(lp_norm(one, LpExponent::inf()) == 1.0);
  const auto s = sample(g, [](const Point &x) { return std::sin(x[0]); });
  CHECK(std::abs(lp_norm(s, LpExponent(2.0)) - std::sqrt(pi)) < 1e-10);
  auto bad = one;
  bad.values[3] = NAN;
  CHECK_THROWS_AS(lp_norm(bad, LpExponent(1.0)), InputError);
}

TEST_CASE("transform round trip and coefficient convention") {
  for (int dim : {1, 2}) {
    const GridSpec g(dim, dim == 1 ? 10 : 6);
    const auto f = random_band_limited(g, 12.0, 7);
    const auto back = inverse(forward(f));
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      err = std::max(err, std::abs(back.values[i] - f.values[i]));
      ref = std::max(ref, std::abs(f.values[i]));
    }
    CHECK(err / ref < 1e-12);
  }
  const GridSpec g(1, 8);
  const auto f = random_band_limited(g, 20.0, 3);
  const auto F = forward(f);
  const auto c = oracle::naive_dft(f);
  for (std::size_t i = 0; i < c.size(); ++i)
    CHECK(std::abs(F.coeffs[i] - c[i]) < 1e-12);
  CHECK_THROWS_AS(F.at(128), AliasingError);
}

TEST_CASE("Parseval identity") {
  for (int dim : {1, 2}) {
    const GridSpec g(dim, dim == 1 ? 11 : 7);
    const auto f = random_band_limited(g, 30.0, 11);
    const double l2 = lp_norm(f, LpExponent(2.0));
    CHECK(std::abs(l2 * l2 - parseval_energy(forward(f))) / (l2 * l2) < 1e-10);
  }
}

TEST_CASE("cube mean power examples") {
  const GridSpec g(1, 12);
  const auto c = sample(g, [](const Point &) { return cplx(0.0, -3.0); });
  for (auto r : {LpExponent(1.0), LpExponent(2.5), LpExponent::inf()})
    CHECK(cube_mean_power(c, {3, {1, 0}}, r) == Approx(3.0));
  const DyadicCube Q{2, {1, 0}};
  const double mid = Q.corner(0) + Q.edge() / 2.0;
  const auto half = sample(g, [&](const Point &x) { return x[0] < mid ? 1.0 : 0.0; });
  CHECK(std::abs(cube_mean_power(half, Q, LpExponent(1.0)) - 0.5) <= g.dx() / Q.edge());
  const auto lin = sample(g, [](const Point &x) { return x[0]; });
  CHECK(std::abs(cube_mean_power(lin, {2, {0, 0}}, LpExponent(1.0)) - 0.125) < 2e-3);
  CHECK_THROWS_AS(cube_mean_power(lin, {0, {3, 0}}, LpExponent(1.0)), DomainError);
  CHECK_THROWS_AS(cube_mean_power(lin, {12, {0, 0}}, LpExponent(1.0)), ResolutionError);
}

TEST_CASE("cube suprema against brute force") {
  const GridSpec g(1, 10);
  const auto one = sample(g, [](const Point &) { return 1.0; });
  const auto e = sample(g, [](const Point &x) { return std::polar(1.0, 64.0 * x[0]); });
  for (int l = 0; l <= g.l_max(); ++l) {
    CHECK(sup_over_cubes(one, l, LpExponent(1.5)) == Approx(1.0));
    CHECK(sup_over_cubes(e, l, LpExponent::inf()) == Approx(1.0));
  }
  const auto ind = sample(g, [](const Point &x) { return x[0] >= 0.0 ? 1.0 : 0.0; });
  CHECK(sup_over_cubes(ind, 2, LpExponent(1.0)) == Approx(1.0));
  CHECK_THROWS_AS(sup_over_cubes(ind, g.l_max() + 1, LpExponent(1.0)), ResolutionError);

  for (int dim : {1, 2}) {
    const GridSpec h(dim, dim == 1 ? 11 : 7);
    const auto f = random_band_limited(h, 10.0, 5);
    for (int l = 0; l <= h.l_max(); ++l)
      for (double r : {1.0, 2.0, 3.0, 0.0}) {
        const LpExponent ex = r == 0.0 ? LpExponent::inf() : LpExponent(r);
        CHECK(sup_over_cubes(f, l, ex) == Approx(oracle::cube_sup(f, l, r)).epsilon(1e-10));
      }
  }
}

TEST_CASE("sfn and dpu round trips") {
  const GridSpec g(2, 6);
  const auto f = random_band_limited(g, 8.0, 2);
  std::stringstream ss;
  io::write_sfn(ss, f);
  const auto back = io::read_sfn(ss);
  CHECK(back.grid == g);
  CHECK(back.values == f.values);

  const DyadicPartition P(GridSpec(1, 9), PartitionKind::Tensor);
  std::stringstream ds;
  io::write_dpu(ds, P);
  const auto ex = io::read_dpu(ds);
  CHECK(ex.kind == PartitionKind::Tensor);
  REQUIRE(ex.symbols.size() == std::size_t(P.k_max() + 1));
  for (int k = 0; k <= P.k_max(); ++k)
    CHECK(ex.symbols[std::size_t(k)] == P.symbol(k));

  std::stringstream broken("{\"dim\":1,\"J\":8}\n1234");
  CHECK_THROWS_AS(io::read_sfn(broken), InputError);
}
