#pragma once

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "logbesov/criteria.hpp"
#include "logbesov/fit.hpp"
#include "logbesov/gallery.hpp"
#include "logbesov/norms.hpp"
#include "logbesov/paraproducts.hpp"

namespace logbesov {

struct ExperimentConfig {
  std::string name;
  GridSpec grid{1, 14};
  std::vector<double> b_list{-2.0, -1.0, 0.0, 0.5, 1.0, 2.0};
  std::vector<LpExponent> p_list{LpExponent(1.0)};
  int m_lo = 3;
  int m_hi = 10;
  std::uint64_t seed = 1;
  std::string out;

  void validate() const {
    if (m_lo < 2 || m_hi > grid.k_max() - 2 || m_hi - m_lo + 1 < 4)
      throw ConfigError("m-range must lie in [2, K_max - 2] and hold at least 4 points");
    if (b_list.empty() || p_list.empty())
      throw ConfigError("empty parameter sweep");
  }

  std::vector<int> m_values() const {
    std::vector<int> out;
    for (int m = m_lo; m <= m_hi; ++m)
      out.push_back(m);
    return out;
  }
};

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Ordered rows with a fixed column schema.
class Table {
public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(nlohmann::ordered_json row) {
    nlohmann::ordered_json ordered;
    for (const auto &c : columns_) {
      if (!row.contains(c))
        throw ConfigError("row lacks column '" + c + "'");
      ordered[c] = row[c];
    }
    rows_.push_back(std::move(ordered));
  }

  const std::vector<std::string> &columns() const { return columns_; }
  const std::vector<nlohmann::ordered_json> &rows() const { return rows_; }

  std::string csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns_.size(); ++i)
      os << (i ? "," : "") << columns_[i];
    os << '\n';
    for (const auto &row : rows_) {
      for (std::size_t i = 0; i < columns_.size(); ++i)
        os << (i ? "," : "") << cell(row[columns_[i]]);
      os << '\n';
    }
    return os.str();
  }

  nlohmann::ordered_json json() const { return rows_; }

private:
  static std::string cell(const nlohmann::ordered_json &v) {
    if (v.is_string())
      return v.get<std::string>();
    if (v.is_number_float()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
      return buf;
    }
    if (v.is_null())
      return "inf";
    return v.dump();
  }

  std::vector<std::string> columns_;
  std::vector<nlohmann::ordered_json> rows_;
};

struct ExperimentResult {
  Table table;
  std::vector<Assertion> assertions;

  bool passed() const {
    for (const auto &a : assertions)
      if (!a.passed)
        return false;
    return true;
  }
};

/// Non-finite numbers become JSON null.
inline nlohmann::ordered_json num(double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(); }

/// Predicted growth X(m)^exponent of an exponential's multiplier norm, with
/// X = 1+m or, when log_corrected, X = (1+m) ln(1+m).
struct GrowthForm {
  double exponent = 1.0;
  bool log_corrected = false;

  double abscissa(int m) const { return log_corrected ? (1.0 + m) * std::log(1.0 + m) : 1.0 + m; }
  double predict(int m) const { return std::pow(abscissa(m), exponent); }
  std::string tag() const {
    std::ostringstream os;
    os << (log_corrected ? "[(1+m)ln(1+m)]^" : "(1+m)^") << exponent;
    return os.str();
  }
};

/// Growth of ||e^{i 2^m x_1}||_M in m for B^{0,b}_{p,inf}.
inline GrowthForm predicted_growth(const LpExponent &p, double b) {
  double threshold = 1.0;
  if (!p.is_inf() && p.value() > 1.0)
    threshold = p.value() <= 2.0 ? 1.0 / p.value() : 0.5;
  if (b > threshold)
    return {b, false};
  if (b == threshold)
    return {threshold, true};
  if (b >= -threshold)
    return {threshold, false};
  return {-b, false};
}

inline constexpr double exponent_tolerance = 0.15;
inline constexpr double spread_tolerance = 3.0;

/// Verdict of a growth sweep against a predicted form.
struct GrowthCheck {
  FitResult fit;
  double spread = 0.0;
  bool passed = false;
};

inline GrowthCheck check_growth(const std::vector<int> &ms, const std::vector<double> &values, const GrowthForm &form) {
  std::vector<double> xs, pred;
  for (int m : ms) {
    xs.push_back(form.abscissa(m));
    pred.push_back(form.predict(m));
  }
  GrowthCheck c;
  c.fit = fit_slope(xs, values);
  c.spread = ratio_spread(values, pred);
  c.passed = std::abs(c.fit.slope - form.exponent) <= exponent_tolerance && c.spread <= spread_tolerance;
  return c;
}

/// ||f||_inf + second + third sufficiency terms (p = 1) or the p = inf terms.
inline double criterion_sum(const SampledFunction &f, const DyadicPartition &P, const LpExponent &p, double b) {
  CriteriaContext ctx(f, P);
  return verdict(ctx, p, b).combined;
}

/// Packet family for f = e^{-i 2^m x_1}.
inline std::vector<FamilyMember> packet_family(const GridSpec &g, int m, double b, const std::vector<int> &cases) {
  std::vector<FamilyMember> family;
  const auto env = unit_envelope(g);
  for (int c : cases)
    family.push_back({"case" + std::to_string(c), make_modulated_packet(packet_case(m, c, b, env))});
  return family;
}

/// max over packet cases of ||f g|| / ||g|| in B^{0,b}_{p,inf} with f = e^{-i 2^m x_1}.
inline LowerBound packet_lower_bound(const DyadicPartition &P, int m, const LpExponent &p, double b,
                                     const std::vector<int> &cases = {1, 2, 3, 5}) {
  const GridSpec &g = P.grid();
  const auto f = make_exponential(g, {-(1L << m), 0});
  return multiplier_lower_bound(f, P, {0.0, b, p, LpExponent::inf()}, packet_family(g, m, b, cases));
}

/// sum_{l=0}^{top} (1+l)^{-b} S_l delta_0: dyadic kernels stacked at the origin.
inline SampledFunction make_kernel_stack(const DyadicPartition &P, int top, double b) {
  const GridSpec &g = P.grid();
  SampledFunction delta(g);
  const std::size_t mid = g.n() / 2;
  delta.values[g.dim == 1 ? mid : mid * g.n() + mid] = 1.0 / g.cell_volume();
  const auto D = decompose(delta, P);
  SampledFunction out(g);
  for (int l = 0; l <= std::min(top, P.k_max()); ++l)
    out += D[l] * std::pow(1.0 + l, -b);
  return out;
}

/// Test family used for exponential multipliers e^{i 2^m x_1}: stacked kernels
/// below level m-1, the conjugate exponential, and the exponential stack.
inline std::vector<FamilyMember> exponential_family(const DyadicPartition &P, int m, double b) {
  const GridSpec &g = P.grid();
  return {{"kernel-stack", make_kernel_stack(P, m - 2, b)},
          {"conjugate", make_exponential(g, {-(1L << m), 0})},
          {"exp-stack", make_exp_stack(g, std::min(m - 2, g.k_max() - 1), b)}};
}

// ---------------------------------------------------------------------------

inline ExperimentResult run_exp_growth(const ExperimentConfig &config) {
  config.validate();
  const DyadicPartition P(config.grid);
  ExperimentResult res{Table({"experiment", "tag", "p", "b", "m", "value", "prediction", "ratio", "fitted_exponent",
                              "expected_exponent", "r2", "spread", "pass"}),
                       {}};
  const auto ms = config.m_values();
  for (const auto &p : config.p_list)
    for (double b : config.b_list) {
      std::vector<double> values;
      const bool endpoint = p.is_inf() || p.value() == 1.0;
      for (int m : ms) {
        if (endpoint)
          values.push_back(criterion_sum(make_exponential(config.grid, {1L << m, 0}), P, p, b));
        else
          values.push_back(packet_lower_bound(P, m, p, b).value);
      }
      const auto form = predicted_growth(p, b);
      const auto check = check_growth(ms, values, form);
      for (std::size_t i = 0; i < ms.size(); ++i) {
        const double pred = form.predict(ms[i]);
        res.table.add({{"experiment", endpoint ? "criterion" : "lower-bound"},
                       {"tag", form.tag()},
                       {"p", p.str()},
                       {"b", b},
                       {"m", ms[i]},
                       {"value", num(values[i])},
                       {"prediction", num(pred)},
                       {"ratio", num(values[i] / pred)},
                       {"fitted_exponent", check.fit.slope},
                       {"expected_exponent", form.exponent},
                       {"r2", check.fit.r2},
                       {"spread", num(check.spread)},
                       {"pass", check.passed}});
      }
      std::ostringstream detail;
      detail << "slope " << check.fit.slope << " vs " << form.exponent << ", spread " << check.spread;
      res.assertions.push_back({"growth p=" + p.str() + " b=" + nlohmann::json(b).dump() + " " + form.tag(),
                                check.passed, detail.str()});
    }
  return res;
}

/// Per-level sup norms of the pieces of a function.
inline std::vector<double> piece_sup_norms(const SampledFunction &f, const DyadicPartition &P) {
  const auto D = decompose(f, P);
  std::vector<double> out;
  for (int k = 0; k <= D.k_max(); ++k)
    out.push_back(max_abs(D[k]));
  return out;
}

inline constexpr int charfun_first_level = 6;
inline constexpr double flat_slope_tolerance = 0.1;

struct CharfunConfig {
  ExperimentConfig base;
  IndicatorShape shape = IndicatorShape::Cube;
  double mollifier_width = 1.0 / 16.0;
};

inline ExperimentResult run_charfun(const CharfunConfig &config) {
  const GridSpec &g = config.base.grid;
  if (config.shape == IndicatorShape::Rectangle)
    throw ConfigError("charfun takes CUBE or HALFSPACE");
  const DyadicPartition P(g);
  const auto f = make_indicator(g, {config.shape});
  const auto smooth = make_mollified(f, config.mollifier_width);
  const auto sharp = piece_sup_norms(f, P);
  const auto soft = piece_sup_norms(smooth, P);
  ExperimentResult res{Table({"k", "sup_piece", "partial_sum", "weighted", "mollified_sup_piece"}), {}};
  double partial = 0.0;
  for (int k = 0; k <= P.k_max(); ++k) {
    partial += sharp[std::size_t(k)];
    res.table.add({{"k", k},
                   {"sup_piece", sharp[std::size_t(k)]},
                   {"partial_sum", partial},
                   {"weighted", (1.0 + k) * sharp[std::size_t(k)]},
                   {"mollified_sup_piece", soft[std::size_t(k)]}});
  }
  std::vector<double> ks, flat, decay;
  double floor_value = INFINITY;
  for (int k = charfun_first_level; k <= P.k_max(); ++k) {
    ks.push_back(k);
    flat.push_back(sharp[std::size_t(k)]);
    decay.push_back(std::max(soft[std::size_t(k)], 1e-300));
    floor_value = std::min(floor_value, sharp[std::size_t(k)]);
  }
  const auto fit_flat = fit_slope(ks, flat, FitScale::SemiLog2);
  std::ostringstream d1;
  d1 << "log2 slope " << fit_flat.slope << ", inf over levels " << floor_value;
  res.assertions.push_back({"no decay of sup norms", std::abs(fit_flat.slope) <= flat_slope_tolerance && floor_value > 0.0,
                            d1.str()});
  // Partial sums grow at least linearly: the mean increment stays at the floor value.
  const double growth = (partial - [&] {
    double s = 0.0;
    for (int k = 0; k < charfun_first_level; ++k)
      s += sharp[std::size_t(k)];
    return s;
  }()) / double(P.k_max() - charfun_first_level + 1);
  std::ostringstream d2;
  d2 << "mean increment " << growth;
  res.assertions.push_back({"linear growth of partial sums", growth >= floor_value && floor_value > 0.0, d2.str()});
  const auto fit_soft = fit_slope(ks, decay, FitScale::SemiLog2);
  bool monotone = true;
  for (std::size_t i = 1; i < decay.size(); ++i)
    monotone = monotone && (decay[i] < decay[i - 1] || decay[i] < 1e-14);
  std::ostringstream d3;
  d3 << "mollified log2 slope " << fit_soft.slope;
  res.assertions.push_back({"mollified contrast decays", fit_soft.slope < -0.5 && monotone, d3.str()});
  return res;
}

/// Lower bound against sufficiency for exponentials, plus smooth and constant rows.
inline ExperimentResult run_sandwich(const ExperimentConfig &config) {
  config.validate();
  const GridSpec &g = config.grid;
  const DyadicPartition P(g);
  ExperimentResult res{Table({"function", "p", "b", "m", "lower_bound", "argmax", "sufficiency", "necessity", "ratio",
                              "verdict", "dini", "diffspace"}),
                       {}};
  const auto ms = config.m_values();
  const LpExponent one(1.0);
  for (double b : config.b_list) {
    std::vector<double> lower, upper;
    for (int m : ms) {
      const auto f = make_exponential(g, {1L << m, 0});
      const auto lb = multiplier_lower_bound(f, P, {0.0, b, one, LpExponent::inf()}, exponential_family(P, m, b));
      CriteriaContext ctx(f, P);
      const auto rep = verdict(ctx, one, b);
      lower.push_back(lb.value);
      upper.push_back(rep.combined);
      res.table.add({{"function", "exp:m=" + std::to_string(m)},
                     {"p", "1"},
                     {"b", b},
                     {"m", m},
                     {"lower_bound", lb.value},
                     {"argmax", lb.argmax},
                     {"sufficiency", rep.combined},
                     {"necessity", rep.necessity},
                     {"ratio", rep.combined / lb.value},
                     {"verdict", to_string(rep.verdict)},
                     {"dini", nullptr},
                     {"diffspace", nullptr}});
    }
    std::vector<double> xs;
    for (int m : ms)
      xs.push_back(1.0 + m);
    const auto fl = fit_slope(xs, lower), fu = fit_slope(xs, upper);
    std::ostringstream d;
    d << "lower slope " << fl.slope << ", sufficiency slope " << fu.slope;
    res.assertions.push_back({"matching exponents b=" + nlohmann::json(b).dump(),
                              std::abs(fl.slope - fu.slope) <= exponent_tolerance, d.str()});
    double rmin = INFINITY, rmax = 0.0;
    for (std::size_t i = 0; i < lower.size(); ++i) {
      rmin = std::min(rmin, upper[i] / lower[i]);
      rmax = std::max(rmax, upper[i] / lower[i]);
    }
    std::ostringstream d2;
    d2 << "sufficiency/lower in [" << rmin << ", " << rmax << "]";
    res.assertions.push_back({"bounded sandwich b=" + nlohmann::json(b).dump(), rmin > 0.0 && rmax / rmin <= spread_tolerance,
                              d2.str()});
  }
  // Dini-regular smooth function at p = inf, b = 1/2.
  {
    const auto f = make_mollified(make_indicator(g, {IndicatorShape::Cube}), 0.5);
    CriteriaContext ctx(f, P);
    const auto rep = verdict(ctx, LpExponent::inf(), 0.5);
    const auto dini = dini_norm(f);
    const auto diff = diffspace_norm(f, {0.0, 0.5, 0.0, LpExponent::inf(), LpExponent::inf(), 1});
    res.table.add({{"function", "mollified-cube:w=0.5"},
                   {"p", "inf"},
                   {"b", 0.5},
                   {"m", nullptr},
                   {"lower_bound", nullptr},
                   {"argmax", ""},
                   {"sufficiency", rep.combined},
                   {"necessity", rep.necessity},
                   {"ratio", nullptr},
                   {"verdict", to_string(rep.verdict)},
                   {"dini", dini.value},
                   {"diffspace", diff.value}});
    res.assertions.push_back({"Dini-regular function is a multiplier", rep.verdict == Verdict::Multiplier &&
                                                                          std::isfinite(rep.combined) && !dini.tail.divergent,
                              "combined " + std::to_string(rep.combined)});
  }
  // Constant function.
  {
    const auto f = sample(g, [](const Point &) { return 1.0; });
    const auto lb = multiplier_lower_bound(f, P, {0.0, 0.0, one, LpExponent::inf()}, exponential_family(P, config.m_lo, 0.0));
    CriteriaContext ctx(f, P);
    const auto rep = verdict(ctx, one, 0.0);
    res.table.add({{"function", "const"},
                   {"p", "1"},
                   {"b", 0.0},
                   {"m", nullptr},
                   {"lower_bound", lb.value},
                   {"argmax", lb.argmax},
                   {"sufficiency", rep.combined},
                   {"necessity", rep.necessity},
                   {"ratio", rep.combined / lb.value},
                   {"verdict", to_string(rep.verdict)},
                   {"dini", dini_norm(f).value},
                   {"diffspace", nullptr}});
    res.assertions.push_back({"constant function rows agree", std::abs(lb.value - 1.0) < 1e-10 && rep.combined <= 3.0,
                              "lower " + std::to_string(lb.value) + ", sufficiency " + std::to_string(rep.combined)});
  }
  return res;
}

} // namespace logbesov
