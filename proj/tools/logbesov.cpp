#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "logbesov/criteria.hpp"
#include "logbesov/experiments.hpp"
#include "logbesov/gallery_spec.hpp"
#include "logbesov/io.hpp"

using namespace logbesov;
using ojson = nlohmann::ordered_json;

namespace {

struct Globals {
  std::string grid = "J=14";
  std::string out;
  std::string format = "csv";
  std::string input;
  std::string function;
  std::string kind = "radial";
};

/// "J=14" or "J=10,dim=2".
GridSpec parse_grid(const std::string &text) {
  const auto s = SpecString::parse("grid:" + text);
  s.allow({"J", "dim"});
  return GridSpec(s.integer("dim", 1), s.integer("J", 14));
}

std::vector<double> parse_numbers(const std::string &text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(std::stod(item));
  if (out.empty())
    throw ConfigError("empty number list");
  return out;
}

std::vector<LpExponent> parse_exponents(const std::string &text) {
  std::vector<LpExponent> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(LpExponent::parse(item));
  if (out.empty())
    throw ConfigError("empty exponent list");
  return out;
}

SampledFunction load_function(const Globals &g, const GridSpec &grid) {
  if (!g.input.empty()) {
    auto f = io::load_sfn(g.input);
    if (!(f.grid == grid))
      throw InputError("input grid does not match --grid");
    return f;
  }
  if (g.function.empty())
    throw ConfigError("need --f or --input");
  return gallery_function(grid, g.function);
}

void emit(const Globals &g, const std::string &verb, const ExperimentResult &res) {
  const std::string body = g.format == "json" ? res.table.json().dump(2) + "\n" : res.table.csv();
  if (g.out.empty()) {
    std::cout << body;
  } else {
    std::filesystem::create_directories(g.out);
    const auto path = std::filesystem::path(g.out) / (verb + "." + g.format);
    std::ofstream os(path);
    if (!os)
      throw InputError("cannot write " + path.string());
    os << body;
  }
  for (const auto &a : res.assertions)
    std::cerr << (a.passed ? "PASS " : "FAIL ") << a.name << ": " << a.detail << "\n";
}

ExperimentResult partition_check(const GridSpec &grid, PartitionKind kind, const std::string &export_path) {
  const DyadicPartition P(grid, kind);
  const double residual = partition_residual(P), leakage = annulus_leakage(P);
  ExperimentResult res{Table({"kind", "dim", "J", "k_max", "residual", "leakage"}), {}};
  res.table.add({{"kind", to_string(kind)},
                 {"dim", grid.dim},
                 {"J", grid.log2_samples},
                 {"k_max", grid.k_max()},
                 {"residual", residual},
                 {"leakage", leakage}});
  res.assertions.push_back({"partition sums telescope", residual < 1e-12, std::to_string(residual)});
  res.assertions.push_back({"annulus support", leakage < 1e-10, std::to_string(leakage)});
  if (!export_path.empty()) {
    std::ofstream os(export_path, std::ios::binary);
    if (!os)
      throw InputError("cannot write " + export_path);
    io::write_dpu(os, P);
  }
  return res;
}

ExperimentResult criteria_report(const SampledFunction &f, const DyadicPartition &P, const std::vector<LpExponent> &ps,
                                 const std::vector<double> &bs) {
  ExperimentResult res{Table({"p", "b", "sup", "term2", "term3", "combined", "nece2", "nece3", "necessity",
                              "suff_divergent", "nece_divergent", "verdict"}),
                       {}};
  CriteriaContext ctx(f, P);
  for (const auto &p : ps)
    for (double b : bs) {
      const auto r = verdict(ctx, p, b);
      res.table.add({{"p", p.str()},
                     {"b", b},
                     {"sup", r.term_linf},
                     {"term2", num(r.term2.value)},
                     {"term3", num(r.term3.value)},
                     {"combined", num(r.combined)},
                     {"nece2", num(r.nece2.value)},
                     {"nece3", num(r.nece3.value)},
                     {"necessity", num(r.necessity)},
                     {"suff_divergent", r.term2.tail.divergent || r.term3.tail.divergent},
                     {"nece_divergent", r.nece2.tail.divergent || r.nece3.tail.divergent},
                     {"verdict", to_string(r.verdict)}});
    }
  return res;
}

ExperimentResult norm_report(const SampledFunction &f, const DyadicPartition &P, const std::string &space, double s,
                             double b, const LpExponent &p, const LpExponent &q, int order) {
  NormResult r;
  if (space == "besov")
    r = besov_norm(f, P, {s, b, p, q});
  else if (space == "tl")
    r = tl_norm_inf(f, P, s, b, q);
  else if (space == "diff")
    r = diffspace_norm(f, {s, b, 0.0, p, q, order});
  else if (space == "dini")
    r = dini_norm(f);
  else
    throw ConfigError("unknown space '" + space + "'");
  ExperimentResult res{Table({"space", "s", "b", "p", "q", "value", "tail", "tail_ratio", "divergent", "band_excess",
                              "per_level"}),
                       {}};
  std::ostringstream levels;
  for (std::size_t i = 0; i < r.per_level.size(); ++i)
    levels << (i ? ";" : "") << r.per_level[i];
  res.table.add({{"space", space},
                 {"s", s},
                 {"b", b},
                 {"p", p.str()},
                 {"q", q.str()},
                 {"value", num(r.value)},
                 {"tail", num(r.tail.estimate)},
                 {"tail_ratio", num(r.tail.ratio)},
                 {"divergent", r.tail.divergent},
                 {"band_excess", r.band_excess},
                 {"per_level", levels.str()}});
  return res;
}

/// Family items separated by ';': "packets:cases=1-5[,m=..]", "exponential:m=..", or gallery specifications.
std::vector<FamilyMember> parse_family(const GridSpec &grid, const DyadicPartition &P, const std::string &text,
                                       const std::string &function, double b) {
  int default_m = -1;
  if (!function.empty()) {
    const auto fs = SpecString::parse(function);
    if (fs.name == "exp" && fs.has("m"))
      default_m = fs.integer("m");
  }
  std::vector<FamilyMember> family;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto s = SpecString::parse(item);
    if (s.name == "packets") {
      s.allow({"cases", "m"});
      const int m = s.integer("m", default_m);
      if (m < 0)
        throw ConfigError("packets family needs m= or --f exp:m=..");
      for (auto &mem : packet_family(grid, m, b, parse_int_list(s.has("cases") ? s.args.at("cases") : "1-5")))
        family.push_back(std::move(mem));
    } else if (s.name == "exponential") {
      s.allow({"m"});
      const int m = s.integer("m", default_m);
      if (m < 0)
        throw ConfigError("exponential family needs m= or --f exp:m=..");
      for (auto &mem : exponential_family(P, m, b))
        family.push_back(std::move(mem));
    } else {
      family.push_back({item, gallery_function(grid, item)});
    }
  }
  return family;
}

std::pair<int, int> parse_range(const std::string &text) {
  const auto v = parse_int_list(text);
  if (v.empty())
    throw ConfigError("empty range");
  return {v.front(), v.back()};
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Logarithmic Besov multiplier toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--grid", g.grid, "grid as J=14 or J=10,dim=2");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--kind", g.kind, "radial or tensor partition");

  std::string bs = "0", ps = "1", qs = "inf", space = "besov", family = "packets:cases=1-5", export_path,
              shape = "cube", mrange = "3-10", growth_bs = "-2,-1,0,0.5,1,2";
  double s = 0.0, width = default_mollifier_width;
  int order = 1;
  std::uint64_t seed = 1;

  auto add_function = [&](CLI::App *c) {
    c->add_option("--f", g.function, "gallery function");
    c->add_option("--input", g.input, ".sfn input file");
  };

  auto *pc = app.add_subcommand("partition-check", "verify the partition of unity");
  pc->add_option("--export", export_path, "write the symbols as .dpu");

  auto *nm = app.add_subcommand("norm", "evaluate a norm");
  add_function(nm);
  nm->add_option("--space", space, "besov, tl, diff or dini");
  nm->add_option("--s", s);
  nm->add_option("--b", bs);
  nm->add_option("--p", ps);
  nm->add_option("--q", qs);
  nm->add_option("--order", order, "modulus order");

  auto *cr = app.add_subcommand("criteria", "multiplier criteria and verdict");
  add_function(cr);
  cr->add_option("--p", ps, "comma-separated exponents");
  cr->add_option("--b", bs, "comma-separated log exponents");

  auto *lb = app.add_subcommand("lowerbound", "test-function lower bound");
  add_function(lb);
  lb->add_option("--family", family, "';'-separated family items");
  lb->add_option("--p", ps);
  lb->add_option("--b", bs);

  auto *eg = app.add_subcommand("exp-growth", "growth of exponential multipliers");
  eg->add_option("--b", growth_bs, "comma-separated log exponents");
  eg->add_option("--p", ps);
  eg->add_option("--m", mrange, "m range a-b");

  auto *cf = app.add_subcommand("charfun", "dyadic pieces of characteristic functions");
  cf->add_option("--shape", shape)->check(CLI::IsMember({"cube", "halfspace"}));
  cf->add_option("--width", width, "mollifier width of the contrast row");

  auto *sw = app.add_subcommand("sandwich", "lower bound against sufficiency");
  sw->add_option("--b", bs);
  sw->add_option("--m", mrange, "m range a-b");
  sw->add_option("--seed", seed);

  CLI11_PARSE(app, argc, argv);

  try {
    const GridSpec grid = parse_grid(g.grid);
    const PartitionKind kind = parse_partition_kind(g.kind);
    const auto b_list = parse_numbers(*eg ? growth_bs : bs);
    const auto p_list = parse_exponents(ps);
    ExperimentResult res{Table({}), {}};
    std::string verb;
    if (*pc) {
      verb = "partition-check";
      res = partition_check(grid, kind, export_path);
    } else if (*nm) {
      verb = "norm";
      const DyadicPartition P(grid, kind);
      res = norm_report(load_function(g, grid), P, space, s, b_list.front(), p_list.front(), LpExponent::parse(qs),
                        order);
    } else if (*cr) {
      verb = "criteria";
      const DyadicPartition P(grid, kind);
      res = criteria_report(load_function(g, grid), P, p_list, b_list);
    } else if (*lb) {
      verb = "lowerbound";
      const DyadicPartition P(grid, kind);
      const auto f = load_function(g, grid);
      res = ExperimentResult{Table({"p", "b", "lower_bound", "argmax", "ratios"}), {}};
      for (const auto &p : p_list)
        for (double b : b_list) {
          const auto r = multiplier_lower_bound(f, P, {0.0, b, p, LpExponent::inf()},
                                                parse_family(grid, P, family, g.function, b));
          std::ostringstream ratios;
          for (std::size_t i = 0; i < r.ratios.size(); ++i)
            ratios << (i ? ";" : "") << r.ratios[i];
          res.table.add({{"p", p.str()}, {"b", b}, {"lower_bound", r.value}, {"argmax", r.argmax}, {"ratios", ratios.str()}});
        }
    } else if (*eg || *sw) {
      ExperimentConfig config;
      config.grid = grid;
      config.b_list = b_list;
      config.p_list = p_list;
      std::tie(config.m_lo, config.m_hi) = parse_range(mrange);
      config.seed = seed;
      config.out = g.out;
      config.name = *eg ? "exp-growth" : "sandwich";
      verb = config.name;
      res = *eg ? run_exp_growth(config) : run_sandwich(config);
    } else if (*cf) {
      verb = "charfun";
      CharfunConfig config;
      config.base.grid = grid;
      config.base.name = verb;
      config.shape = shape == "cube" ? IndicatorShape::Cube : IndicatorShape::Halfspace;
      config.mollifier_width = width;
      res = run_charfun(config);
    }
    emit(g, verb, res);
    return res.passed() ? 0 : 1;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
