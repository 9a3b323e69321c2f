#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include <json.hpp>

#include "logbesov/partition.hpp"

namespace logbesov {
namespace io {

// Layout shared by .sfn and .dpu: one line of JSON terminated by '\n',
// followed by raw little-endian float64 data.

namespace detail {

inline void put_f64(std::ostream &os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  if constexpr (std::endian::native == std::endian::big)
    bits = __builtin_bswap64(bits);
  os.write(reinterpret_cast<const char *>(&bits), sizeof bits);
}

inline double get_f64(std::istream &is) {
  std::uint64_t bits = 0;
  if (!is.read(reinterpret_cast<char *>(&bits), sizeof bits))
    throw InputError("truncated binary payload");
  if constexpr (std::endian::native == std::endian::big)
    bits = __builtin_bswap64(bits);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

inline nlohmann::json read_header(std::istream &is) {
  std::string line;
  if (!std::getline(is, line))
    throw InputError("missing header line");
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("bad header: ") + e.what());
  }
}

inline GridSpec grid_from(const nlohmann::json &h) {
  if (!h.contains("dim") || !h.contains("J"))
    throw InputError("header lacks dim or J");
  return GridSpec(h.at("dim").get<int>(), h.at("J").get<int>());
}

} // namespace detail

inline void write_sfn(std::ostream &os, const SampledFunction &f) {
  nlohmann::json h{{"dim", f.grid.dim}, {"J", f.grid.log2_samples}};
  os << h.dump() << '\n';
  for (const auto &v : f.values) {
    detail::put_f64(os, v.real());
    detail::put_f64(os, v.imag());
  }
}

inline SampledFunction read_sfn(std::istream &is) {
  const auto h = detail::read_header(is);
  SampledFunction f(detail::grid_from(h));
  for (auto &v : f.values) {
    const double re = detail::get_f64(is);
    const double im = detail::get_f64(is);
    v = {re, im};
  }
  require_finite(f);
  return f;
}

inline void save_sfn(const std::string &path, const SampledFunction &f) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw InputError("cannot open '" + path + "' for writing");
  write_sfn(os, f);
}

inline SampledFunction load_sfn(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw InputError("cannot open '" + path + "'");
  return read_sfn(is);
}

inline void write_dpu(std::ostream &os, const DyadicPartition &P) {
  nlohmann::json h{{"kind", to_string(P.kind())},
                   {"J", P.grid().log2_samples},
                   {"dim", P.grid().dim},
                   {"K_max", P.k_max()}};
  os << h.dump() << '\n';
  for (int k = 0; k <= P.k_max(); ++k)
    for (double v : P.symbol(k))
      detail::put_f64(os, v);
}

/// Reads a partition export; returns the header and the raw symbol arrays.
struct PartitionExport {
  GridSpec grid;
  PartitionKind kind;
  std::vector<std::vector<double>> symbols;
};

inline PartitionExport read_dpu(std::istream &is) {
  const auto h = detail::read_header(is);
  PartitionExport out{GridSpec(h.value("dim", 1), h.at("J").get<int>()),
                      parse_partition_kind(h.at("kind").get<std::string>()),
                      {}};
  const int kmax = h.at("K_max").get<int>();
  if (kmax != out.grid.k_max())
    throw InputError("K_max does not match J");
  out.symbols.assign(std::size_t(kmax + 1), std::vector<double>(out.grid.size()));
  for (auto &s : out.symbols)
    for (auto &v : s)
      v = detail::get_f64(is);
  return out;
}

} // namespace io
} // namespace logbesov
