#pragma once

#include <cmath>
#include <vector>

#include "logbesov/errors.hpp"

namespace logbesov {

enum class FitScale {
  LogLog,     ///< log y against log x
  LogLogLog,  ///< log y against log log x
  SemiLog2,   ///< log2 y against x
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
};

/// Ordinary least squares on transformed coordinates.
inline FitResult fit_slope(const std::vector<double> &xs, const std::vector<double> &ys,
                           FitScale scale = FitScale::LogLog) {
  if (xs.size() != ys.size())
    throw ConfigError("fit needs equally many x and y values");
  if (xs.size() < 4)
    throw ConfigError("fit needs at least 4 points");
  std::vector<double> u, v;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(ys[i] > 0.0))
      throw InputError("fit needs positive values");
    switch (scale) {
    case FitScale::LogLog:
      if (!(xs[i] > 0.0))
        throw InputError("fit needs positive abscissae");
      u.push_back(std::log(xs[i]));
      v.push_back(std::log(ys[i]));
      break;
    case FitScale::LogLogLog:
      if (!(xs[i] > 1.0))
        throw InputError("log-loglog fit needs abscissae above 1");
      u.push_back(std::log(std::log(xs[i])));
      v.push_back(std::log(ys[i]));
      break;
    case FitScale::SemiLog2:
      u.push_back(xs[i]);
      v.push_back(std::log2(ys[i]));
      break;
    }
  }
  const double n = double(u.size());
  double mu = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    mu += u[i];
    mv += v[i];
  }
  mu /= n;
  mv /= n;
  double suu = 0.0, suv = 0.0, svv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suv += (u[i] - mu) * (v[i] - mv);
    svv += (v[i] - mv) * (v[i] - mv);
  }
  if (!(suu > 0.0))
    throw InputError("fit needs distinct abscissae");
  FitResult r;
  r.slope = suv / suu;
  r.intercept = mv - r.slope * mu;
  double sse = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double e = v[i] - (r.intercept + r.slope * u[i]);
    sse += e * e;
  }
  r.r2 = svv > 0.0 ? 1.0 - sse / svv : 1.0;
  return r;
}

/// max/min of the ratios ys/prediction.
inline double ratio_spread(const std::vector<double> &ys, const std::vector<double> &prediction) {
  double lo = INFINITY, hi = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double r = ys[i] / prediction[i];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return lo > 0.0 ? hi / lo : INFINITY;
}

} // namespace logbesov
