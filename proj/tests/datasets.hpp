#pragma once

#include <cmath>
#include <vector>

#include "latfit/lattice.hpp"

namespace latfit::testdata {

inline std::vector<double> six_reals() {
  return {0.814258, 1.294837, 2.237840, 2.764132, 4.295116, 7.733842};
}

inline std::vector<double> sqrt_primes() {
  return {0.0, std::sqrt(3.0), std::sqrt(5.0), std::sqrt(7.0), std::sqrt(11.0),
          std::sqrt(13.0)};
}

// x from six_reals, y from sqrt_primes.
inline PointSet paired_points() {
  const auto x = six_reals();
  const auto y = sqrt_primes();
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < x.size(); ++i) rows.push_back({x[i], y[i]});
  return PointSet::from_rows(rows);
}

// Same x, y permuted.
inline PointSet permuted_points() {
  const auto x = six_reals();
  const std::vector<double> y{std::sqrt(5.0), 0.0, std::sqrt(13.0),
                              std::sqrt(3.0), std::sqrt(11.0), std::sqrt(7.0)};
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < x.size(); ++i) rows.push_back({x[i], y[i]});
  return PointSet::from_rows(rows);
}

// Integer combinations of (lg 3, lg 7) and (lg 5, lg 8), seven decimals.
inline PointSet log_points() {
  return PointSet::from_rows({{0.0, 0.0},
                              {72.6836917, 103.2838586},
                              {41.2087354, 66.9615022},
                              {44.7461978, 62.8435663},
                              {51.1493167, 78.2045256},
                              {10.8279763, 11.4749913}});
}

}  // namespace latfit::testdata
