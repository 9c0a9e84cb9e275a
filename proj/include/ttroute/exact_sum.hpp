#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace ttroute {

/// Correctly rounded sum of doubles (Shewchuk's non-overlapping partials).
/// Averages computed from it do not depend on summation order, so a
/// repeated schedule of identical costs averages to the same bits whatever
/// its length.
inline double exact_sum(std::span<const double> values) {
  std::vector<double> partials;
  for (double x : values) {
    std::size_t i = 0;
    for (double y : partials) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials[i++] = lo;
      x = hi;
    }
    partials.resize(i);
    partials.push_back(x);
  }
  if (partials.empty()) return 0.0;
  // Round the partials to nearest, handling the half-way case.
  std::size_t n = partials.size();
  double hi = partials[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials[--n];
    hi = x + y;
    const double yr = hi - x;
    lo = y - yr;
    if (lo != 0.0) break;
  }
  if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

/// Mean with one residual correction, so a list and any number of copies of
/// it give the same result (up to astronomically rare near-ties).
inline double exact_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double n = static_cast<double>(values.size());
  const double q = exact_sum(values) / n;
  std::vector<double> terms(values.begin(), values.end());
  const double hi = q * n;
  terms.push_back(-hi);
  terms.push_back(-std::fma(q, n, -hi));
  return q + exact_sum(terms) / n;
}

}  // namespace ttroute
