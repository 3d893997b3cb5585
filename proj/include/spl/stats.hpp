#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace spl::stats {

/// Linear-interpolated quantile (type 7), q in [0, 1]. NaN for empty input.
inline double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return xs[lo] + (xs[hi] - xs[lo]) * frac;
}

inline double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

inline double iqr(const std::vector<double>& xs) { return quantile(xs, 0.75) - quantile(xs, 0.25); }

inline double mean(const std::vector<double>& xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

/// Standard error of the mean (sample standard deviation / sqrt(n)).
inline double standard_error(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1)) / std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace spl::stats
