#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace nsaos {

/// Accumulated relative to the first value, so equal inputs give that value exactly.
inline double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  const double x0 = xs.front();
  double d = 0.0;
  for (double x : xs) d += x - x0;
  return x0 + d / static_cast<double>(xs.size());
}

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
inline double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

/// Mean of the k largest values.
inline double top_k_mean(std::span<const double> xs, std::size_t k) {
  if (k == 0 || k > xs.size()) throw std::invalid_argument("top_k_mean: need 1 <= k <= size");
  std::vector<double> v(xs.begin(), xs.end());
  std::partial_sort(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end(),
                    std::greater<>());
  // Sorted order, so the result does not depend on input order.
  return mean(std::span<const double>(v.data(), k));
}

}  // namespace nsaos
