#pragma once

#include <cmath>
#include <vector>

namespace fockdens {

/// A Monte Carlo (or quadrature) value with its standard error.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Mean of independent batch estimates and the standard error of that mean.
inline Estimate batch_mean(const std::vector<double>& batches) {
  Estimate e;
  const auto k = static_cast<double>(batches.size());
  if (batches.empty()) return e;
  double s = 0.0;
  for (double b : batches) s += b;
  e.value = s / k;
  if (batches.size() > 1) {
    double ss = 0.0;
    for (double b : batches) ss += (b - e.value) * (b - e.value);
    e.std_error = std::sqrt(ss / (k - 1.0) / k);
  }
  return e;
}

inline double combined_sigma(double a, double b) { return std::sqrt(a * a + b * b); }

}  // namespace fockdens
