#include "topoloc/stats.hpp"

#include <cmath>
#include <numeric>
#include <vector>

namespace topoloc {

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double jackknife_standard_error(std::span<const double> values,
                                const std::function<double(std::span<const double>)>& estimator) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  std::vector<double> held(n - 1);
  std::vector<double> replicas(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t w = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k != i) held[w++] = values[k];
    }
    replicas[i] = estimator(held);
  }
  const double centre = mean(replicas);
  double ss = 0.0;
  for (const double r : replicas) ss += (r - centre) * (r - centre);
  return std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n) * ss);
}

double jackknife_standard_error(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  // Closed form of the leave-one-out variance for the mean.
  const double m = mean(values);
  double ss = 0.0;
  for (const double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

}  // namespace topoloc
