#pragma once

#include <functional>
#include <span>

namespace topoloc {

double mean(std::span<const double> values);

/// Jackknife standard error of `estimator` applied to the sample.
/// Returns 0 for fewer than two values.
double jackknife_standard_error(std::span<const double> values,
                                const std::function<double(std::span<const double>)>& estimator);

/// Jackknife standard error of the sample mean (equals s / sqrt(n)).
double jackknife_standard_error(std::span<const double> values);

}  // namespace topoloc
