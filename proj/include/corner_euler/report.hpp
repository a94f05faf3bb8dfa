#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace corner_euler {

/// Outcome of one numerical certification. For inequality checks
/// max_ratio is the worst LHS/RHS seen and fitted_constant the smallest
/// constant that makes every sample hold. For exponent checks slope and
/// r_squared come from a log-log least-squares fit and fitted_constant is
/// exp(intercept).
struct FitReport {
  std::string name;
  std::size_t n_samples = 0;
  double max_ratio = 0.0;
  double fitted_constant = 0.0;
  std::optional<double> slope;
  std::optional<double> r_squared;
  bool pass = false;
  double threshold = 0.0;
  std::optional<double> expected_slope;
  std::vector<std::pair<std::string, double>> details;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. Needs two distinct x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Pretty-printed JSON object with the report fields.
std::string to_json(const FitReport& r);

/// One-line human summary.
std::string summary(const FitReport& r);

}  // namespace corner_euler
