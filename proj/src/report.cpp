#include "corner_euler/report.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace corner_euler {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("linear_fit: need two or more paired samples");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: x values are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

namespace {

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

nlohmann::json number_or_null(const std::optional<double>& v) {
  return v ? number_or_null(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string to_json(const FitReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["n_samples"] = r.n_samples;
  j["max_ratio"] = number_or_null(r.max_ratio);
  j["fitted_constant"] = number_or_null(r.fitted_constant);
  j["slope"] = number_or_null(r.slope);
  j["r_squared"] = number_or_null(r.r_squared);
  j["pass"] = r.pass;
  j["threshold"] = number_or_null(r.threshold);
  if (r.expected_slope) j["expected_slope"] = *r.expected_slope;
  if (!r.details.empty()) {
    nlohmann::ordered_json d = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.details) d[k] = number_or_null(v);
    j["details"] = d;
  }
  return j.dump(2);
}

std::string summary(const FitReport& r) {
  std::ostringstream s;
  s.precision(6);
  s << (r.pass ? "PASS " : "FAIL ") << r.name << " n=" << r.n_samples;
  if (r.slope) {
    s << " slope=" << *r.slope;
    if (r.expected_slope) s << " (expected " << *r.expected_slope << " +/- " << r.threshold << ")";
  } else {
    s << " max_ratio=" << r.max_ratio << " C=" << r.fitted_constant << " threshold=" << r.threshold;
  }
  return s.str();
}

}  // namespace corner_euler
