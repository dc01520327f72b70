#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace walkrange {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased, 0 when count < 2
  double stderr_ = 0.0;
  std::int64_t count = 0;
};

// Two-pass compensated moments, consuming values in the given order.
Moments moments(const std::vector<double>& xs);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;  // 0 with fewer than three points
  double intercept_se = 0.0;
  double residual = 0.0;  // Euclidean norm of residuals
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

struct FitResult {
  double index = 0.0;
  double uncertainty = 0.0;  // max(slope SE, shift of the second-half refit)
  double intercept = 0.0;
  double residual = 0.0;
  double n_min = 0.0;
  double n_max = 0.0;
  std::size_t points = 0;
};

// Slope of log(value) against log(n). Needs at least five points with
// positive n and value.
FitResult regular_variation_fit(const std::vector<std::pair<double, double>>& series);

double median(std::vector<double> xs);

}  // namespace walkrange
