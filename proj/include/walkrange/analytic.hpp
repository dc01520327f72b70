#pragma once

#include <string>
#include <vector>

#include "walkrange/group.hpp"
#include "walkrange/quadrature.hpp"
#include "walkrange/step_law.hpp"

namespace walkrange {

struct AnalyticResult {
  double value = 0.0;
  double error = 0.0;
  std::string method;  // quadrature | closed-form | series | convolution
};

// G(g) = sum_n P(S_n = g) for transient Z^d laws.
AnalyticResult green(const StepLaw& law, const ZdPoint& g, const QuadratureSettings& s = {});
std::vector<AnalyticResult> green_batch(const StepLaw& law, const std::vector<ZdPoint>& gs,
                                        const QuadratureSettings& s = {});
// Fourier path even where a closed form exists.
std::vector<AnalyticResult> green_quadrature(const StepLaw& law, const std::vector<ZdPoint>& gs,
                                             const QuadratureSettings& s = {});

// a(j) = sum_n [P^0(S_n = 0) - P^j(S_n = 0)] for recurrent Z^d laws.
AnalyticResult potential_kernel(const StepLaw& law, const ZdPoint& j, const QuadratureSettings& s = {});
std::vector<AnalyticResult> potential_kernel_batch(const StepLaw& law, const std::vector<ZdPoint>& js,
                                                   const QuadratureSettings& s = {});

// Limits g_W(x) = lim P^x(S_k not in W, k <= n) / P^0(S_k != 0, k <= n) for
// W = {0, j} at x = j and x = 0; they sum to one.
struct TabooPair {
  AnalyticResult at_j;
  AnalyticResult at_zero;
};
TabooPair two_point_taboo(const StepLaw& law, const ZdPoint& j, const QuadratureSettings& s = {});

// gamma with P(S_k != 0, 1 <= k <= n) ~ gamma / log n, as the reciprocal
// slope of sum_{j <= n} P(S_j = 0) against log n.
AnalyticResult gamma_constant(const StepLaw& law, const QuadratureSettings& s = {});

// Partial sums U(n) = sum_{j=0}^n P(S_j = 0) at the given n.
std::vector<double> return_partial_sums(const StepLaw& law, const std::vector<std::int64_t>& ns,
                                        const QuadratureSettings& s = {});

// c_j: avoidance of {0, j}; d_j: avoidance of {j}; both times 1 / log n.
struct HittingConstants {
  AnalyticResult c;
  AnalyticResult d;
};
HittingConstants hitting_constants(const StepLaw& law, const ZdPoint& j, const QuadratureSettings& s = {});

// q = 1 / G(0) for g = id, q(g) = 1 - G(g) / G(0) otherwise.
AnalyticResult escape_from_green(const StepLaw& law, const ZdPoint& g, const QuadratureSettings& s = {});

}  // namespace walkrange
