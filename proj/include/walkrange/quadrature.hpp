#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace walkrange {

struct QuadratureSettings {
  // torus points per axis on the first pass; 0 picks 1024, 128, 32 for d = 1, 2, 3
  int grid = 0;
  // radius of the ball around t = 0 replaced by the leading-order model
  double epsilon = 1e-3;
  // stop once successive passes agree to this relative level
  double tolerance = 1e-9;
  // refinement passes after the first; each doubles the resolution and halves epsilon
  int passes = 2;
  // gamma constant: dyadic fit grid 2^min .. 2^max (0 picks per method)
  int gamma_log2_min = 0;
  int gamma_log2_max = 0;
  // convolution window: l-infinity radius window_sigmas * sqrt(n * max(1, largest second moment));
  // abort once more mass than max_lost_mass leaves it
  double window_sigmas = 6.0;
  double max_lost_mass = 1e-9;
};

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussRule& gauss_legendre(int order);

// A function on [-pi, pi]^d, smooth and periodic away from t = 0, with
// f(r w) ~ r^degree M(w) as r -> 0 (degree > -d).
struct SingularIntegrand {
  int dim = 1;
  std::size_t outputs = 1;
  double degree = 0.0;
  // largest frequency |g| of oscillating factors, used to size the grids
  double frequency = 0.0;
  std::function<void(const double* t, double* out)> eval;
};

struct QuadratureOutcome {
  std::vector<double> value;  // (2 pi)^-d times the integral
  std::vector<double> error;  // difference between the last two passes
  int passes = 0;
};

// Smooth partition of unity: the torus part f (1 - w) uses a midpoint grid,
// the ball part f w uses polar coordinates with a graded radial rule, and the
// ball |t| < epsilon is replaced by the homogeneous model.
QuadratureOutcome torus_average(const SingularIntegrand& f, const QuadratureSettings& s);

}  // namespace walkrange
