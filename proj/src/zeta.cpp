#include "walkrange/zeta.hpp"

#include <cmath>
#include <numbers>

#include "walkrange/errors.hpp"

namespace walkrange {

namespace {

// B_{2j} / (2j)!
constexpr double kBernoulliOverFactorial[] = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
};

constexpr double kEulerMaclaurinStart = 16.0;

// Euler-Maclaurin tail Sum_{m >= n} m^{-s}, valid as analytic continuation.
double em_tail(double s, double n) {
  double sum = std::pow(n, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(n, -s);
  double rising = s;  // s (s+1) ... (s+2j-2)
  double power = std::pow(n, -s - 1.0);
  for (int j = 0; j < 8; ++j) {
    sum += kBernoulliOverFactorial[j] * rising * power;
    rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
    power /= n * n;
  }
  return sum;
}

}  // namespace

double zeta_tail(double s, double n) {
  if (!(s > 1.0)) throw DomainError("zeta_tail needs s > 1");
  if (n < 1.0) throw DomainError("zeta_tail needs n >= 1");
  n = std::floor(n);
  double head = 0.0;
  while (n < kEulerMaclaurinStart) {
    head += std::pow(n, -s);
    n += 1.0;
  }
  return head + em_tail(s, n);
}

double riemann_zeta(double s) {
  if (s == 1.0) throw DomainError("zeta pole at s = 1");
  if (s >= 0.0) {
    double head = 0.0;
    for (double m = kEulerMaclaurinStart - 1.0; m >= 1.0; m -= 1.0) head += std::pow(m, -s);
    return head + em_tail(s, kEulerMaclaurinStart);
  }
  const double half = s / 2.0;
  if (half == std::floor(half)) return 0.0;  // trivial zeros
  return std::pow(2.0, s) * std::pow(std::numbers::pi, s - 1.0) * std::sin(std::numbers::pi * s / 2.0) *
         std::tgamma(1.0 - s) * riemann_zeta(1.0 - s);
}

namespace {

// Sum_{m >= m0} zeta(s - 2m) (-1)^m t^{2m} / (2m)!
double even_power_series(double s, double t, int m0) {
  const double t2 = t * t;
  double term_scale = 1.0;  // t^{2m} / (2m)!
  for (int m = 1; m <= m0; ++m) term_scale *= t2 / ((2.0 * m - 1.0) * (2.0 * m));
  double sum = 0.0;
  for (int m = m0; m < 80; ++m) {
    if (m > m0) term_scale *= t2 / ((2.0 * m - 1.0) * (2.0 * m));
    const double term = (m % 2 ? -1.0 : 1.0) * riemann_zeta(s - 2.0 * m) * term_scale;
    sum += term;
    if (m > m0 + 2 && std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

void check_order(double s, double t) {
  if (s < 2.0 || s > 3.0) throw DomainError("cosine series implemented for s in [2, 3]");
  if (s != 2.0 && s != 3.0 && (s - 2.0 < 1e-3 || 3.0 - s < 1e-3)) {
    throw DomainError("cosine series order too close to an integer");
  }
  if (!(std::abs(t) <= std::numbers::pi + 1e-12)) throw DomainError("cosine series needs |t| <= pi");
}

}  // namespace

double cosine_series_deficit(double s, double t) {
  check_order(s, t);
  const double a = std::abs(t);
  if (a == 0.0) return 0.0;
  if (s == 2.0) return std::numbers::pi * a / 2.0 - a * a / 4.0;
  if (s == 3.0) return -(a * a / 2.0) * (std::log(a) - 1.5) - even_power_series(s, a, 2);
  const double singular = std::tgamma(1.0 - s) * std::cos(std::numbers::pi * (s - 1.0) / 2.0) * std::pow(a, s - 1.0);
  return -singular - even_power_series(s, a, 1);
}

double cosine_series(double s, double t) { return riemann_zeta(s) - cosine_series_deficit(s, t); }

}  // namespace walkrange
