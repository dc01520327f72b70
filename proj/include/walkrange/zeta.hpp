#pragma once

namespace walkrange {

// Riemann zeta for real s != 1. Euler-Maclaurin for s > 0, functional
// equation for s <= 0.
double riemann_zeta(double s);

// Sum_{m >= n} m^{-s}, s > 1, n >= 1, by Euler-Maclaurin.
double zeta_tail(double s, double n);

// C_s(t) = Sum_{k >= 1} k^{-s} cos(k t) for s in [2, 3] and |t| <= pi, via the
// polylogarithm expansion around t = 0.
double cosine_series(double s, double t);

// zeta(s) - C_s(t), evaluated without cancellation near t = 0.
double cosine_series_deficit(double s, double t);

}  // namespace walkrange
