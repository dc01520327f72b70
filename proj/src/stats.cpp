#include "walkrange/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "walkrange/errors.hpp"

namespace walkrange {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

Moments moments(const std::vector<double>& xs) {
  Moments m;
  m.count = static_cast<std::int64_t>(xs.size());
  if (xs.empty()) return m;
  CompensatedSum s;
  for (double x : xs) s.add(x);
  m.mean = s.value() / static_cast<double>(xs.size());
  if (xs.size() < 2) return m;
  CompensatedSum q;
  for (double x : xs) q.add((x - m.mean) * (x - m.mean));
  m.variance = q.value() / static_cast<double>(xs.size() - 1);
  m.stderr_ = std::sqrt(m.variance / static_cast<double>(xs.size()));
  return m;
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("least squares needs at least two points");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, 0) = x[static_cast<std::size_t>(i)];
    A(i, 1) = 1.0;
    b(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(b);
  LinearFit f;
  f.slope = coef(0);
  f.intercept = coef(1);
  const Eigen::VectorXd r = b - A * coef;
  f.residual = r.norm();
  if (n > 2) {
    const double s2 = r.squaredNorm() / static_cast<double>(n - 2);
    const Eigen::Matrix2d cov = (A.transpose() * A).inverse() * s2;
    f.slope_se = std::sqrt(std::max(cov(0, 0), 0.0));
    f.intercept_se = std::sqrt(std::max(cov(1, 1), 0.0));
  }
  return f;
}

FitResult regular_variation_fit(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 5) throw DomainError("regular variation fit needs at least five points");
  auto sorted = series;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> lx, ly;
  for (const auto& [n, v] : sorted) {
    if (!(n > 0.0) || !(v > 0.0) || !std::isfinite(v)) throw DomainError("regular variation fit needs positive values");
    lx.push_back(std::log(n));
    ly.push_back(std::log(v));
  }
  const LinearFit all = least_squares(lx, ly);
  const std::size_t half = lx.size() / 2;
  const std::vector<double> hx(lx.begin() + static_cast<std::ptrdiff_t>(half), lx.end());
  const std::vector<double> hy(ly.begin() + static_cast<std::ptrdiff_t>(half), ly.end());
  const LinearFit second = least_squares(hx, hy);
  FitResult r;
  r.index = all.slope;
  r.intercept = all.intercept;
  r.residual = all.residual;
  r.uncertainty = std::max(all.slope_se, std::abs(second.slope - all.slope));
  r.n_min = sorted.front().first;
  r.n_max = sorted.back().first;
  r.points = sorted.size();
  return r;
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw DomainError("median of an empty sequence");
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

}  // namespace walkrange
