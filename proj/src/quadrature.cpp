#include "walkrange/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "walkrange/errors.hpp"

namespace walkrange {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInner = 0.3;
constexpr double kOuter = 1.2;
constexpr int kRadialOrder = 12;

double bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// 1 on [0, kInner], 0 beyond kOuter, smooth in between
double cutoff(double r) {
  if (r <= kInner) return 1.0;
  if (r >= kOuter) return 0.0;
  const double s = (r - kInner) / (kOuter - kInner);
  const double a = bump(1.0 - s), b = bump(s);
  return a / (a + b);
}

struct AngularRule {
  std::vector<std::array<double, 3>> dir;
  std::vector<double> w;
};

AngularRule angular_rule(int d, int level, double freq) {
  AngularRule a;
  const int scale = 1 << level;
  if (d == 1) {
    a.dir = {{1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}};
    a.w = {1.0, 1.0};
  } else if (d == 2) {
    const int m = (48 + 2 * static_cast<int>(std::ceil(freq * kOuter))) * scale;
    for (int i = 0; i < m; ++i) {
      const double phi = 2.0 * kPi * (i + 0.5) / m;
      a.dir.push_back({std::cos(phi), std::sin(phi), 0.0});
      a.w.push_back(2.0 * kPi / m);
    }
  } else {
    const int mt = (12 + static_cast<int>(std::ceil(0.6 * freq * kOuter))) * scale;
    const int mp = 2 * mt;
    const auto& g = gauss_legendre(mt);
    for (int i = 0; i < mt; ++i) {
      const double c = g.x[static_cast<std::size_t>(i)];
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (int j = 0; j < mp; ++j) {
        const double phi = 2.0 * kPi * (j + 0.5) / mp;
        a.dir.push_back({s * std::cos(phi), s * std::sin(phi), c});
        a.w.push_back(g.w[static_cast<std::size_t>(i)] * 2.0 * kPi / mp);
      }
    }
  }
  return a;
}

std::vector<double> one_pass(const SingularIntegrand& f, const QuadratureSettings& s, int level) {
  const int d = f.dim;
  const std::size_t K = f.outputs;
  std::vector<double> acc(K, 0.0), tmp(K), row(K);
  double t[3] = {0.0, 0.0, 0.0};

  // torus part
  const int base = s.grid > 0 ? s.grid : (d == 1 ? 1024 : d == 2 ? 128 : 32);
  const int N = std::max(base, 2 * static_cast<int>(std::ceil(f.frequency)) + 8) << level;
  const double h = 2.0 * kPi / N;
  const double cell = std::pow(h, d);
  const int n1 = d >= 2 ? N : 1, n2 = d >= 3 ? N : 1;
  for (int k = 0; k < n2; ++k) {
    for (int j = 0; j < n1; ++j) {
      std::fill(row.begin(), row.end(), 0.0);
      for (int i = 0; i < N; ++i) {
        t[0] = -kPi + (i + 0.5) * h;
        if (d >= 2) t[1] = -kPi + (j + 0.5) * h;
        if (d >= 3) t[2] = -kPi + (k + 0.5) * h;
        const double r = std::sqrt(t[0] * t[0] + t[1] * t[1] + t[2] * t[2]);
        if (r <= kInner) continue;
        const double wt = 1.0 - cutoff(r);
        f.eval(t, tmp.data());
        for (std::size_t q = 0; q < K; ++q) row[q] += wt * tmp[q];
      }
      for (std::size_t q = 0; q < K; ++q) acc[q] += row[q] * cell;
    }
  }

  // ball part in polar coordinates
  const double eps = s.epsilon / static_cast<double>(1 << level);
  const AngularRule ang = angular_rule(d, level, f.frequency);
  std::vector<double> edges{eps};
  while (edges.back() < 0.15) edges.push_back(std::min(2.0 * edges.back(), 0.15));
  const double width = std::min(0.15, 3.0 / (f.frequency + 1.0)) / static_cast<double>(1 << level);
  while (edges.back() < kOuter) edges.push_back(std::min(edges.back() + width, kOuter));
  const auto& g = gauss_legendre(kRadialOrder);
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p], b = edges[p + 1];
    for (int m = 0; m < kRadialOrder; ++m) {
      const double r = 0.5 * (a + b) + 0.5 * (b - a) * g.x[static_cast<std::size_t>(m)];
      const double wr = 0.5 * (b - a) * g.w[static_cast<std::size_t>(m)] * cutoff(r) * std::pow(r, d - 1);
      std::fill(row.begin(), row.end(), 0.0);
      for (std::size_t q = 0; q < ang.dir.size(); ++q) {
        for (int c = 0; c < d; ++c) t[c] = r * ang.dir[q][static_cast<std::size_t>(c)];
        f.eval(t, tmp.data());
        for (std::size_t o = 0; o < K; ++o) row[o] += ang.w[q] * tmp[o];
      }
      for (std::size_t o = 0; o < K; ++o) acc[o] += wr * row[o];
    }
  }

  // |t| < eps: f(r w) ~ r^degree M(w), M sampled at r = eps / 2
  const double pd = f.degree + d;
  const double rm = 0.5 * eps;
  const double scale = std::pow(eps, pd) / pd * std::pow(rm, -f.degree);
  for (std::size_t q = 0; q < ang.dir.size(); ++q) {
    for (int c = 0; c < d; ++c) t[c] = rm * ang.dir[q][static_cast<std::size_t>(c)];
    f.eval(t, tmp.data());
    for (std::size_t o = 0; o < K; ++o) acc[o] += scale * ang.w[q] * tmp[o];
  }

  const double norm = std::pow(2.0 * kPi, -d);
  for (auto& v : acc) v *= norm;
  return acc;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  if (order < 1) throw UsageError("Gauss-Legendre order must be positive");
  GaussRule g;
  g.x.resize(static_cast<std::size_t>(order));
  g.w.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    g.x[static_cast<std::size_t>(i)] = x;
    g.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(order, std::move(g)).first->second;
}

QuadratureOutcome torus_average(const SingularIntegrand& f, const QuadratureSettings& s) {
  if (f.dim < 1 || f.dim > 3) throw UsageError("torus dimension must be 1, 2 or 3");
  if (!(f.degree + f.dim > 0.0)) throw DomainError("integrand singularity is not integrable");
  if (!(s.epsilon > 0.0 && s.epsilon < 0.3)) throw UsageError("epsilon must lie in (0, 0.3)");
  if (s.passes < 1) throw UsageError("at least one refinement pass is needed for an error estimate");
  QuadratureOutcome out;
  std::vector<double> prev = one_pass(f, s, 0);
  out.error.assign(f.outputs, 0.0);
  for (int level = 1; level <= s.passes; ++level) {
    std::vector<double> cur = one_pass(f, s, level);
    bool done = true;
    for (std::size_t o = 0; o < f.outputs; ++o) {
      out.error[o] = std::abs(cur[o] - prev[o]);
      done = done && out.error[o] <= s.tolerance * std::max(1.0, std::abs(cur[o]));
    }
    prev = std::move(cur);
    out.passes = level;
    if (done) break;
  }
  out.value = std::move(prev);
  return out;
}

}  // namespace walkrange
