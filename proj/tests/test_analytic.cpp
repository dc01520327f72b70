#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "walkrange/analytic.hpp"
#include "walkrange/errors.hpp"

using namespace walkrange;
using std::numbers::pi;

namespace {

const Group kZ1(GroupKind::Z1);
const Group kZ2(GroupKind::Z2);
const Group kZ3(GroupKind::Z3);

StepLaw atoms_z1(std::vector<std::pair<std::int64_t, double>> a) {
  std::vector<Atom> out;
  for (auto [k, p] : a) out.push_back({zd({k}), p});
  return StepLaw::finite(kZ1, out);
}

// e^{-x} I_nu(x): library Bessel function for moderate x, Hankel expansion beyond.
double scaled_bessel_i(int nu, double x) {
  if (x <= 500.0) return std::cyl_bessel_i(static_cast<double>(nu), x) * std::exp(-x);
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 8; ++k) {
    term *= -(mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * x);
    sum += term;
  }
  return sum / std::sqrt(2 * pi * x);
}

// Oracle: Green function of SRW on Z^3 through the continuous-time walk,
// G(x) = int_0^inf prod_i e^{-t/3} I_{x_i}(t/3) dt, panels to 2^18 plus the
// two-term asymptotic tail.
double green_bessel(int x1, int x2, int x3) {
  auto f = [&](double t) {
    return scaled_bessel_i(x1, t / 3) * scaled_bessel_i(x2, t / 3) * scaled_bessel_i(x3, t / 3);
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double sum = GK::integrate(f, 0.0, 1.0, 10, 1e-14);
  for (double a = 1.0; a < 262144.0; a *= 2) sum += GK::integrate(f, a, 2 * a, 10, 1e-14);
  const double t = 262144.0;
  const double amp = std::pow(3.0 / (2 * pi), 1.5);
  double b = 0.0;
  for (int nu : {x1, x2, x3}) b += 3.0 * (4.0 * nu * nu - 1) / 8.0;
  return sum + amp * (2.0 / std::sqrt(t) - b * (2.0 / 3.0) * std::pow(t, -1.5));
}

double watson() {
  return std::sqrt(6.0) / (32 * pi * pi * pi) * std::tgamma(1.0 / 24) * std::tgamma(5.0 / 24) *
         std::tgamma(7.0 / 24) * std::tgamma(11.0 / 24);
}

// Oracle: 1 - phi(t) of the symmetric zeta law by direct summation, with the
// averaged tail sum p_k beyond the cut.
double zeta_one_minus_phi(double alpha, double t) {
  const double s = 1.0 + alpha;
  const std::int64_t cut = 200'000;
  double sum = 0.0;
  for (std::int64_t k = cut; k >= 1; --k) {
    const double h = std::sin(0.5 * static_cast<double>(k) * t);
    sum += 2.0 * h * h * std::pow(static_cast<double>(k), -s);
  }
  if (cut * t > 50) {
    static const double tail = [&] {
      double acc = std::pow(10.0 * cut, -alpha) / alpha;
      for (std::int64_t k = cut + 1; k <= 10 * cut; ++k) acc += std::pow(static_cast<double>(k), -s);
      return acc;
    }();
    sum += tail;
  }
  return sum / boost::math::zeta(s);
}

double binomial_half(int m) {  // C(2m, m) / 4^m
  double r = 1.0;
  for (int i = 1; i <= m; ++i) r *= (m + i) / (4.0 * i);
  return r;
}

}  // namespace

TEST_CASE("Green function of SRW on Z^3 at the origin") {
  const auto srw = StepLaw::simple(kZ3);
  const auto g0 = green(srw, zd({0, 0, 0}));
  CHECK(std::abs(g0.value - watson()) < 1e-4);
  CHECK(std::abs(g0.value - watson()) < 1e-8);
  CHECK(g0.error < 1e-6);
  const auto g1 = green(srw, zd({1, 0, 0}));
  CHECK(std::abs(g1.value - (g0.value - 1.0)) < 1e-4);
  const auto q = escape_from_green(srw, zd({0, 0, 0}));
  CHECK(q.value == doctest::Approx(1.0 / watson()).epsilon(1e-8));
  CHECK(escape_from_green(srw, zd({1, 0, 0})).value == doctest::Approx(1.0 / watson()).epsilon(1e-6));
}

TEST_CASE("Green function of SRW on Z^3 against the time-domain integral") {
  const auto srw = StepLaw::simple(kZ3);
  const std::vector<std::array<int, 3>> points{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {1, 1, 0}, {1, 1, 1}, {3, 1, 0}};
  std::vector<ZdPoint> gs;
  for (auto p : points) gs.push_back(zd({p[0], p[1], p[2]}));
  const auto batch = green_batch(srw, gs);
  for (std::size_t i = 0; i < points.size(); ++i) {
    CAPTURE(i);
    const double oracle = green_bessel(points[i][0], points[i][1], points[i][2]);
    CHECK(std::abs(batch[i].value - oracle) < 1e-6);
    CHECK(batch[i].value == doctest::Approx(green(srw, gs[i]).value).epsilon(1e-12));
  }
  CHECK(std::abs(green_bessel(0, 0, 0) - watson()) < 1e-7);
}

TEST_CASE("Green function decays along an axis") {
  const auto srw = StepLaw::simple(kZ3);
  std::vector<ZdPoint> gs;
  for (int k = 1; k <= 20; ++k) gs.push_back(zd({k, 0, 0}));
  const auto g = green_batch(srw, gs);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i].value < g[i - 1].value);
  CHECK(g.back().value < g.front().value / 5);
  for (const auto& r : g) CHECK(r.value > 0.0);
}

TEST_CASE("Green function of Z walks with drift") {
  const auto plus = atoms_z1({{1, 1.0}});
  for (std::int64_t k : {-3, -1, 0, 1, 5}) CHECK(green(plus, zd({k})).value == (k >= 0 ? 1.0 : 0.0));
  const auto quad = green_quadrature(plus, {zd({0}), zd({1}), zd({-1}), zd({4})});
  CHECK(std::abs(quad[0].value - 1.0) < 1e-6);
  CHECK(std::abs(quad[1].value - 1.0) < 1e-6);
  CHECK(std::abs(quad[2].value) < 1e-6);
  CHECK(std::abs(quad[3].value - 1.0) < 1e-6);

  // Nearest-neighbour walk with p = 0.7: G(k) = 1 / (p - q) for k >= 0 and
  // (q / p)^{|k|} / (p - q) for k < 0.
  const double p = 0.7, q = 0.3;
  const auto drift = atoms_z1({{1, p}, {-1, q}});
  const std::vector<std::int64_t> ks{0, 1, 3, -1, -2, -5};
  std::vector<ZdPoint> pts;
  for (auto k : ks) pts.push_back(zd({k}));
  const auto g = green_quadrature(drift, pts);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double want = (ks[i] >= 0 ? 1.0 : std::pow(q / p, static_cast<double>(-ks[i]))) / (p - q);
    CHECK(std::abs(g[i].value - want) < 1e-6);
    CHECK(std::abs(green(drift, pts[i]).value - want) < 1e-6);
  }
}

TEST_CASE("potential kernel of SRW on Z") {
  const auto srw = StepLaw::simple(kZ1);
  CHECK(potential_kernel(srw, zd({0})).value == 0.0);
  for (std::int64_t j = 1; j <= 10; ++j) {
    CHECK(std::abs(potential_kernel(srw, zd({j})).value - static_cast<double>(j)) < 1e-6);
    CHECK(std::abs(potential_kernel(srw, zd({-j})).value - static_cast<double>(j)) < 1e-6);
  }
}

TEST_CASE("potential kernel of SRW on Z^2") {
  const auto srw = StepLaw::simple(kZ2);
  const auto a = potential_kernel_batch(srw, {zd({1, 0}), zd({1, 1}), zd({2, 0}), zd({0, -1}), zd({0, 0})});
  CHECK(std::abs(a[0].value - 1.0) < 1e-4);
  CHECK(std::abs(a[1].value - 4 / pi) < 1e-4);
  CHECK(std::abs(a[2].value - (4 - 8 / pi)) < 1e-4);
  CHECK(std::abs(a[3].value - 1.0) < 1e-4);
  CHECK(a[4].value == 0.0);
  for (int x = -3; x <= 3; ++x)
    for (int y = -3; y <= 3; ++y)
      if (x || y) CHECK(potential_kernel(srw, zd({x, y})).value > 0.0);
  // the error estimate covers the refinement step
  QuadratureSettings coarse;
  coarse.passes = 1;
  const auto c = potential_kernel(srw, zd({1, 1}), coarse);
  CHECK(std::abs(c.value - 4 / pi) <= 10 * c.error + 1e-9);
}

TEST_CASE("potential kernel of the zeta law") {
  const auto z = StepLaw::parse("zeta:1.5", kZ1);
  for (std::int64_t j : {1, 3}) {
    // a(j) = (1 / pi) int_0^pi (1 - cos jt) / (1 - phi(t)) dt
    boost::math::quadrature::tanh_sinh<double> ts;
    const double oracle =
        ts.integrate(
            [j](double t) {
              if (t < 1e-9) return 0.0;  // the integrand vanishes like sqrt(t)
              return (1 - std::cos(static_cast<double>(j) * t)) / zeta_one_minus_phi(1.5, t);
            },
            0.0, pi, 1e-9) /
        pi;
    CHECK(potential_kernel(z, zd({j})).value == doctest::Approx(oracle).epsilon(1e-5));
  }
}

TEST_CASE("two-point taboo probabilities") {
  const auto sym = two_point_taboo(StepLaw::simple(kZ2), zd({1, 0}));
  CHECK(std::abs(sym.at_j.value - 0.5) < 1e-9);
  CHECK(std::abs(sym.at_zero.value - 0.5) < 1e-9);
  const auto z = two_point_taboo(StepLaw::parse("zeta:1.5", kZ1), zd({3}));
  CHECK(std::abs(z.at_j.value - 0.5) < 1e-9);

  const auto skew = atoms_z1({{-1, 2.0 / 3}, {2, 1.0 / 3}});
  const auto t = two_point_taboo(skew, zd({1}));
  CHECK(std::abs(t.at_j.value + t.at_zero.value - 1.0) < 1e-12);
  const double ap = potential_kernel(skew, zd({1})).value;
  const double am = potential_kernel(skew, zd({-1})).value;
  CHECK(t.at_j.value == doctest::Approx(ap / (ap + am)).epsilon(1e-9));
  CHECK(std::abs(t.at_j.value - 0.5) > 0.01);

  // Monte Carlo: avoidance of {0, 1} from x in {1, 0} relative to avoidance
  // of {0} from 0, at a finite horizon.
  const int reps = 200'000;
  const int horizon = 10'000;
  auto survives = [&](std::int64_t start, bool avoid_one, std::uint32_t traj, std::uint64_t seed) {
    std::int64_t x = start;
    for (int k = 0; k < horizon; ++k) {
      CounterRng rng(seed, static_cast<std::uint64_t>(k), traj);
      x += std::get<ZdPoint>(skew.sample(rng)).x[0];
      if (x == 0 || (avoid_one && x == 1)) return false;
    }
    return true;
  };
  double from_j = 0, from_zero = 0, base = 0;
  for (int r = 0; r < reps; ++r) {
    const auto traj = static_cast<std::uint32_t>(r);
    from_j += survives(1, true, traj, 13);
    from_zero += survives(0, true, traj, 14);
    base += survives(0, false, traj, 15);
  }
  CHECK(std::abs(from_j / base - t.at_j.value) < 0.05);
  CHECK(std::abs(from_zero / base - t.at_zero.value) < 0.05);
}

TEST_CASE("return partial sums") {
  const auto srw1 = StepLaw::simple(kZ1);
  const auto srw2 = StepLaw::simple(kZ2);
  const std::vector<std::int64_t> ns{0, 1, 2, 10, 64, 200};
  const auto u1 = return_partial_sums(srw1, ns);
  const auto u2 = return_partial_sums(srw2, ns);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    double s1 = 0, s2 = 0;
    for (int m = 0; 2 * m <= ns[i]; ++m) {
      const double b = binomial_half(m);
      s1 += b;
      s2 += b * b;
    }
    CHECK(u1[i] == doctest::Approx(s1).epsilon(1e-10));
    CHECK(u2[i] == doctest::Approx(s2).epsilon(1e-10));
  }
}

TEST_CASE("gamma constants") {
  const auto srw = StepLaw::simple(kZ2);
  const double g = gamma_constant(srw).value;
  CHECK(std::abs(g - pi) < 0.05);
  // P(X = +-k) = 3 / (pi^2 k^2): P(S_n = 0) ~ 1 / (3n), so gamma = 3
  CHECK(std::abs(gamma_constant(StepLaw::parse("cauchy", kZ1)).value - 3.0) < 0.05);
  // holding with probability 1 - rho scales the return count by 1 / rho
  const double lazy = gamma_constant(StepLaw::lazy(srw, 0.5)).value;
  CHECK(lazy / g == doctest::Approx(0.5).epsilon(0.05));
  CHECK_THROWS_AS(gamma_constant(atoms_z1({{1, 1.0}})), DomainError);
}

TEST_CASE("hitting constants") {
  const auto srw = StepLaw::simple(kZ2);
  const auto h = hitting_constants(srw, zd({1, 0}));
  CHECK(std::abs(h.c.value - pi / 2) < 0.1);
  const auto hm = hitting_constants(srw, zd({-1, 0}));
  CHECK(h.c.value == doctest::Approx(hm.c.value).epsilon(1e-9));
  const double g = gamma_constant(srw).value;
  CHECK(h.d.value == doctest::Approx(g * potential_kernel(srw, zd({-1, 0})).value).epsilon(1e-6));
  CHECK(h.c.value < h.d.value);
  CHECK_THROWS_AS(hitting_constants(srw, zd({0, 0})), DomainError);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(green(StepLaw::simple(kZ2), zd({0, 0})), DomainError);
  CHECK_THROWS_AS(potential_kernel(StepLaw::simple(kZ3), zd({1, 0, 0})), DomainError);
  CHECK_THROWS_AS(two_point_taboo(StepLaw::simple(kZ2), zd({0, 0})), DomainError);
  CHECK_THROWS_AS(green(StepLaw::simple(Group(GroupKind::F2)), zd({0})), UnsupportedError);
  CHECK_THROWS(green(StepLaw::simple(kZ3), zd({0, 0})));
}
