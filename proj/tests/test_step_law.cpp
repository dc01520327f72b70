#include <doctest.h>

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <vector>

#include "walkrange/errors.hpp"
#include "walkrange/step_law.hpp"

using namespace walkrange;
using std::numbers::pi;

namespace {

const Group kZ1(GroupKind::Z1);
const Group kZ2(GroupKind::Z2);
const Group kZ3(GroupKind::Z3);

StepLaw law(const std::string& token, const Group& g = kZ1) { return StepLaw::parse(token, g); }

StepLaw atoms_z1(std::vector<std::pair<std::int64_t, double>> a) {
  std::vector<Atom> out;
  for (auto [k, p] : a) out.push_back({zd({k}), p});
  return StepLaw::finite(kZ1, out);
}

// Oracle: P(|X| > k) = 2 Sum_{m > k} m^{-s} / (2 zeta(s)) with zeta from Boost.
double tail_oracle(double alpha, std::int64_t k) {
  const double s = 1.0 + alpha;
  double head = 0.0;
  for (std::int64_t m = k; m >= 1; --m) head += std::pow(static_cast<double>(m), -s);
  const double z = boost::math::zeta(s);
  return (z - head) / z;
}

// Oracle: 1 - phi(t) for the symmetric zeta law by direct summation.
double one_minus_phi_oracle(double alpha, double t, std::int64_t terms) {
  const double s = 1.0 + alpha;
  double sum = 0.0;
  for (std::int64_t k = terms; k >= 1; --k) {
    const double h = std::sin(0.5 * static_cast<double>(k) * t);
    sum += 2.0 * h * h * std::pow(static_cast<double>(k), -s);
  }
  return sum / boost::math::zeta(s);
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::int64_t z1_value(const GroupElement& g) { return std::get<ZdPoint>(g).x[0]; }

}  // namespace

TEST_CASE("deterministic law always steps +1") {
  const auto plus = atoms_z1({{1, 1.0}});
  for (std::uint32_t t = 0; t < 1000; ++t) {
    CounterRng rng(1, t, 0);
    CHECK(plus.sample(rng) == GroupElement(zd({1})));
  }
}

TEST_CASE("simple random walk on Z^2 is uniform on the generators") {
  const auto srw = StepLaw::simple(kZ2);
  std::map<std::pair<std::int64_t, std::int64_t>, int> counts;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    CounterRng rng(2, static_cast<std::uint64_t>(i), 0);
    const auto p = std::get<ZdPoint>(srw.sample(rng));
    ++counts[{p.x[0], p.x[1]}];
  }
  CHECK(counts.size() == 4);
  for (auto [k, c] : counts) {
    CHECK(std::abs(std::abs(k.first) + std::abs(k.second)) == 1);
    CHECK(std::abs(static_cast<double>(c) / n - 0.25) < 0.002);
  }
}

TEST_CASE("zeta tail probabilities match exact tail sums") {
  for (double alpha : {1.3, 1.5, 1.8}) {
    for (std::int64_t k : {1, 2, 10, 100, 1000, 10000}) {
      CAPTURE(alpha);
      CAPTURE(k);
      CHECK(zeta_tail_probability(alpha, static_cast<double>(k)) ==
            doctest::Approx(tail_oracle(alpha, k)).epsilon(1e-9));
    }
  }
  std::vector<double> lx, ly;
  for (int i = 0; i <= 20; ++i) {
    const double k = std::round(std::pow(10.0, 1.0 + 0.1 * i));
    lx.push_back(std::log(k));
    ly.push_back(std::log(tail_oracle(1.5, static_cast<std::int64_t>(k))));
  }
  CHECK(std::abs(least_squares_slope(lx, ly) + 1.5) < 0.05);
}

TEST_CASE("zeta sampler reproduces the law") {
  const auto z = law("zeta:1.5");
  const int n = 20'000'000;
  std::vector<double> ks;
  for (int i = 0; i <= 20; ++i) ks.push_back(std::round(std::pow(10.0, 1.0 + 0.1 * i)));
  std::vector<long long> above(ks.size(), 0);
  long long ones = 0, minus_ones = 0, zeros = 0;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    CounterRng rng(3, static_cast<std::uint64_t>(i), 0);
    const std::int64_t x = z1_value(z.sample(rng));
    const double ax = std::abs(static_cast<double>(x));
    for (std::size_t j = 0; j < ks.size(); ++j) above[j] += ax > ks[j];
    ones += x == 1;
    minus_ones += x == -1;
    zeros += x == 0;
    sum += static_cast<double>(std::clamp<std::int64_t>(x, -1000, 1000));
  }
  CHECK(zeros == 0);
  const double p1 = 0.5 / boost::math::zeta(2.5);
  const double se1 = std::sqrt(p1 * (1 - p1) / n);
  CHECK(std::abs(static_cast<double>(ones) / n - p1) < 5 * se1);
  CHECK(std::abs(static_cast<double>(minus_ones) / n - p1) < 5 * se1);
  // Symmetry of the truncated mean.
  CHECK(std::abs(sum / n) < 0.05);

  std::vector<double> lx, ly;
  for (std::size_t j = 0; j < ks.size(); ++j) {
    lx.push_back(std::log(ks[j]));
    ly.push_back(std::log(static_cast<double>(above[j]) / n));
  }
  CHECK(std::abs(least_squares_slope(lx, ly) + 1.5) < 0.05);
}

TEST_CASE("characteristic function examples") {
  const double tpi[] = {pi};
  CHECK(std::abs(StepLaw::simple(kZ1).char_fn(tpi) - std::complex<double>(-1.0)) < 1e-14);
  const double half[] = {pi / 2, pi / 2};
  CHECK(std::abs(StepLaw::simple(kZ2).char_fn(half)) < 1e-14);
  const double zero[] = {0.0, 0.0};
  CHECK(std::abs(StepLaw::simple(kZ2).char_fn(zero) - 1.0) < 1e-15);
  CounterRng rng(4, 0, 0);
  for (int i = 0; i < 100; ++i) {
    const double t[] = {(2 * rng.uniform() - 1) * pi, (2 * rng.uniform() - 1) * pi};
    CHECK(std::abs(StepLaw::simple(kZ2).char_fn(t) - 0.5 * (std::cos(t[0]) + std::cos(t[1]))) < 1e-14);
  }
}

TEST_CASE("zeta characteristic function near zero") {
  const auto z = law("zeta:1.5");
  std::vector<double> ratios;
  for (double t : {1e-3, 2e-3, 5e-3, 1e-2, 0.1, 1.0, 3.0}) {
    const double tt[] = {t};
    const double got = z.one_minus_char_fn(tt).real();
    const double want = one_minus_phi_oracle(1.5, t, 2'000'000);
    CAPTURE(t);
    CHECK(got == doctest::Approx(want).epsilon(1e-6));
    CHECK(std::abs(z.one_minus_char_fn(tt).imag()) < 1e-15);
    CHECK(std::abs(1.0 - z.char_fn(tt).real() - got) < 1e-12);
    if (t <= 1e-2) ratios.push_back(got / std::pow(t, 1.5));
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  CHECK(*hi / *lo < 1.05);
}

TEST_CASE("characteristic function invariants") {
  const std::vector<StepLaw> laws{StepLaw::simple(kZ1), atoms_z1({{2, 1.0 / 3}, {-1, 2.0 / 3}}), law("zeta:1.3"),
                                  law("cauchy"), law("lazy:0.3:zeta:1.8")};
  CounterRng rng(5, 0, 0);
  for (const auto& l : laws) {
    const double zero[] = {0.0};
    CHECK(std::abs(l.char_fn(zero) - 1.0) < 1e-12);
    for (int i = 0; i < 200; ++i) {
      const double t = (2 * rng.uniform() - 1) * pi;
      const double tp[] = {t}, tm[] = {-t};
      const auto phi = l.char_fn(tp);
      CHECK(std::abs(phi) <= 1.0 + 1e-12);
      CHECK(std::abs(l.char_fn(tm) - std::conj(phi)) < 1e-12);
      CHECK(std::abs(1.0 - phi - l.one_minus_char_fn(tp)) < 1e-12);
    }
  }
}

TEST_CASE("empirical characteristic function") {
  const std::vector<StepLaw> laws{atoms_z1({{2, 1.0 / 3}, {-1, 2.0 / 3}}), law("lazy:0.5:srw", kZ2)};
  const int n = 1'000'000;
  for (const auto& l : laws) {
    const int d = l.group().lattice_dim();
    std::vector<std::array<double, 2>> ts;
    CounterRng pick(6, 0, 0);
    for (int i = 0; i < 10; ++i) ts.push_back({(2 * pick.uniform() - 1) * pi, (2 * pick.uniform() - 1) * pi});
    std::vector<std::complex<double>> acc(ts.size());
    for (int i = 0; i < n; ++i) {
      CounterRng rng(7, static_cast<std::uint64_t>(i), 0);
      const auto p = std::get<ZdPoint>(l.sample(rng));
      for (std::size_t j = 0; j < ts.size(); ++j) {
        double dot = 0;
        for (int c = 0; c < d; ++c) dot += ts[j][c] * static_cast<double>(p.x[c]);
        acc[j] += std::polar(1.0, dot);
      }
    }
    for (std::size_t j = 0; j < ts.size(); ++j) {
      const auto phi = l.char_fn(std::span<const double>(ts[j].data(), static_cast<std::size_t>(d)));
      CHECK(std::abs(acc[j] / static_cast<double>(n) - phi) < 4 / std::sqrt(static_cast<double>(n)));
    }
  }
}

TEST_CASE("diagnostics") {
  const auto srw2 = diagnose(StepLaw::simple(kZ2));
  CHECK(srw2.aperiodic);
  CHECK_FALSE(srw2.strongly_aperiodic);
  CHECK(srw2.second_moment.rows() == 2);
  CHECK(srw2.second_moment(0, 0) == doctest::Approx(0.5));
  CHECK(srw2.second_moment(1, 1) == doctest::Approx(0.5));
  CHECK(std::abs(srw2.second_moment(0, 1)) < 1e-15);
  CHECK(srw2.a1_matrix(0, 0) == doctest::Approx(0.25));
  CHECK(srw2.mean.norm() < 1e-15);
  CHECK(srw2.assumption == "A1");
  CHECK(srw2.loop_gcd == 2);

  CHECK_FALSE(diagnose(atoms_z1({{2, 0.5}, {-2, 0.5}})).aperiodic);
  CHECK(diagnose(law("lazy:0.5:srw", kZ2)).strongly_aperiodic);

  const auto z = diagnose(law("zeta:1.5"));
  CHECK(z.aperiodic);
  CHECK(z.strongly_aperiodic);
  CHECK(z.mean_finite);
  CHECK_FALSE(z.second_moment_finite);
  CHECK(z.assumption.empty());
  const auto c = diagnose(law("cauchy"));
  CHECK(c.assumption == "A2");
  REQUIRE(c.cauchy_scale.has_value());
  // P(X = +-k) = 3 / (pi^2 k^2) gives 1 - phi(t) ~ (3 / pi) |t|
  CHECK(*c.cauchy_scale == doctest::Approx(3 / pi).epsilon(1e-6));

  // strongly aperiodic implies aperiodic; holding makes any aperiodic law strongly aperiodic
  const std::vector<StepLaw> laws{StepLaw::simple(kZ1), StepLaw::simple(kZ2), StepLaw::simple(kZ3),
                                  atoms_z1({{2, 1.0 / 3}, {-1, 2.0 / 3}}), atoms_z1({{3, 0.5}, {-3, 0.5}}),
                                  atoms_z1({{1, 0.5}, {-2, 0.5}})};
  for (const auto& l : laws) {
    const auto dg = diagnose(l);
    CHECK((!dg.strongly_aperiodic || dg.aperiodic));
    if (dg.aperiodic) CHECK(diagnose(StepLaw::lazy(l, 0.6)).strongly_aperiodic);
  }
  // support {1, -2} lies in the coset 1 + 3Z
  CHECK(diagnose(atoms_z1({{1, 0.5}, {-2, 0.5}})).aperiodic);
  CHECK_FALSE(diagnose(atoms_z1({{1, 0.5}, {-2, 0.5}})).strongly_aperiodic);
  CHECK(diagnose(atoms_z1({{1, 0.5}, {-2, 0.5}})).loop_gcd == 3);
}

TEST_CASE("transience verdicts") {
  CHECK(diagnose(StepLaw::simple(kZ3)).transience == Transience::transient);
  CHECK(diagnose(StepLaw::simple(kZ2)).transience == Transience::recurrent);
  CHECK(diagnose(StepLaw::simple(kZ1)).transience == Transience::recurrent);
  CHECK(diagnose(atoms_z1({{1, 0.7}, {-1, 0.3}})).transience == Transience::transient);
  CHECK(diagnose(atoms_z1({{2, 1.0 / 3}, {-1, 2.0 / 3}})).transience == Transience::recurrent);
  CHECK(diagnose(law("zeta:1.5")).transience == Transience::recurrent);
  CHECK(diagnose(law("cauchy")).transience == Transience::recurrent);
}

TEST_CASE("lazy laws") {
  const auto lazy_plus = StepLaw::lazy(atoms_z1({{1, 1.0}}), 0.5);
  std::map<std::int64_t, double> atoms;
  for (const auto& a : lazy_plus.atoms()) atoms[z1_value(a.element)] += a.probability;
  CHECK(atoms.size() == 2);
  CHECK(atoms[0] == doctest::Approx(0.5));
  CHECK(atoms[1] == doctest::Approx(0.5));

  const double tpi[] = {pi};
  CHECK(std::abs(StepLaw::lazy(StepLaw::simple(kZ1), 0.5).char_fn(tpi)) < 1e-15);

  const auto inner = law("zeta:1.8");
  const auto lz = StepLaw::lazy(inner, 0.3);
  CounterRng rng(8, 0, 0);
  for (int i = 0; i < 100; ++i) {
    const double t[] = {(2 * rng.uniform() - 1) * pi};
    CHECK(std::abs(lz.char_fn(t) - (0.7 + 0.3 * inner.char_fn(t))) < 1e-13);
  }
  CHECK(lz.inner().alpha() == 1.8);
  CHECK(lz.rho() == 0.3);
  CHECK(lz.inner().token() == inner.token());
}

TEST_CASE("lazy zeta keeps the tail exponent") {
  const auto lz = law("lazy:0.9:zeta:1.5");
  const int n = 20'000'000;
  std::vector<double> ks;
  for (int i = 0; i <= 20; ++i) ks.push_back(std::round(std::pow(10.0, 1.0 + 0.1 * i)));
  std::vector<long long> above(ks.size(), 0);
  long long holds = 0;
  for (int i = 0; i < n; ++i) {
    CounterRng rng(9, static_cast<std::uint64_t>(i), 0);
    const std::int64_t x = z1_value(lz.sample(rng));
    holds += x == 0;
    for (std::size_t j = 0; j < ks.size(); ++j) above[j] += std::abs(static_cast<double>(x)) > ks[j];
  }
  CHECK(std::abs(static_cast<double>(holds) / n - 0.1) < 5 * std::sqrt(0.09 / n));
  std::vector<double> lx, ly;
  for (std::size_t j = 0; j < ks.size(); ++j) {
    lx.push_back(std::log(ks[j]));
    ly.push_back(std::log(static_cast<double>(above[j]) / n));
  }
  CHECK(std::abs(least_squares_slope(lx, ly) + 1.5) < 0.05);
}

TEST_CASE("finite laws validate their atoms") {
  CHECK_THROWS_AS(atoms_z1({{1, 0.5}, {-1, 0.4}}), UsageError);
  CHECK_THROWS_AS(atoms_z1({{1, 1.5}, {-1, -0.5}}), UsageError);
  CHECK_THROWS_AS(StepLaw::finite(kZ1, {}), UsageError);
  CHECK_THROWS_AS(StepLaw::finite(kZ1, {{zd({1, 0}), 1.0}}), UsageError);
  const auto merged = atoms_z1({{1, 0.25}, {1, 0.25}, {-1, 0.5}});
  double total = 0;
  for (const auto& a : merged.atoms()) total += a.probability;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(law("zeta:1.5").atoms(), UnsupportedError);
}

TEST_CASE("law tokens") {
  CHECK(law("srw", kZ3).kind() == LawKind::SimpleRW);
  CHECK(law("zeta:1.5").kind() == LawKind::SymmetricZeta);
  CHECK(law("zeta:1.5").alpha() == 1.5);
  CHECK(law("cauchy").kind() == LawKind::CauchyZeta);
  CHECK(law("lazy:0.5:srw", kZ2).kind() == LawKind::Lazy);
  CHECK(law("lazy:0.25:zeta:1.3").token() == "lazy:0.25:zeta:1.3");
  CHECK_THROWS_AS(law("zeta:1.5", kZ2), UsageError);
  CHECK_THROWS_AS(law("zeta:2.5"), UsageError);
  CHECK_THROWS_AS(law("zeta:abc"), UsageError);
  CHECK_THROWS_AS(law("lazy:1.5:srw"), UsageError);
  CHECK_THROWS_AS(law("lazy:0.5"), UsageError);
  CHECK_THROWS_AS(law("levy"), UsageError);
  CHECK_THROWS_AS(law("atoms:/nonexistent/file.txt"), UsageError);

  const std::string path = "test_step_law_atoms.txt";
  {
    std::ofstream f(path);
    f << "# drifted law\n2 0.25   # right\n-1 0.75\n\n";
  }
  const auto a = law("atoms:" + path);
  CHECK(a.has_finite_support());
  const double t[] = {0.7};
  CHECK(std::abs(a.char_fn(t) - (0.25 * std::polar(1.0, 1.4) + 0.75 * std::polar(1.0, -0.7))) < 1e-14);
  {
    std::ofstream f(path);
    f << "2 0.25 extra\n";
  }
  CHECK_THROWS_AS(law("atoms:" + path), UsageError);
  std::remove(path.c_str());
}
