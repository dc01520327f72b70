#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "walkrange/cocycle.hpp"
#include "walkrange/errors.hpp"

using namespace walkrange;

namespace {

const Group kZ1(GroupKind::Z1);

std::int64_t z1_value(const GroupElement& g) { return std::get<ZdPoint>(g).x[0]; }

StepLaw atoms_z1(std::vector<std::pair<std::int64_t, double>> a) {
  std::vector<Atom> out;
  for (auto [k, p] : a) out.push_back({zd({k}), p});
  return StepLaw::finite(kZ1, out);
}

std::vector<CocycleSpec> sample_specs() {
  return {CocycleSpec::bernoulli(StepLaw::simple(Group(GroupKind::Z2))),
          CocycleSpec::bernoulli(StepLaw::parse("zeta:1.5", kZ1)),
          CocycleSpec::bernoulli(StepLaw::simple(Group(GroupKind::F2))),
          CocycleSpec::bernoulli(StepLaw::simple(Group(GroupKind::Heisenberg))),
          CocycleSpec::bernoulli(StepLaw::lazy(StepLaw::simple(Group(GroupKind::Z3)), 0.5)),
          CocycleSpec::rotation(Rational::golden(), Rational{1, 2}, Rational{1, 10}),
          CocycleSpec::rotation(Rational{3, 7}, Rational{2, 5}, Rational{1, 3})};
}

// Oracle: #{k in [lo, hi) : frac(x0 + k theta) < beta}, each point computed
// from scratch in 128-bit arithmetic on the common denominator.
std::int64_t rotation_count(const Rational& theta, const Rational& beta, const Rational& x0, std::int64_t lo,
                            std::int64_t hi) {
  const __int128 d = std::lcm(std::lcm(theta.den, beta.den), x0.den);
  const __int128 a = static_cast<__int128>(x0.num) * (d / x0.den);
  const __int128 t = static_cast<__int128>(theta.num) * (d / theta.den);
  const __int128 b = static_cast<__int128>(beta.num) * (d / beta.den);
  std::int64_t count = 0;
  for (std::int64_t k = lo; k < hi; ++k) {
    __int128 x = (a + static_cast<__int128>(k) * t) % d;
    if (x < 0) x += d;
    count += x < b;
  }
  return count;
}

}  // namespace

TEST_CASE("zero steps give the identity") {
  for (const auto& spec : sample_specs()) {
    for (std::uint32_t t = 0; t < 10; ++t) CHECK(is_identity(evaluate_cocycle(spec, Omega{1, t, 0}, 0)));
  }
}

TEST_CASE("cocycle identity") {
  CounterRng rng(17, 0, 0);
  for (const auto& spec : sample_specs()) {
    for (int i = 0; i < 1000; ++i) {
      const auto n = static_cast<std::int64_t>(rng.below(101)) - 50;
      const auto m = static_cast<std::int64_t>(rng.below(101)) - 50;
      const Omega w{rng.below(1000), static_cast<std::uint32_t>(rng.below(1000)),
                    static_cast<std::int64_t>(rng.below(201)) - 100};
      REQUIRE(evaluate_cocycle(spec, w, n + m) ==
              multiply(evaluate_cocycle(spec, w, m), evaluate_cocycle(spec, w.shifted(m), n)));
    }
  }
}

TEST_CASE("cocycle is the ordered product of increments") {
  for (const auto& spec : sample_specs()) {
    const Omega w{5, 3, 7};
    GroupElement fwd = spec.group.identity();
    GroupElement bwd = spec.group.identity();
    for (std::int64_t n = 1; n <= 200; ++n) {
      fwd = multiply(fwd, increment(spec, w, n - 1));
      bwd = multiply(bwd, inverse(increment(spec, w, -n)));
      REQUIRE(evaluate_cocycle(spec, w, n) == fwd);
      REQUIRE(evaluate_cocycle(spec, w, -n) == bwd);
    }
  }
}

TEST_CASE("walk stream follows the cocycle in both directions") {
  for (const auto& spec : sample_specs()) {
    const Omega w{11, 4, 0};
    WalkStream s(spec, w);
    for (std::int64_t n = 1; n <= 300; ++n) {
      REQUIRE(s.advance(Direction::forward) == evaluate_cocycle(spec, w, n));
      REQUIRE(s.advance(Direction::backward) == evaluate_cocycle(spec, w, -n));
    }
    CHECK(s.steps(Direction::forward) == 300);
    CHECK(s.steps(Direction::backward) == 300);
  }
}

TEST_CASE("deterministic +1 law") {
  const auto spec = CocycleSpec::bernoulli(atoms_z1({{1, 1.0}}));
  CHECK(evaluate_cocycle(spec, Omega{1, 0, 0}, 10) == GroupElement(zd({10})));
  CHECK(evaluate_cocycle(spec, Omega{1, 0, 0}, -10) == GroupElement(zd({-10})));
  WalkStream s(spec, Omega{2, 9, 0});
  for (int i = 0; i < 10; ++i) s.advance(Direction::forward);
  CHECK(s.position(Direction::forward) == GroupElement(zd({10})));
}

TEST_CASE("golden rotation against direct orbit summation") {
  const Rational theta = Rational::golden();
  const Rational beta{1, 2};
  const Rational x0 = Rational::parse("0.1");
  CHECK(x0 == Rational{1, 10});
  CHECK(theta.den > (std::int64_t{1} << 50));
  CHECK(std::abs(theta.value() - (std::sqrt(5.0) - 1) / 2) < 1e-15);
  const auto spec = CocycleSpec::rotation(theta, beta, x0);
  const std::int64_t n = 1'000'000;
  const std::int64_t f = z1_value(evaluate_cocycle(spec, Omega{0, 0, 0}, n));
  CHECK(f == rotation_count(theta, beta, x0, 0, n));
  CHECK(std::abs(static_cast<double>(f) - 0.5 * n) <= 2 * std::log(static_cast<double>(n)) + 2);
  CHECK(z1_value(evaluate_cocycle(spec, Omega{0, 0, 0}, -1000)) == -rotation_count(theta, beta, x0, -1000, 0));
}

TEST_CASE("rational rotations against brute force") {
  const std::vector<std::array<Rational, 3>> cases{{Rational{3, 7}, Rational{2, 5}, Rational{1, 3}},
                                                    {Rational{13, 31}, Rational{1, 2}, Rational{0, 1}},
                                                    {Rational{1, 1000}, Rational{999, 1000}, Rational{5, 11}}};
  for (const auto& [theta, beta, x0] : cases) {
    const auto spec = CocycleSpec::rotation(theta, beta, x0);
    const Omega w{0, 0, 0};
    std::int64_t prev = 0;
    for (std::int64_t n = 1; n <= 10000; n += 37) {
      const std::int64_t f = z1_value(evaluate_cocycle(spec, w, n));
      REQUIRE(f == rotation_count(theta, beta, x0, 0, n));
      REQUIRE(f >= prev);
      prev = f;
    }
    for (std::int64_t k = -50; k < 50; ++k) {
      const std::int64_t step = z1_value(increment(spec, w, k));
      REQUIRE((step == 0 || step == 1));
      REQUIRE(step == rotation_count(theta, beta, x0, k, k + 1));
    }
  }
}

TEST_CASE("rotation orbit iterator") {
  const RotationBase base{Rational{3, 7}, Rational{2, 5}, Rational{1, 3}, "rotation:3/7:2/5:1/3"};
  RotationOrbit fwd(base, -20), bwd(base, 20);
  for (std::int64_t k = -20; k < 20; ++k) CHECK(fwd.next() == RotationOrbit::indicator(base, k));
  for (std::int64_t k = 20; k > -20; --k) CHECK(bwd.prev() == RotationOrbit::indicator(base, k));
}

TEST_CASE("backward walk of an abelian law is the reflected forward walk in law") {
  const auto spec = CocycleSpec::bernoulli(atoms_z1({{2, 1.0 / 3}, {-1, 2.0 / 3}}));
  const int n = 100'000;
  std::map<std::int64_t, double> fwd, bwd;
  for (int t = 0; t < n; ++t) {
    fwd[-z1_value(evaluate_cocycle(spec, Omega{21, static_cast<std::uint32_t>(t), 0}, 20))] += 1.0 / n;
    bwd[z1_value(evaluate_cocycle(spec, Omega{21, static_cast<std::uint32_t>(t + n), 0}, -20))] += 1.0 / n;
  }
  std::map<std::int64_t, double> both;
  for (auto [k, p] : fwd) both[k] += p;
  for (auto [k, p] : bwd) both[k] -= p;
  double cdf = 0, ks = 0;
  for (auto [k, d] : both) {
    cdf += d;
    ks = std::max(ks, std::abs(cdf));
  }
  CHECK(ks < 0.01);
}

TEST_CASE("free group walk escapes at speed one half") {
  const auto spec = CocycleSpec::bernoulli(StepLaw::simple(Group(GroupKind::F2)));
  double total = 0;
  const int reps = 200;
  const std::int64_t n = 10'000;
  for (int t = 0; t < reps; ++t) {
    WalkStream s(spec, Omega{31, static_cast<std::uint32_t>(t), 0});
    for (std::int64_t k = 0; k < n; ++k) s.advance(Direction::forward);
    total += static_cast<double>(word_norm(s.position(Direction::forward))) / n;
  }
  CHECK(std::abs(total / reps - 0.5) < 0.02);
}

TEST_CASE("base tokens") {
  const auto z2 = Group(GroupKind::Z2);
  const auto law = StepLaw::simple(z2);
  CHECK_FALSE(CocycleSpec::parse("bernoulli", z2, &law).is_rotation());
  CHECK_THROWS_AS(CocycleSpec::parse("bernoulli", z2, nullptr), UsageError);
  const auto spec = CocycleSpec::parse("rotation:golden:1/2:0", kZ1, nullptr);
  CHECK(spec.is_rotation());
  CHECK(spec.rotation_base().theta == Rational::golden());
  CHECK_THROWS_AS(CocycleSpec::parse("rotation:golden:1/2:0", z2, nullptr), UnsupportedError);
  CHECK_THROWS_AS(CocycleSpec::parse("rotation:golden:1/2", kZ1, nullptr), UsageError);
  CHECK_THROWS_AS(CocycleSpec::parse("rotation:golden:3/2:0", kZ1, nullptr), UsageError);
  CHECK_THROWS_AS(CocycleSpec::parse("markov", kZ1, nullptr), UsageError);
  CHECK(Rational::parse("0.125") == Rational{1, 8});
  CHECK(Rational::parse("2/6") == Rational{1, 3});
  CHECK_THROWS_AS(Rational::parse("1/0"), UsageError);
  CHECK_THROWS_AS(Rational::parse("x"), UsageError);
  CHECK_THROWS_AS(spec.law(), UnsupportedError);
}
