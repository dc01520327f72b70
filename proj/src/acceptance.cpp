#include "walkrange/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "walkrange/analytic.hpp"
#include "walkrange/errors.hpp"
#include "walkrange/estimators.hpp"
#include "walkrange/report_io.hpp"

namespace walkrange {

namespace {

constexpr double kZ95 = 1.959963984540054;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}
std::string g6(double v) { return fmt("%.6g", v); }

struct Context {
  Tier tier;
  int threads;
  bool full() const { return tier == Tier::full; }
};

StatRequest stat(const std::string& token, const Group& g) { return StatRequest::parse(token, g); }

ExperimentPlan make_plan(const StepLaw& law, const std::vector<std::string>& stats, std::int64_t steps,
                         std::int64_t reps, const Context& ctx, std::uint64_t seed = kDefaultSeed) {
  ExperimentPlan p;
  p.spec = CocycleSpec::bernoulli(law);
  for (const auto& s : stats) p.stats.push_back(stat(s, law.group()));
  p.checkpoints = geometric_checkpoints(steps, std::min(1000.0, std::max(1.0, static_cast<double>(steps) / 64.0)), 1.5);
  p.reps = reps;
  p.seed = seed;
  p.threads = ctx.threads;
  p.experiment = "acceptance";
  return p;
}

EstimateReport checked_run(const ExperimentPlan& p) {
  auto r = run_experiment(p);
  if (!r.failures.empty()) throw std::runtime_error("trajectory failure: " + r.failures.front().message);
  return r;
}

// The planar SRW ensemble shared by the boundary, Folner and variance checks.
const EstimateReport& planar_report(const Context& ctx) {
  static std::optional<EstimateReport> cached;
  static Tier cached_tier = Tier::quick;
  if (!cached || cached_tier != ctx.tier) {
    const StepLaw law = StepLaw::simple(Group::lattice(2));
    auto p = make_plan(law, {"boundary", "folner:1,0"}, ctx.full() ? 1'000'000 : 100'000, ctx.full() ? 500 : 200, ctx);
    p.checkpoints = geometric_checkpoints(p.steps(), 1000.0, 1.5);
    // the Folner band and the variance scan start at n = 10^4
    const auto at = std::lower_bound(p.checkpoints.begin(), p.checkpoints.end(), 10'000);
    if (at != p.checkpoints.end() && *at != 10'000) p.checkpoints.insert(at, 10'000);
    p.keep_samples = true;
    cached = checked_run(p);
    cached_tier = ctx.tier;
  }
  return *cached;
}

CriterionResult c1_range_transient(const Context& ctx) {
  CriterionResult r{1, "range law, SRW Z^3", false, "", 0.0};
  const StepLaw law = StepLaw::simple(Group::lattice(3));
  const double q = 1.0 / green(law, zd({0, 0, 0})).value;
  const std::int64_t n = ctx.full() ? 1'000'000 : 100'000;
  auto p = make_plan(law, {"range"}, n, ctx.full() ? 100 : 20, ctx);
  p.checkpoints = {n};
  const auto rep = checked_run(p);
  const auto& row = rep.row(n, p.stats[0]);
  const double ratio = row.mean / static_cast<double>(n);
  r.pass = std::abs(ratio - q) <= 0.005;
  r.measured = "mean |R_n|/n = " + g6(ratio) + " (se " + g6(row.stderr_ / static_cast<double>(n)) + ") vs 1/G(0) = " +
               g6(q) + ", tolerance 0.005, n = " + std::to_string(n) + ", reps = " + std::to_string(p.reps);
  return r;
}

CriterionResult c2_green_escape(const Context& ctx) {
  CriterionResult r{2, "Green / escape identity, SRW Z^3", false, "", 0.0};
  const Group z3 = Group::lattice(3);
  const StepLaw law = StepLaw::simple(z3);
  const auto G = green_batch(law, {zd({0, 0, 0}), zd({1, 0, 0})});
  EscapeSettings s;
  s.horizon = ctx.full() ? 100'000 : 10'000;
  s.reps = ctx.full() ? 40'000 : 4'000;
  s.threads = ctx.threads;
  const auto e = escape_probability(law, {z3.identity(), GroupElement{zd({1, 0, 0})}}, s);
  const auto& q0 = e[0];
  const auto& q1 = e[1];
  // bracket widened by the 95% sampling interval
  const double lo0 = q0.low - kZ95 * q0.stderr_, hi0 = q0.high + kZ95 * q0.stderr_;
  const double lo1 = q1.low - kZ95 * q1.stderr_, hi1 = q1.high + kZ95 * q1.stderr_;
  // (1 - q(e1)) / q(id) and 1 / q(id) are decreasing in both arguments
  const double g1_lo = (1.0 - hi1) / hi0, g1_hi = (1.0 - lo1) / lo0;
  const double g0_lo = 1.0 / hi0, g0_hi = 1.0 / lo0;
  const bool ok1 = G[1].value >= 0.99 * g1_lo && G[1].value <= 1.01 * g1_hi;
  const bool ok0 = G[0].value >= 0.99 * g0_lo && G[0].value <= 1.01 * g0_hi;
  r.pass = ok0 && ok1;
  r.measured = "G(e1) = " + g6(G[1].value) + " vs (1-q(e1))/q in [" + g6(g1_lo) + ", " + g6(g1_hi) + "]; G(id) = " +
               g6(G[0].value) + " vs 1/q in [" + g6(g0_lo) + ", " + g6(g0_hi) + "]; q(id) = " + g6(q0.point) +
               ", q(e1) = " + g6(q1.point) + ", tail " + g6(q0.tail_bound) + " (" + q0.tail_method +
               "), tolerance 1% beyond the 95% bracket, H = " + std::to_string(s.horizon) +
               ", reps = " + std::to_string(s.reps);
  return r;
}

CriterionResult c3_boundary_bracket(const Context& ctx) {
  CriterionResult r{3, "boundary constant bracket, SRW Z^2", false, "", 0.0};
  const auto& rep = planar_report(ctx);
  const BoundaryConstant b = boundary_constant(rep);
  const double lo = std::pow(std::acos(-1.0), 2) / 2.0, hi = 2.0 * std::pow(std::acos(-1.0), 2);
  r.pass = b.value >= lo && b.value <= hi && b.drift < 0.10;
  r.measured = "C = " + g6(b.value) + " (se " + g6(b.stderr_) + ") in [" + g6(lo) + ", " + g6(hi) +
               "]; drift over the last three checkpoints " + g6(b.drift) + " < 0.1, n = " + g6(b.n) +
               ", reps = " + std::to_string(rep.rows.front().reps);
  return r;
}

CriterionResult c4_rotation(const Context& ctx) {
  CriterionResult r{4, "deterministic rotation cocycle", false, "", 0.0};
  ExperimentPlan p;
  p.spec = CocycleSpec::rotation(Rational::golden(), Rational{1, 2}, Rational{0, 1});
  p.stats = {stat("range", p.spec.group)};
  const std::int64_t n = ctx.full() ? 1'000'000 : 100'000;
  p.checkpoints = {n};
  p.reps = 1;
  p.threads = ctx.threads;
  const auto rep = checked_run(p);
  const double ratio = rep.row(n, p.stats[0]).mean / static_cast<double>(n);
  r.pass = std::abs(ratio - 0.5) <= 1e-3;
  r.measured = "|R_n|/n = " + fmt("%.9f", ratio) + " vs 1/2, tolerance 1e-3, theta = " + to_string(Rational::golden()) +
               ", n = " + std::to_string(n);
  return r;
}

CriterionResult c5_dichotomy_z(const Context& ctx) {
  CriterionResult r{5, "Folner dichotomy on Z", false, "", 0.0};
  const Group z1 = Group::lattice(1);
  const GroupElement one = zd({1});
  // P(X = 1) = 1
  const StepLaw shift = StepLaw::finite(z1, {{zd({1}), 1.0}});
  FolnerSettings s1;
  s1.steps = ctx.full() ? 100'000 : 10'000;
  s1.reps = 4;
  s1.escape_reps = 16;
  s1.threads = ctx.threads;
  const auto f1 = folner_limit(shift, one, s1);
  bool exact = true;
  for (std::size_t i = 0; i < f1.series.n.size(); ++i) exact = exact && f1.series.ratio[i] == 2.0 / f1.series.n[i];
  const bool ok1 = exact && f1.verdict() == Verdict::folner_consistent;
  // P(X = 2) = P(X = -1) = 1/2
  const StepLaw mixed = StepLaw::finite(z1, {{zd({2}), 0.5}, {zd({-1}), 0.5}});
  FolnerSettings s2;
  s2.steps = ctx.full() ? 100'000 : 20'000;
  s2.reps = ctx.full() ? 200 : 50;
  s2.escape_reps = ctx.full() ? 20'000 : 4'000;
  s2.escape_horizon = ctx.full() ? 10'000 : 2'000;
  s2.threads = ctx.threads;
  const auto f2 = folner_limit(mixed, one, s2);
  const bool ok2 = f2.verdict() == Verdict::not_folner && f2.path_a && f2.paths_agree;
  r.pass = ok1 && ok2;
  r.measured = "+1 law: ratio == 2/n at all " + std::to_string(f1.series.n.size()) + " checkpoints " +
               (exact ? "yes" : "no") + ", verdict " + to_string(f1.verdict()) + "; {2,-1} law: verdict " +
               to_string(f2.verdict()) + ", path B " + g6(f2.path_b) + " (se " + g6(f2.path_b_se) + "), path A " +
               (f2.path_a ? g6(*f2.path_a) : std::string("n/a")) + " (se " + g6(f2.path_a_se) + "), agree " +
               (f2.paths_agree ? "yes" : "no");
  return r;
}

CriterionResult c6_free_group(const Context& ctx) {
  CriterionResult r{6, "non-virtually-cyclic F2", false, "", 0.0};
  const Group f2 = Group(GroupKind::F2);
  const StepLaw law = StepLaw::simple(f2);
  const GroupElement a = word("a");
  FolnerSettings s;
  s.steps = ctx.full() ? 100'000 : 10'000;
  s.reps = ctx.full() ? 200 : 50;
  s.escape_reps = ctx.full() ? 20'000 : 4'000;
  s.escape_horizon = 1000;
  s.threads = ctx.threads;
  const auto f = folner_limit(law, a, s);
  EscapeSettings es;
  es.horizon = 200;
  es.reps = ctx.full() ? 40'000 : 10'000;
  es.threads = ctx.threads;
  const auto e = escape_probability(law, {f2.identity(), a}, es);
  auto near = [](const EscapeEstimate& x) {
    return std::abs(x.point - 2.0 / 3.0) <= 0.01 && std::abs(x.low - 2.0 / 3.0) <= 0.01;
  };
  r.pass = f.verdict() == Verdict::not_folner && f.path_b > 0.1 && near(e[0]) && near(e[1]);
  r.measured = "verdict " + to_string(f.verdict()) + ", limit (path B) " + g6(f.path_b) + " > 0.1, path A " +
               (f.path_a ? g6(*f.path_a) : std::string("n/a")) + "; q(id) = " + g6(e[0].point) + ", q(a) = " +
               g6(e[1].point) + " vs 2/3 +- 0.01 (tail " + g6(e[0].tail_bound) + ", " + e[0].tail_method + ")";
  return r;
}

CriterionResult c7_planar_folner(const Context& ctx) {
  CriterionResult r{7, "Folner consistency, SRW Z^2", false, "", 0.0};
  const auto& rep = planar_report(ctx);
  const StatRequest st = stat("folner:1,0", Group::lattice(2));
  FolnerSeries series;
  double lo = 1.0 / 0.0, hi = 0.0;
  const double n_lo = ctx.full() ? 1e4 : 1e3;
  for (const auto n : rep.checkpoints) {
    const auto& row = rep.row(n, st);
    series.n.push_back(static_cast<double>(n));
    series.ratio.push_back(row.mean);
    series.stderr_.push_back(row.stderr_);
    if (static_cast<double>(n) >= n_lo) {
      const double v = row.mean * std::log(static_cast<double>(n));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const auto d = classify_folner(series);
  r.pass = hi <= 3.0 * lo && d.verdict == Verdict::folner_consistent;
  r.measured = "ratio * log n in [" + g6(lo) + ", " + g6(hi) + "], band factor " + g6(hi / lo) +
               " <= 3 over n >= " + g6(n_lo) + "; verdict " + to_string(d.verdict) + " (top " + g6(d.top_ratio) +
               ", median " + g6(d.median_ratio) + ", extrapolated limit " + g6(d.limit) + ", slope " + g6(d.slope) + ")";
  return r;
}

CriterionResult c8_regular_variation(const Context& ctx) {
  CriterionResult r{8, "regular-variation index, zeta alpha = 1.5", false, "", 0.0};
  const StepLaw law = StepLaw::zeta(1.5);
  const std::int64_t n = ctx.full() ? 1'000'000 : 100'000;
  auto p = make_plan(law, {"noreturn"}, n, ctx.full() ? 10'000 : 2'000, ctx);
  p.checkpoints = geometric_checkpoints(n, 1000.0, 1.5);
  const auto rep = checked_run(p);
  const FitResult f = regular_variation_fit(rep.means(p.stats[0]));
  const double target = 1.0 / 1.5 - 1.0;
  r.pass = std::abs(f.index - target) <= 0.05;
  r.measured = "index " + g6(f.index) + " (uncertainty " + g6(f.uncertainty) + ") vs " + g6(target) +
               " +- 0.05 over n in [" + g6(f.n_min) + ", " + g6(f.n_max) + "], reps = " + std::to_string(p.reps);
  return r;
}

CriterionResult c9_heavy_tail(const Context& ctx) {
  CriterionResult r{9, "heavy-tail Folner decay, zeta alpha = 1.5", false, "", 0.0};
  const double alpha = 1.5;
  const StepLaw law = StepLaw::zeta(alpha);
  const std::int64_t n = ctx.full() ? 1'000'000 : 100'000;
  auto p = make_plan(law, {"bratio", "range", "vboundary:-1"}, n, ctx.full() ? 500 : 100, ctx);
  p.checkpoints = geometric_checkpoints(n, 1000.0, 1.5);
  p.keep_samples = true;
  const auto rep = checked_run(p);
  const FitResult fb = regular_variation_fit(rep.means(p.stats[0]));
  const double bound_b = 1.0 / alpha - 1.0 + 0.1;
  // |R_n| / n^{1/alpha - 0.05} above the threshold 1 at the top checkpoint
  const auto ranges = rep.sample(rep.checkpoints.size() - 1, 1);
  const double scale = std::pow(static_cast<double>(n), 1.0 / alpha - 0.05);
  std::size_t above = 0;
  for (double v : ranges) above += v / scale > 1.0 ? 1 : 0;
  const double frac = static_cast<double>(above) / static_cast<double>(ranges.size());
  const FitResult fv = regular_variation_fit(rep.means(p.stats[2]));
  const double bound_v = 2.0 / alpha - 1.0 + 0.1;
  r.pass = fb.index <= bound_b && frac >= 0.99 && fv.index <= bound_v;
  r.measured = "bratio index " + g6(fb.index) + " <= " + g6(bound_b) + "; fraction with |R_n|/n^" +
               g6(1.0 / alpha - 0.05) + " > 1: " + g6(frac) + " >= 0.99; |R_n \\ (R_n - 1)| index " + g6(fv.index) +
               " <= " + g6(bound_v) + ", n = " + std::to_string(n) + ", reps = " + std::to_string(p.reps);
  return r;
}

CriterionResult c10_variance(const Context& ctx) {
  CriterionResult r{10, "variance scaling, SRW Z^2", false, "", 0.0};
  const auto& rep = planar_report(ctx);
  const auto v = variance_scan(rep, ctx.full() ? 1e4 : 1e3, 0.0);
  const double med = median(v.normalized);
  r.pass = v.bounded;
  r.measured = "normalized variance last " + g6(v.normalized.back()) + " <= 2 x median " + g6(med) + " over n in [" +
               g6(v.n.front()) + ", " + g6(v.n.back()) + "]; deviation frequency at eps = 0.5: " +
               g6(v.deviation_frequency.back()) + " (Chebyshev " + g6(v.chebyshev_bound.back()) + ")";
  return r;
}

CriterionResult c11_green_decay(const Context&) {
  CriterionResult r{11, "Green decay at infinity, SRW Z^3", false, "", 0.0};
  const StepLaw law = StepLaw::simple(Group::lattice(3));
  std::vector<ZdPoint> pts;
  for (int k = 1; k <= 20; ++k) pts.push_back(zd({k, 0, 0}));
  const auto G = green_batch(law, pts);
  bool decreasing = true;
  for (std::size_t i = 1; i < G.size(); ++i) decreasing = decreasing && G[i].value < G[i - 1].value;
  r.pass = decreasing && G.back().value < G.front().value / 5.0;
  r.measured = std::string("strictly decreasing over k = 1..20: ") + (decreasing ? "yes" : "no") + "; G(e1) = " +
               g6(G.front().value) + ", G(20 e1) = " + g6(G.back().value) + " < G(e1)/5 = " + g6(G.front().value / 5.0);
  return r;
}

// ---------------------------------------------------------------------------
// property suite

using ElementSet = std::unordered_set<GroupElement, ElementHash>;

// Set statistics of one trajectory recomputed from scratch.
struct BruteStats {
  std::int64_t range = 0, boundary = 0;
  std::vector<std::int64_t> vboundary;
  std::int64_t minus_g = 0, minus_ginv = 0;
};

BruteStats brute(const ElementSet& R, const std::vector<GroupElement>& gens, const GroupElement& probe) {
  BruteStats b;
  b.range = static_cast<std::int64_t>(R.size());
  b.vboundary.assign(gens.size(), 0);
  const GroupElement pinv = inverse(probe);
  for (const auto& x : R) {
    bool edge = false;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (!R.count(multiply(x, gens[i]))) edge = true;
      // x in R \ R v  iff  x v^-1 not in R
      if (!R.count(multiply(x, inverse(gens[i])))) ++b.vboundary[i];
    }
    if (edge) ++b.boundary;
    if (!R.count(multiply(x, pinv))) ++b.minus_g;
    if (!R.count(multiply(x, probe))) ++b.minus_ginv;
  }
  return b;
}

std::string check_engine(const StepLaw& law, const GroupElement& probe, std::uint32_t trajectories, std::int64_t steps) {
  const Group& g = law.group();
  const auto gens = g.generators();
  TrajectoryPlan tp;
  tp.spec = CocycleSpec::bernoulli(law);
  std::vector<std::string> tokens{"range", "boundary", "bratio", "noreturn", "folner:" + to_string(probe),
                                  "bwd_range", "bwd_boundary", "bwd_folner:" + to_string(probe)};
  for (const auto& v : gens) tokens.push_back("vboundary:" + to_string(v));
  for (const auto& t : tokens) tp.stats.push_back(StatRequest::parse(t, g));
  tp.checkpoints = {1, 10, 100, 500, steps};
  tp.seed = 0xacce55ull;
  const std::size_t S = tp.stats.size();
  for (std::uint32_t t = 0; t < trajectories; ++t) {
    const auto fast = simulate_trajectory(tp, t);
    WalkStream walk(tp.spec, Omega{tp.seed, t, 0});
    ElementSet fwd, bwd;
    bool returned = false;
    std::size_t c = 0;
    for (std::int64_t n = 1; n <= steps; ++n) {
      const auto& x = walk.advance(Direction::forward);
      fwd.insert(x);
      returned = returned || is_identity(x);
      bwd.insert(walk.advance(Direction::backward));
      if (n != tp.checkpoints[c]) continue;
      const BruteStats f = brute(fwd, gens, probe), b = brute(bwd, gens, probe);
      std::vector<double> expect(S);
      expect[0] = static_cast<double>(f.range);
      expect[1] = static_cast<double>(f.boundary);
      expect[2] = static_cast<double>(f.boundary) / static_cast<double>(f.range);
      expect[3] = returned ? 0.0 : 1.0;
      expect[4] = static_cast<double>(f.minus_g + f.minus_ginv) / static_cast<double>(f.range);
      expect[5] = static_cast<double>(b.range);
      expect[6] = static_cast<double>(b.boundary);
      expect[7] = static_cast<double>(b.minus_g + b.minus_ginv) / static_cast<double>(b.range);
      for (std::size_t i = 0; i < gens.size(); ++i) expect[8 + i] = static_cast<double>(f.vboundary[i]);
      for (std::size_t s = 0; s < S; ++s) {
        if (fast[c * S + s] != expect[s]) {
          return law.token() + " on " + g.token() + ", trajectory " + std::to_string(t) + ", n = " + std::to_string(n) +
                 ", " + tp.stats[s].token() + ": engine " + g6(fast[c * S + s]) + " vs brute force " + g6(expect[s]);
        }
      }
      ++c;
    }
  }
  return "";
}

GroupElement random_element(const Group& g, CounterRng& rng) {
  const auto gens = g.generators();
  GroupElement x = g.identity();
  const auto len = rng.below(7);
  for (std::uint64_t i = 0; i < len; ++i) x = multiply(x, gens[rng.below(gens.size())]);
  if (g.is_lattice() || g.kind() == GroupKind::Heisenberg) {
    // occasional large coordinates
    if (rng.below(4) == 0) {
      for (int k = 0; k < 8; ++k) x = multiply(x, x);
    }
  }
  return x;
}

std::string check_axioms(const Group& g, int triples) {
  for (int i = 0; i < triples; ++i) {
    CounterRng rng(0xa110c8ull, static_cast<std::uint64_t>(i), static_cast<std::uint32_t>(g.kind()), 0);
    const auto a = random_element(g, rng), b = random_element(g, rng), c = random_element(g, rng);
    const auto e = g.identity();
    const bool ok = multiply(multiply(a, b), c) == multiply(a, multiply(b, c)) && multiply(a, e) == a &&
                    multiply(e, a) == a && is_identity(multiply(a, inverse(a))) &&
                    is_identity(multiply(inverse(a), a)) && inverse(inverse(a)) == a &&
                    inverse(multiply(a, b)) == multiply(inverse(b), inverse(a));
    if (!ok) return "group axioms fail on " + g.token() + " for " + to_string(a) + ", " + to_string(b) + ", " + to_string(c);
  }
  return "";
}

std::string report_text(const EstimateReport& rep) {
  std::ostringstream os;
  write_csv(rep, os);
  for (const auto& t : rep.samples) {
    for (double v : t) os << format_real(v) << ' ';
  }
  return os.str();
}

CriterionResult c12_properties(const Context& ctx) {
  CriterionResult r{12, "engine correctness properties", false, "", 0.0};
  std::vector<std::string> problems;
  const std::uint32_t trajectories = 100;
  const std::int64_t steps = 1000;
  const std::vector<std::pair<StepLaw, GroupElement>> cases{
      {StepLaw::simple(Group::lattice(1)), zd({2})},
      {StepLaw::simple(Group::lattice(2)), zd({1, 1})},
      {StepLaw::simple(Group::lattice(3)), zd({1, 0, -1})},
      {StepLaw::lazy(StepLaw::simple(Group::lattice(2)), 0.5), zd({1, 0})},
      {StepLaw::zeta(1.5), zd({1})},
      {StepLaw::simple(Group(GroupKind::F2)), word("ab")},
      {StepLaw::simple(Group(GroupKind::Heisenberg)), HeisPoint{1, 1, 0}},
  };
  for (const auto& [law, probe] : cases) {
    const auto msg = check_engine(law, probe, trajectories, steps);
    if (!msg.empty()) problems.push_back(msg);
  }
  const int triples = 10'000;
  for (auto k : {GroupKind::Z1, GroupKind::Z2, GroupKind::Z3, GroupKind::F2, GroupKind::Heisenberg}) {
    const auto msg = check_axioms(Group(k), triples);
    if (!msg.empty()) problems.push_back(msg);
  }
  // worker-count independence
  std::size_t compared = 0;
  for (const auto& law : {StepLaw::simple(Group::lattice(2)), StepLaw::simple(Group(GroupKind::F2))}) {
    const Group& g = law.group();
    auto p = make_plan(law, {"range", "boundary", "folner:" + to_string(g.generators()[0]), "noreturn", "bwd_range"},
                       ctx.full() ? 20'000 : 5'000, 64, ctx, 99);
    p.keep_samples = true;
    std::string first;
    for (int threads : {1, 2, 5}) {
      p.threads = threads;
      const auto text = report_text(checked_run(p));
      if (first.empty()) {
        first = text;
      } else if (text != first) {
        problems.push_back("report differs between worker counts on " + g.token());
      }
      ++compared;
    }
  }
  r.pass = problems.empty();
  r.measured = std::to_string(cases.size() * trajectories) + " trajectories x " + std::to_string(steps) +
               " steps against brute force on z1, z2, z3, f2, heis; " + std::to_string(5 * triples) +
               " axiom triples; " + std::to_string(compared) + " reports at 1, 2, 5 workers";
  if (!problems.empty()) r.measured += "; first problem: " + problems.front();
  return r;
}

using Check = std::function<CriterionResult(const Context&)>;

}  // namespace

Tier parse_tier(const std::string& token) {
  if (token == "quick") return Tier::quick;
  if (token == "full") return Tier::full;
  throw UsageError("unknown tier '" + token + "' (quick | full)");
}

std::string format_result(const CriterionResult& r) {
  return std::string(r.pass ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.title + ": " + r.measured + " (" +
         fmt("%.1f", r.seconds) + " s)";
}

std::vector<CriterionResult> run_acceptance(Tier tier, int threads, std::ostream& log, const std::vector<int>& only) {
  const Context ctx{tier, std::max(threads, 1)};
  const std::vector<Check> checks{c1_range_transient, c2_green_escape,      c3_boundary_bracket, c4_rotation,
                                  c5_dichotomy_z,     c6_free_group,        c7_planar_folner,    c8_regular_variation,
                                  c9_heavy_tail,      c10_variance,         c11_green_decay,     c12_properties};
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = checks[i](ctx);
    } catch (const std::exception& e) {
      r.id = id;
      r.title = "criterion " + std::to_string(id);
      r.pass = false;
      r.measured = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log << format_result(r) << std::endl;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace walkrange
