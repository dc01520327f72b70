#include "walkrange/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "walkrange/errors.hpp"

namespace walkrange {

namespace {

constexpr double kZ99 = 2.5758293035489004;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string law_token(const CocycleSpec& spec) { return spec.is_rotation() ? spec.base_token() : spec.law().token(); }

void validate_checkpoints(const std::vector<std::int64_t>& cps) {
  if (cps.empty()) throw UsageError("plan has no checkpoints");
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] <= 0 || (i > 0 && cps[i] <= cps[i - 1])) throw UsageError("checkpoints must be positive and increasing");
  }
}

}  // namespace

std::string ExperimentPlan::canonical() const {
  std::ostringstream os;
  os << "experiment=" << experiment << '\n'
     << "group=" << spec.group.token() << '\n'
     << "base=" << spec.base_token() << '\n'
     << "law=" << law_token(spec) << '\n'
     << "stats=";
  for (std::size_t i = 0; i < stats.size(); ++i) os << (i ? "," : "") << stats[i].token();
  os << "\ncheckpoints=";
  for (std::size_t i = 0; i < checkpoints.size(); ++i) os << (i ? "," : "") << checkpoints[i];
  os << "\nreps=" << reps << "\nseed=" << seed << "\nhorizon=" << horizon << "\nsite_cap=" << site_cap << '\n';
  return os.str();
}

std::string ExperimentPlan::hash() const { return hex64(fnv1a(canonical())); }

const EstimateRow& EstimateReport::row(std::int64_t n, const StatRequest& stat) const {
  for (const auto& r : rows) {
    if (r.n == n && r.statistic == stat.name() && r.element == stat.element_text()) return r;
  }
  throw DomainError("report has no row for " + stat.token() + " at n=" + std::to_string(n));
}

std::vector<std::pair<double, double>> EstimateReport::means(const StatRequest& stat) const {
  std::vector<std::pair<double, double>> out;
  for (const auto n : checkpoints) out.emplace_back(static_cast<double>(n), row(n, stat).mean);
  return out;
}

std::vector<double> EstimateReport::sample(std::size_t c, std::size_t stat_index) const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& t : samples) out.push_back(t[c * stats.size() + stat_index]);
  return out;
}

EstimateReport run_experiment(const ExperimentPlan& plan) {
  validate_checkpoints(plan.checkpoints);
  if (plan.reps <= 0) throw UsageError("reps must be positive");
  if (plan.reps > std::int64_t{1} << 32) throw UsageError("reps must fit the 32-bit trajectory index");
  if (plan.horizon < 0 || plan.horizon > plan.steps()) throw UsageError("horizon must lie in [1, steps]");
  TrajectoryPlan tp{plan.spec, plan.stats, plan.checkpoints, plan.seed, plan.site_cap};
  if (plan.horizon > 0 && !std::binary_search(tp.checkpoints.begin(), tp.checkpoints.end(), plan.horizon)) {
    tp.checkpoints.insert(std::upper_bound(tp.checkpoints.begin(), tp.checkpoints.end(), plan.horizon), plan.horizon);
  }

  EstimateReport rep;
  rep.experiment = plan.experiment;
  rep.group = plan.spec.group.token();
  rep.law = law_token(plan.spec);
  rep.seed = plan.seed;
  rep.plan_hash = plan.hash();
  rep.checkpoints = tp.checkpoints;
  rep.stats = plan.stats;

  const auto reps = static_cast<std::size_t>(plan.reps);
  std::vector<std::vector<double>> values(reps);
  const auto errors = parallel_for(reps, plan.threads, [&](std::size_t i) {
    values[i] = simulate_trajectory(tp, static_cast<std::uint32_t>(i));
  });

  std::vector<std::size_t> ok;
  for (std::size_t i = 0; i < reps; ++i) {
    if (errors[i].empty()) {
      ok.push_back(i);
    } else {
      rep.failures.push_back({static_cast<std::uint32_t>(i), errors[i]});
    }
  }
  const std::size_t S = plan.stats.size();
  std::vector<double> buf(ok.size());
  if (!ok.empty()) {
    for (std::size_t c = 0; c < tp.checkpoints.size(); ++c) {
      for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t k = 0; k < ok.size(); ++k) buf[k] = values[ok[k]][c * S + s];
        const Moments m = moments(buf);
        rep.rows.push_back({tp.checkpoints[c], plan.stats[s].name(), plan.stats[s].element_text(), m.mean, m.variance,
                            m.stderr_, m.count});
      }
    }
  }
  std::stable_sort(rep.rows.begin(), rep.rows.end(), [](const EstimateRow& a, const EstimateRow& b) {
    if (a.n != b.n) return a.n < b.n;
    if (a.statistic != b.statistic) return a.statistic < b.statistic;
    return a.element < b.element;
  });
  if (plan.keep_samples) {
    for (auto i : ok) rep.samples.push_back(std::move(values[i]));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// escape probabilities

namespace {

// Chernoff bound of sum_{n > H} P(<S_n, u> <= c) for a step whose projection
// Y = <X, u> has positive mean.
double chernoff_tail(const std::vector<std::pair<double, double>>& proj, double c, std::int64_t H) {
  double best = 1.0 / 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double lambda = std::pow(10.0, -5.0 + 7.0 * i / 400.0);
    double m = 0.0;
    for (const auto& [y, p] : proj) m += p * std::exp(-lambda * y);
    if (!(m < 1.0)) continue;
    const double logb = lambda * c + static_cast<double>(H + 1) * std::log(m) - std::log1p(-m);
    best = std::min(best, std::exp(logb));
  }
  return std::min(best, 1.0);
}

}  // namespace

TailBound escape_tail_bound(const StepLaw& law, const GroupElement& target, std::int64_t horizon) {
  const Group& g = law.group();
  if (!g.contains(target)) throw UsageError("target is not in group " + g.token());
  if (!law.has_finite_support()) return {0.0, "heuristic"};
  const auto atoms = law.atoms();
  if (g.is_lattice()) {
    const int d = g.lattice_dim();
    const auto& t = std::get<ZdPoint>(target);
    if (atoms.size() == 1) {
      const auto& x = std::get<ZdPoint>(atoms[0].element);
      // S_n = n x hits t at most once
      std::optional<std::int64_t> k;
      bool consistent = true;
      for (int i = 0; i < d && consistent; ++i) {
        if (x.x[i] == 0) {
          consistent = t.x[i] == 0;
        } else if (t.x[i] % x.x[i] != 0) {
          consistent = false;
        } else if (!k) {
          k = t.x[i] / x.x[i];
        } else {
          consistent = *k == t.x[i] / x.x[i];
        }
      }
      const bool later_hit = consistent && k && *k > horizon;
      return {later_hit ? 1.0 : 0.0, "exact"};
    }
    const auto diag = diagnose(law);
    if (diag.mean.norm() > 1e-13) {
      const Eigen::VectorXd u = diag.mean / diag.mean.norm();
      std::vector<std::pair<double, double>> proj;
      for (const auto& a : atoms) {
        const auto& x = std::get<ZdPoint>(a.element);
        double y = 0.0;
        for (int i = 0; i < d; ++i) y += u[i] * static_cast<double>(x.x[i]);
        proj.emplace_back(y, a.probability);
      }
      double c = 0.0;
      for (int i = 0; i < d; ++i) c += u[i] * static_cast<double>(t.x[i]);
      return {chernoff_tail(proj, c, horizon), "chernoff"};
    }
    if (d >= 3 && diag.support_rank == d) {
      const double det = diag.second_moment.determinant();
      const double h = static_cast<double>(horizon);
      const double v = std::pow(2.0 * std::numbers::pi, -0.5 * d) / std::sqrt(det) * std::pow(h, 1.0 - 0.5 * d) /
                       (0.5 * d - 1.0);
      return {v, "local-clt"};
    }
    return {0.0, "heuristic"};
  }
  if (g.kind() == GroupKind::F2) {
    // simple or lazy simple walk: P(S_n = g) <= rho^n with rho the spectral radius
    const StepLaw* base = &law;
    double hold = 0.0;
    if (law.kind() == LawKind::Lazy) {
      base = &law.inner();
      hold = 1.0 - law.rho();
    }
    if (base->kind() == LawKind::SimpleRW) {
      const double rho = hold + (1.0 - hold) * std::sqrt(3.0) / 2.0;
      return {std::pow(rho, static_cast<double>(horizon + 1)) / (1.0 - rho), "spectral"};
    }
  }
  return {0.0, "heuristic"};
}

std::vector<EscapeEstimate> escape_probability(const StepLaw& law, const std::vector<GroupElement>& targets,
                                               const EscapeSettings& settings) {
  if (settings.horizon <= 0) throw UsageError("horizon must be positive");
  if (settings.reps <= 0) throw UsageError("reps must be positive");
  AvoidancePlan plan{law, std::nullopt, targets, {}, settings.horizon, settings.seed};
  const auto reps = static_cast<std::size_t>(settings.reps);
  std::vector<AvoidanceRecord> rec(reps);
  const auto errors = parallel_for(reps, settings.threads, [&](std::size_t i) {
    rec[i] = simulate_avoidance(plan, static_cast<std::uint32_t>(i));
  });
  for (const auto& e : errors) {
    if (!e.empty()) throw std::runtime_error("escape simulation failed: " + e);
  }
  std::vector<EscapeEstimate> out;
  const std::int64_t half = settings.horizon / 2;
  for (std::size_t j = 0; j < targets.size(); ++j) {
    std::vector<double> avoid(reps);
    std::int64_t avoid_half = 0;
    for (std::size_t i = 0; i < reps; ++i) {
      const auto h = rec[i].forward_hit[j];
      avoid[i] = h < 0 ? 1.0 : 0.0;
      if (h < 0 || h > half) ++avoid_half;
    }
    const Moments m = moments(avoid);
    EscapeEstimate e;
    e.target = targets[j];
    e.point = m.mean;
    e.stderr_ = m.stderr_;
    e.horizon = settings.horizon;
    e.reps = settings.reps;
    const TailBound tb = escape_tail_bound(law, targets[j], settings.horizon);
    e.tail_method = tb.method;
    e.tail_bound = tb.method == "heuristic"
                       ? std::max(0.0, static_cast<double>(avoid_half) / static_cast<double>(reps) - m.mean)
                       : tb.value;
    e.high = e.point;
    e.low = std::max(0.0, e.point - e.tail_bound);
    out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Folner limits

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::folner_consistent: return "folner-consistent";
    case Verdict::not_folner: return "not-folner";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

VerdictDetail classify_folner(const FolnerSeries& s, const VerdictRule& rule) {
  VerdictDetail d;
  const std::size_t k = s.n.size();
  if (k < 3) return d;
  d.top_ratio = s.ratio.back();
  d.median_ratio = median(s.ratio);
  // upper half of the checkpoints, at least three points
  const std::size_t from = std::min(k / 2, k - 3);
  std::vector<double> x, y;
  for (std::size_t i = from; i < k; ++i) {
    x.push_back(1.0 / std::log(s.n[i]));
    y.push_back(s.ratio[i]);
  }
  const LinearFit lim = least_squares(x, y);
  d.limit = lim.intercept;
  d.limit_se = lim.intercept_se;
  bool positive = true;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < k; ++i) {
    positive = positive && s.ratio[i] > 0.0;
    lx.push_back(std::log(s.n[i]));
    ly.push_back(positive ? std::log(s.ratio[i]) : 0.0);
  }
  d.slope = positive ? least_squares(lx, ly).slope : 0.0;
  if (positive && d.slope < 0.0 &&
      (d.top_ratio < rule.consistent_factor * d.median_ratio || d.limit < rule.consistent_factor * d.median_ratio)) {
    d.verdict = Verdict::folner_consistent;
    return d;
  }
  const double a = s.ratio[k - 3], b = s.ratio[k - 2], c = s.ratio[k - 1];
  const double lo = std::min({a, b, c}), hi = std::max({a, b, c});
  if (lo > rule.plateau_floor && hi <= (1.0 + rule.plateau_spread) * lo) d.verdict = Verdict::not_folner;
  return d;
}

FolnerEstimate folner_limit(const StepLaw& law, const GroupElement& probe, const FolnerSettings& settings) {
  return folner_limit(CocycleSpec::bernoulli(law), probe, settings);
}

FolnerEstimate folner_limit(const CocycleSpec& spec, const GroupElement& probe, const FolnerSettings& settings) {
  if (!spec.group.contains(probe)) throw UsageError("probe is not in group " + spec.group.token());
  FolnerEstimate est;
  ExperimentPlan plan;
  plan.spec = spec;
  plan.experiment = "folner";
  StatRequest st;
  st.kind = StatKind::folner;
  st.element = probe;
  plan.stats = {st};
  const double n0 = std::max(1.0, std::min(1000.0, static_cast<double>(settings.steps) / 64.0));
  plan.checkpoints = geometric_checkpoints(settings.steps, n0, 1.5);
  plan.reps = settings.reps;
  plan.seed = settings.seed;
  plan.threads = settings.threads;
  const auto report = run_experiment(plan);
  if (!report.failures.empty()) throw std::runtime_error("folner run failed: " + report.failures.front().message);
  for (const auto n : report.checkpoints) {
    const auto& r = report.row(n, st);
    est.series.n.push_back(static_cast<double>(n));
    est.series.ratio.push_back(r.mean);
    est.series.stderr_.push_back(r.stderr_);
  }
  est.detail = classify_folner(est.series);
  est.path_b = est.series.ratio.back();
  est.path_b_se = est.series.stderr_.back();

  if (!settings.path_a || spec.is_rotation()) return est;
  const StepLaw& law = spec.law();
  if (diagnose(law).transience != Transience::transient) return est;
  if (is_identity(probe)) {
    est.path_a = 0.0;
    return est;
  }
  const GroupElement id = spec.group.identity();
  const GroupElement ginv = inverse(probe);
  const std::int64_t H = settings.escape_horizon > 0 ? settings.escape_horizon : settings.steps;
  AvoidancePlan ap{law, std::nullopt, {id, probe, ginv}, {probe, ginv}, H, settings.seed ^ 0x5f0e4e7ull};
  const auto reps = static_cast<std::size_t>(settings.escape_reps);
  std::vector<AvoidanceRecord> rec(reps);
  const auto errors = parallel_for(reps, settings.threads, [&](std::size_t i) {
    rec[i] = simulate_avoidance(ap, static_cast<std::uint32_t>(i));
  });
  for (const auto& e : errors) {
    if (!e.empty()) throw std::runtime_error("escape simulation failed: " + e);
  }
  // path A at horizon h
  auto path_a_at = [&](std::int64_t h, double* se) {
    auto avoided = [h](std::int64_t t) { return t < 0 || t > h; };
    double total = 0.0, var_sum = 0.0;
    double n_id = 0.0;
    for (const auto& r : rec) n_id += avoided(r.forward_hit[0]) ? 1.0 : 0.0;
    for (int which = 0; which < 2; ++which) {
      double back = 0.0, both = 0.0;
      for (const auto& r : rec) {
        back += avoided(r.backward_hit[static_cast<std::size_t>(which)]) ? 1.0 : 0.0;
        both += avoided(r.forward_hit[0]) && avoided(r.forward_hit[static_cast<std::size_t>(1 + which)]) ? 1.0 : 0.0;
      }
      const double N = static_cast<double>(reps);
      const double pb = back / N;
      const double cond = n_id > 0.0 ? both / n_id : 0.0;
      total += pb * cond;
      const double vb = pb * (1.0 - pb) / N;
      const double vc = n_id > 0.0 ? cond * (1.0 - cond) / n_id : 0.0;
      var_sum += std::sqrt(cond * cond * vb + pb * pb * vc);
    }
    if (se) *se = var_sum;
    return total;
  };
  est.path_a = path_a_at(H, &est.path_a_se);
  double tails = 0.0;
  bool heuristic = false;
  for (const auto& t : {id, probe, ginv}) {
    const auto tb = escape_tail_bound(law, t, H);
    heuristic = heuristic || tb.method == "heuristic";
    tails += tb.value;
  }
  est.path_a_tail = heuristic ? std::abs(*est.path_a - path_a_at(H / 2, nullptr)) : 2.0 * tails;
  // finite-n allowance of path B: movement over the last checkpoint step
  const std::size_t k = est.series.ratio.size();
  const double b_drift = k >= 2 ? std::abs(est.series.ratio[k - 1] - est.series.ratio[k - 2]) : 0.0;
  const double combined = kZ99 * std::hypot(est.path_a_se, est.path_b_se) + est.path_a_tail + b_drift;
  est.paths_agree = std::abs(*est.path_a - est.path_b) <= combined;
  return est;
}

// ---------------------------------------------------------------------------
// boundary constant

BoundaryConstant boundary_constant(const ExperimentPlan& plan) {
  if (!plan.spec.is_rotation() && diagnose(plan.spec.law()).transience == Transience::transient) {
    throw DomainError("boundary constant needs a recurrent law");
  }
  ExperimentPlan p = plan;
  p.experiment = "boundary";
  StatRequest b;
  b.kind = StatKind::boundary;
  p.stats = {b};
  for (const auto& v : plan.spec.group.generators()) {
    StatRequest s;
    s.kind = StatKind::vboundary;
    s.element = v;
    p.stats.push_back(s);
  }
  return boundary_constant(run_experiment(p));
}

BoundaryConstant boundary_constant(const EstimateReport& report) {
  const StatRequest* bstat = nullptr;
  for (const auto& s : report.stats) {
    if (s.kind == StatKind::boundary && !s.backward) bstat = &s;
  }
  if (!bstat) throw DomainError("report has no boundary statistic");
  if (report.rows.empty()) throw DomainError("report has no rows");
  auto scaled = [](double n, double v) { return v * std::log(n) * std::log(n) / n; };
  BoundaryConstant out;
  const auto& cps = report.checkpoints;
  const double n = static_cast<double>(cps.back());
  const auto& top = report.row(cps.back(), *bstat);
  out.n = n;
  out.value = scaled(n, top.mean);
  out.stderr_ = scaled(n, top.stderr_);
  const std::size_t k = cps.size();
  std::vector<double> last;
  for (std::size_t i = k >= 3 ? k - 3 : 0; i < k; ++i) {
    last.push_back(scaled(static_cast<double>(cps[i]), report.row(cps[i], *bstat).mean));
  }
  out.drift = (*std::max_element(last.begin(), last.end()) - *std::min_element(last.begin(), last.end())) /
              std::abs(last.back());
  for (const auto& s : report.stats) {
    if (s.kind != StatKind::vboundary || s.backward) continue;
    out.directions.push_back(*s.element);
    out.per_direction.push_back(scaled(n, report.row(cps.back(), s).mean));
  }
  return out;
}

// ---------------------------------------------------------------------------
// taboo decay

TabooDecay taboo_decay_check(const StepLaw& law, const std::vector<GroupElement>& taboo, const GroupElement& x,
                             const GroupElement& y, const std::vector<std::int64_t>& n_grid) {
  const Group& g = law.group();
  if (!g.is_lattice() || g.lattice_dim() > 2) throw UnsupportedError("taboo recursion supports Z and Z^2");
  if (!law.has_finite_support()) throw UnsupportedError("taboo recursion needs a finite-support law");
  if (n_grid.empty()) throw UsageError("empty n grid");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] <= 0 || (i > 0 && n_grid[i] <= n_grid[i - 1])) throw UsageError("n grid must be increasing");
  }
  const int d = g.lattice_dim();
  const auto atoms = law.atoms();
  const auto diag = diagnose(law);
  const double lam = diag.second_moment.eigenvalues().real().maxCoeff();
  const std::int64_t nmax = n_grid.back();
  std::int64_t reach = 0;
  for (const auto& a : atoms) {
    const auto& p = std::get<ZdPoint>(a.element);
    for (int i = 0; i < d; ++i) reach = std::max<std::int64_t>(reach, std::abs(p.x[i]));
  }
  auto coord = [&](const GroupElement& e, int i) { return std::get<ZdPoint>(e).x[static_cast<std::size_t>(i)]; };
  std::int64_t offset = 0;
  for (int i = 0; i < d; ++i) offset = std::max({offset, std::abs(coord(x, i)), std::abs(coord(y, i))});
  for (const auto& o : taboo) {
    if (!g.contains(o)) throw UsageError("taboo element not in group");
  }
  const auto radius = std::min<std::int64_t>(
      static_cast<std::int64_t>(std::ceil(7.0 * std::sqrt(static_cast<double>(nmax) * std::max(lam, 1e-12)))) + offset +
          reach,
      nmax * reach + offset);
  const std::int64_t W = 2 * radius + 1;
  const std::int64_t cells = d == 1 ? W : W * W;
  if (cells > (std::int64_t{1} << 28)) throw UnsupportedError("taboo window too large; shorten the n grid");
  auto idx = [&](std::int64_t a, std::int64_t b) { return (a + radius) + (d == 2 ? (b + radius) * W : 0); };
  std::vector<double> cur(static_cast<std::size_t>(cells), 0.0), nxt(cur.size(), 0.0);
  std::vector<std::int64_t> kill;
  for (const auto& o : taboo) {
    const auto a = coord(o, 0), b = d == 2 ? coord(o, 1) : 0;
    if (std::abs(a) <= radius && std::abs(b) <= radius) kill.push_back(idx(a, b));
  }
  struct Move {
    std::int64_t dx, dy;
    double p;
  };
  std::vector<Move> moves;
  for (const auto& a : atoms) moves.push_back({coord(a.element, 0), d == 2 ? coord(a.element, 1) : 0, a.probability});
  cur[static_cast<std::size_t>(idx(coord(x, 0), d == 2 ? coord(x, 1) : 0))] = 1.0;
  const std::int64_t target = idx(coord(y, 0), d == 2 ? coord(y, 1) : 0);
  // active box grows by `reach` per step
  std::int64_t lo0 = coord(x, 0), hi0 = lo0, lo1 = d == 2 ? coord(x, 1) : 0, hi1 = lo1;
  TabooDecay out;
  CompensatedSum lost;
  std::size_t next_grid = 0;
  for (std::int64_t n = 1; n <= nmax; ++n) {
    if (n >= 2) {
      for (auto k : kill) cur[static_cast<std::size_t>(k)] = 0.0;
    }
    const std::int64_t nlo0 = std::max(lo0 - reach, -radius), nhi0 = std::min(hi0 + reach, radius);
    const std::int64_t nlo1 = d == 2 ? std::max(lo1 - reach, -radius) : 0, nhi1 = d == 2 ? std::min(hi1 + reach, radius) : 0;
    for (std::int64_t b = nlo1; b <= nhi1; ++b) {
      for (std::int64_t a = nlo0; a <= nhi0; ++a) nxt[static_cast<std::size_t>(idx(a, b))] = 0.0;
    }
    for (std::int64_t b = lo1; b <= hi1; ++b) {
      for (std::int64_t a = lo0; a <= hi0; ++a) {
        const double v = cur[static_cast<std::size_t>(idx(a, b))];
        if (v == 0.0) continue;
        for (const auto& m : moves) {
          const std::int64_t na = a + m.dx, nb = b + m.dy;
          if (std::abs(na) > radius || std::abs(nb) > radius) {
            lost.add(v * m.p);
            continue;
          }
          nxt[static_cast<std::size_t>(idx(na, nb))] += v * m.p;
        }
      }
    }
    for (std::int64_t b = lo1; b <= hi1; ++b) {
      for (std::int64_t a = lo0; a <= hi0; ++a) cur[static_cast<std::size_t>(idx(a, b))] = 0.0;
    }
    lo0 = nlo0;
    hi0 = nhi0;
    lo1 = nlo1;
    hi1 = nhi1;
    std::swap(cur, nxt);
    if (n == n_grid[next_grid]) {
      const double q = cur[static_cast<std::size_t>(target)];
      const double ln = std::log(static_cast<double>(n));
      out.n.push_back(n);
      out.q.push_back(q);
      out.normalized.push_back(static_cast<double>(n) * ln * ln * q);
      ++next_grid;
    }
  }
  out.lost_mass = lost.value();
  out.sup = *std::max_element(out.normalized.begin(), out.normalized.end());
  out.bounded = out.normalized.back() <= 2.0 * median(out.normalized);
  return out;
}

// ---------------------------------------------------------------------------
// variance scan

VarianceScan variance_scan(const ExperimentPlan& plan) {
  if (plan.reps < 200) throw DomainError("variance scan needs reps >= 200");
  ExperimentPlan p = plan;
  p.experiment = "variance";
  StatRequest b;
  b.kind = StatKind::boundary;
  p.stats = {b};
  p.keep_samples = true;
  return variance_scan(run_experiment(p));
}

VarianceScan variance_scan(const EstimateReport& report, double n_min, double n_max) {
  std::size_t bi = report.stats.size();
  for (std::size_t s = 0; s < report.stats.size(); ++s) {
    if (report.stats[s].kind == StatKind::boundary && !report.stats[s].backward) bi = s;
  }
  if (bi == report.stats.size()) throw DomainError("report has no boundary statistic");
  VarianceScan out;
  for (std::size_t c = 0; c < report.checkpoints.size(); ++c) {
    const double n = static_cast<double>(report.checkpoints[c]);
    if (n < std::max(n_min, 16.0) || (n_max > 0.0 && n > n_max)) continue;
    const auto& r = report.row(report.checkpoints[c], report.stats[bi]);
    const double ln = std::log(n);
    out.n.push_back(n);
    out.variance.push_back(r.variance);
    out.normalized.push_back(r.variance * std::pow(ln, 5) / (n * n * std::log(ln)));
    if (!report.samples.empty()) {
      const auto xs = report.sample(c, bi);
      std::int64_t far = 0;
      for (double v : xs) far += std::abs(v - r.mean) > out.epsilon * r.mean ? 1 : 0;
      out.deviation_frequency.push_back(static_cast<double>(far) / static_cast<double>(xs.size()));
      const double em = out.epsilon * r.mean;
      out.chebyshev_bound.push_back(em > 0.0 ? r.variance / (em * em) : 1.0 / 0.0);
    }
  }
  if (out.normalized.empty()) throw DomainError("no checkpoints in the variance range");
  out.bounded = out.normalized.back() <= 2.0 * median(out.normalized);
  return out;
}

}  // namespace walkrange
