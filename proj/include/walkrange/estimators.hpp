#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "walkrange/cocycle.hpp"
#include "walkrange/simulation.hpp"
#include "walkrange/stats.hpp"
#include "walkrange/step_law.hpp"

namespace walkrange {

constexpr std::uint64_t kDefaultSeed = 20240531;

struct ExperimentPlan {
  CocycleSpec spec;
  std::vector<StatRequest> stats;
  std::vector<std::int64_t> checkpoints;
  std::int64_t reps = 1;
  std::uint64_t seed = kDefaultSeed;
  // truncation horizon for infinite-time events; 0 means the last checkpoint
  std::int64_t horizon = 0;
  int threads = 1;
  std::size_t site_cap = std::size_t{1} << 28;
  std::string experiment = "simulate";
  // keep every trajectory's values in the report
  bool keep_samples = false;

  std::int64_t steps() const { return checkpoints.empty() ? 0 : checkpoints.back(); }
  // Canonical text of everything that determines the results.
  std::string canonical() const;
  // FNV-1a of canonical(), hex.
  std::string hash() const;
};

struct EstimateRow {
  std::int64_t n = 0;
  std::string statistic;
  std::string element;
  double mean = 0.0;
  double variance = 0.0;
  double stderr_ = 0.0;
  std::int64_t reps = 0;
};

struct TrajectoryFailure {
  std::uint32_t trajectory = 0;
  std::string message;
};

struct EstimateReport {
  std::string experiment;
  std::string group;
  std::string law;
  std::uint64_t seed = 0;
  std::string plan_hash;
  std::vector<std::int64_t> checkpoints;
  std::vector<StatRequest> stats;
  // sorted by (n, statistic, element)
  std::vector<EstimateRow> rows;
  std::vector<TrajectoryFailure> failures;
  // samples[t][c * stats.size() + s] for successful trajectories, when kept
  std::vector<std::vector<double>> samples;

  const EstimateRow& row(std::int64_t n, const StatRequest& stat) const;
  // (n, mean) over all checkpoints for one statistic
  std::vector<std::pair<double, double>> means(const StatRequest& stat) const;
  // per-trajectory values of one statistic at checkpoint index c
  std::vector<double> sample(std::size_t c, std::size_t stat_index) const;
};

// Trajectories are independent; aggregation runs in trajectory order, so the
// report does not depend on plan.threads.
EstimateReport run_experiment(const ExperimentPlan& plan);

struct EscapeEstimate {
  GroupElement target;
  double point = 0.0;  // fraction avoiding the target up to H
  double stderr_ = 0.0;
  double low = 0.0;
  double high = 0.0;
  double tail_bound = 0.0;
  std::string tail_method;  // exact | local-clt | chernoff | spectral | heuristic
  std::int64_t horizon = 0;
  std::int64_t reps = 0;
};

struct EscapeSettings {
  std::int64_t horizon = 100000;
  std::int64_t reps = 10000;
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
};

// q(g) = P(S_n != g for all n >= 1), with bracket [q_H - tail, q_H].
std::vector<EscapeEstimate> escape_probability(const StepLaw& law, const std::vector<GroupElement>& targets,
                                               const EscapeSettings& settings);

// Upper bound (or estimate, see method) of sum_{n > H} P(S_n = g).
struct TailBound {
  double value = 0.0;
  std::string method;
};
TailBound escape_tail_bound(const StepLaw& law, const GroupElement& target, std::int64_t horizon);

enum class Verdict { folner_consistent, not_folner, inconclusive };
std::string to_string(Verdict v);

struct VerdictRule {
  double consistent_factor = 0.5;  // extrapolated limit below this times the median ratio
  double plateau_spread = 0.2;     // last three ratios within this relative spread
  double plateau_floor = 0.02;     // and above this level
};

struct FolnerSeries {
  std::vector<double> n;
  std::vector<double> ratio;
  std::vector<double> stderr_;
};

struct VerdictDetail {
  Verdict verdict = Verdict::inconclusive;
  double limit = 0.0;  // ratio = limit + b / log n over the upper half
  double limit_se = 0.0;
  double slope = 0.0;  // log-log slope over all checkpoints
  double median_ratio = 0.0;
  double top_ratio = 0.0;
};

VerdictDetail classify_folner(const FolnerSeries& s, const VerdictRule& rule = {});

struct FolnerSettings {
  std::int64_t steps = 100000;
  std::int64_t reps = 200;
  std::int64_t escape_reps = 10000;
  std::int64_t escape_horizon = 0;  // 0: same as steps
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
  bool path_a = true;
};

struct FolnerEstimate {
  FolnerSeries series;
  VerdictDetail detail;
  // path B: mean ratio at the top checkpoint
  double path_b = 0.0;
  double path_b_se = 0.0;
  // path A: escape product, for transient laws
  std::optional<double> path_a;
  double path_a_se = 0.0;
  double path_a_tail = 0.0;  // truncation allowance of path A
  bool paths_agree = true;

  Verdict verdict() const { return detail.verdict; }
};

// |R_n symdiff R_n g| / |R_n| and, for transient laws, the escape product
//   sum_{h in {g, g^-1}} P(S^- avoids h) P(S avoids id and h) / P(S avoids id).
FolnerEstimate folner_limit(const StepLaw& law, const GroupElement& probe, const FolnerSettings& settings);
FolnerEstimate folner_limit(const CocycleSpec& spec, const GroupElement& probe, const FolnerSettings& settings);

struct BoundaryConstant {
  double n = 0.0;
  double value = 0.0;  // mean |dR_n| log^2 n / n
  double stderr_ = 0.0;
  double drift = 0.0;  // (max - min) / last over the last three checkpoints
  std::vector<double> per_direction;  // same for each v-boundary
  std::vector<GroupElement> directions;
};

// Runs boundary and v-boundary statistics for every generator.
BoundaryConstant boundary_constant(const ExperimentPlan& plan);
// From an existing report that contains boundary (and optionally vboundary).
BoundaryConstant boundary_constant(const EstimateReport& report);

struct TabooDecay {
  std::vector<std::int64_t> n;
  std::vector<double> q;           // Q_O^n(x, y)
  std::vector<double> normalized;  // n log^2(n) Q
  double sup = 0.0;
  bool bounded = false;  // last normalized value <= 2 x median
  double lost_mass = 0.0;
};

// Forward recursion killing paths at O at interior times 1..n-1.
TabooDecay taboo_decay_check(const StepLaw& law, const std::vector<GroupElement>& taboo, const GroupElement& x,
                             const GroupElement& y, const std::vector<std::int64_t>& n_grid);

struct VarianceScan {
  std::vector<double> n;
  std::vector<double> variance;
  std::vector<double> normalized;  // Var log^5 n / (n^2 loglog n), n >= 16
  std::vector<double> deviation_frequency;  // P(| |dR| - mean | > eps mean)
  std::vector<double> chebyshev_bound;      // Var / (eps mean)^2
  double epsilon = 0.5;
  bool bounded = false;  // last normalized <= 2 x median normalized
};

VarianceScan variance_scan(const ExperimentPlan& plan);
VarianceScan variance_scan(const EstimateReport& report, double n_min = 16.0, double n_max = 0.0);

}  // namespace walkrange
