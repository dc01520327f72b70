#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "walkrange/cocycle.hpp"
#include "walkrange/group.hpp"
#include "walkrange/step_law.hpp"

namespace walkrange {

enum class StatKind {
  range,      // |R_n|
  boundary,   // |dR_n|
  bratio,     // |dR_n| / |R_n|
  vboundary,  // |R_n \ (R_n v)|
  folner,     // |R_n symdiff R_n g| / |R_n|
  noreturn,   // 1{S_k != id for 1 <= k <= n}
};

struct StatRequest {
  StatKind kind = StatKind::range;
  std::optional<GroupElement> element;
  // statistic of the backward walk S^(-)
  bool backward = false;

  // range | boundary | bratio | noreturn | vboundary:<v> | folner:<g>, with
  // a bwd_ prefix for the backward walk.
  static StatRequest parse(std::string_view token, const Group& g);
  std::string name() const;      // token without the element
  std::string element_text() const;  // element literal or empty
  std::string token() const;
};

// n_k = ceil(n0 r^k) below steps, then steps itself.
std::vector<std::int64_t> geometric_checkpoints(std::int64_t steps, double n0 = 1000.0, double ratio = 1.5);

struct TrajectoryPlan {
  CocycleSpec spec;
  std::vector<StatRequest> stats;
  std::vector<std::int64_t> checkpoints;  // increasing, last = steps
  std::uint64_t seed = 0;
  // abort a trajectory whose visited set would exceed this many sites
  std::size_t site_cap = std::size_t{1} << 28;
};

// Values[c * stats.size() + s] for one trajectory.
std::vector<double> simulate_trajectory(const TrajectoryPlan& plan, std::uint32_t trajectory);

// First-hit times of target sets by a forward walk started at `start` and by
// the backward walk S^(-) started at the identity.
struct AvoidancePlan {
  StepLaw law;
  std::optional<GroupElement> start;
  std::vector<GroupElement> forward_targets;
  std::vector<GroupElement> backward_targets;
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
};

struct AvoidanceRecord {
  // first k in [1, horizon] with S_k = target, or -1
  std::vector<std::int64_t> forward_hit;
  std::vector<std::int64_t> backward_hit;
};

AvoidanceRecord simulate_avoidance(const AvoidancePlan& plan, std::uint32_t trajectory);

int default_threads();

// Runs body(i) for i in [0, count) on `threads` workers. Exceptions are
// captured per index; the returned vector has an empty string where body
// succeeded.
std::vector<std::string> parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace walkrange
