#include "walkrange/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <thread>

#include "walkrange/errors.hpp"
#include "walkrange/range.hpp"

namespace walkrange {

StatRequest StatRequest::parse(std::string_view token, const Group& g) {
  StatRequest r;
  std::string_view t = token;
  if (t.rfind("bwd_", 0) == 0) {
    r.backward = true;
    t.remove_prefix(4);
  }
  const auto colon = t.find(':');
  const std::string_view head = t.substr(0, colon);
  const bool has_arg = colon != std::string_view::npos;
  if (head == "range") {
    r.kind = StatKind::range;
  } else if (head == "boundary") {
    r.kind = StatKind::boundary;
  } else if (head == "bratio") {
    r.kind = StatKind::bratio;
  } else if (head == "noreturn") {
    r.kind = StatKind::noreturn;
  } else if (head == "vboundary") {
    r.kind = StatKind::vboundary;
  } else if (head == "folner") {
    r.kind = StatKind::folner;
  } else {
    throw UsageError("unknown statistic '" + std::string(token) + "'");
  }
  const bool wants_arg = r.kind == StatKind::vboundary || r.kind == StatKind::folner;
  if (wants_arg != has_arg) {
    throw UsageError(wants_arg ? "statistic '" + std::string(token) + "' needs an element"
                               : "statistic '" + std::string(token) + "' takes no element");
  }
  if (has_arg) r.element = g.parse_element(t.substr(colon + 1));
  return r;
}

std::string StatRequest::name() const {
  std::string base;
  switch (kind) {
    case StatKind::range: base = "range"; break;
    case StatKind::boundary: base = "boundary"; break;
    case StatKind::bratio: base = "bratio"; break;
    case StatKind::vboundary: base = "vboundary"; break;
    case StatKind::folner: base = "folner"; break;
    case StatKind::noreturn: base = "noreturn"; break;
  }
  return backward ? "bwd_" + base : base;
}

std::string StatRequest::element_text() const { return element ? to_string(*element) : std::string(); }

std::string StatRequest::token() const {
  return element ? name() + ":" + element_text() : name();
}

std::vector<std::int64_t> geometric_checkpoints(std::int64_t steps, double n0, double ratio) {
  if (steps <= 0) throw UsageError("steps must be positive");
  if (!(n0 >= 1.0) || !(ratio > 1.0)) throw UsageError("checkpoint schedule needs n0 >= 1 and ratio > 1");
  std::vector<std::int64_t> out;
  for (int k = 0;; ++k) {
    const auto n = static_cast<std::int64_t>(std::ceil(n0 * std::pow(ratio, k) - 1e-9));
    if (n >= steps) break;
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  out.push_back(steps);
  return out;
}

namespace {

// Per-direction bookkeeping shared by the lattice and free-group runners.
struct StatLayout {
  BoundarySpec spec;
  bool needs_core = false;
  // for each requested stat of this direction: (stat index, test index)
  std::vector<std::pair<std::size_t, std::size_t>> slots;
};

StatLayout layout_for(const TrajectoryPlan& plan, bool backward) {
  StatLayout L;
  L.spec.boundary = false;
  std::vector<std::size_t> vt_index, probe_index;
  for (std::size_t s = 0; s < plan.stats.size(); ++s) {
    const auto& st = plan.stats[s];
    if (st.backward != backward) continue;
    std::size_t test = 0;
    switch (st.kind) {
      case StatKind::boundary:
      case StatKind::bratio:
        L.spec.boundary = true;
        L.needs_core = true;
        break;
      case StatKind::range:
        L.needs_core = true;
        break;
      case StatKind::vboundary:
        test = L.spec.vtests.size();
        L.spec.vtests.push_back(*st.element);
        L.needs_core = true;
        break;
      case StatKind::folner:
        test = L.spec.probes.size();
        L.spec.probes.push_back(*st.element);
        L.needs_core = true;
        break;
      case StatKind::noreturn:
        break;
    }
    L.slots.emplace_back(s, test);
  }
  return L;
}

template <class Core>
void record(const TrajectoryPlan& plan, const StatLayout& L, const Core* core, bool returned, std::size_t c,
            std::vector<double>& out) {
  const std::size_t ns = plan.stats.size();
  const std::size_t nv = L.spec.vtests.size();
  for (const auto& [s, test] : L.slots) {
    double v = 0.0;
    switch (plan.stats[s].kind) {
      case StatKind::range: v = static_cast<double>(core->range()); break;
      case StatKind::boundary: v = static_cast<double>(core->boundary()); break;
      case StatKind::bratio:
        v = static_cast<double>(core->boundary()) / static_cast<double>(core->range());
        break;
      case StatKind::vboundary: v = static_cast<double>(core->count(test)); break;
      case StatKind::folner: {
        const std::size_t i = nv + 2 * test;
        v = static_cast<double>(core->count(i) + core->count(i + 1)) / static_cast<double>(core->range());
        break;
      }
      case StatKind::noreturn: v = returned ? 0.0 : 1.0; break;
    }
    out[c * ns + s] = v;
  }
}

Coord lattice_inverse(GroupKind kind, const Coord& u) {
  Coord r{checked_neg(u[0]), checked_neg(u[1]), checked_neg(u[2])};
  if (kind == GroupKind::Heisenberg) r[2] = checked_add(r[2], checked_mul(u[0], u[1]));
  return r;
}

struct LatticeDirection {
  StatLayout layout;
  std::unique_ptr<LatticeSpace> space;
  std::unique_ptr<RangeCore<LatticeSpace>> core;
  Coord pos{0, 0, 0};
  bool returned = false;
  bool active = false;

  // nothing left to track: only no-return statistics, and the walk returned
  bool returned_only() const { return !active || (!core && returned); }
};

std::vector<double> run_lattice(const TrajectoryPlan& plan, std::uint32_t traj) {
  const Group& group = plan.spec.group;
  const GroupKind kind = group.kind();
  const bool rotation = plan.spec.is_rotation();
  std::vector<double> out(plan.checkpoints.size() * plan.stats.size(), 0.0);
  LatticeDirection dir[2];
  for (int b = 0; b < 2; ++b) {
    auto& D = dir[b];
    D.layout = layout_for(plan, b == 1);
    D.active = !D.layout.slots.empty();
    D.space = std::make_unique<LatticeSpace>(kind, 1u << 12);
    if (D.layout.needs_core) {
      D.core = std::make_unique<RangeCore<LatticeSpace>>(*D.space, make_neighbors<LatticeSpace>(group, D.layout.spec),
                                                         make_tests<LatticeSpace>(D.layout.spec));
    }
  }
  std::optional<RotationOrbit> fwd_orbit, bwd_orbit;
  if (rotation) {
    fwd_orbit.emplace(plan.spec.rotation_base(), 0);
    bwd_orbit.emplace(plan.spec.rotation_base(), -1);
  }
  const StepLaw* law = rotation ? nullptr : &plan.spec.law();
  RawStep raw;
  std::size_t c = 0;
  const std::int64_t N = plan.checkpoints.back();
  for (std::int64_t n = 1; n <= N; ++n) {
    for (int b = 0; b < 2; ++b) {
      auto& D = dir[b];
      if (!D.active) continue;
      Coord u{0, 0, 0};
      if (rotation) {
        u[0] = (b == 0 ? fwd_orbit->next() : bwd_orbit->prev()) ? 1 : 0;
      } else {
        CounterRng rng(plan.seed, static_cast<std::uint64_t>(n - 1), traj, static_cast<std::uint32_t>(b));
        law->sample_raw(rng, raw);
        u = raw.x;
      }
      if (b == 1) u = lattice_inverse(kind, u);
      D.pos = D.space->multiply(D.pos, u);
      if (D.core) D.core->insert(D.pos);
      if (D.pos[0] == 0 && D.pos[1] == 0 && D.pos[2] == 0) D.returned = true;
    }
    if (dir[0].returned_only() && dir[1].returned_only()) return out;  // later values are all 0
    if (n == plan.checkpoints[c]) {
      for (int b = 0; b < 2; ++b) {
        auto& D = dir[b];
        if (!D.active) continue;
        if (D.space->size() > plan.site_cap) throw std::runtime_error("visited-set cap exceeded");
        record(plan, D.layout, D.core.get(), D.returned, c, out);
      }
      ++c;
    }
  }
  return out;
}

struct FreeDirection {
  StatLayout layout;
  std::unique_ptr<FreeTrie> trie;
  std::unique_ptr<FreeSpace> space;
  std::unique_ptr<RangeCore<FreeSpace>> core;
  FreeTrie::Node pos = 0;
  bool returned = false;
  bool active = false;

  // nothing left to track: only no-return statistics, and the walk returned
  bool returned_only() const { return !active || (!core && returned); }
};

std::vector<double> run_free(const TrajectoryPlan& plan, std::uint32_t traj) {
  const Group& group = plan.spec.group;
  std::vector<double> out(plan.checkpoints.size() * plan.stats.size(), 0.0);
  FreeDirection dir[2];
  for (int b = 0; b < 2; ++b) {
    auto& D = dir[b];
    D.layout = layout_for(plan, b == 1);
    D.active = !D.layout.slots.empty();
    D.trie = std::make_unique<FreeTrie>();
    D.space = std::make_unique<FreeSpace>(*D.trie);
    if (D.layout.needs_core) {
      D.core = std::make_unique<RangeCore<FreeSpace>>(*D.space, make_neighbors<FreeSpace>(group, D.layout.spec),
                                                      make_tests<FreeSpace>(D.layout.spec));
    }
  }
  const StepLaw& law = plan.spec.law();
  RawStep raw;
  std::size_t c = 0;
  const std::int64_t N = plan.checkpoints.back();
  for (std::int64_t n = 1; n <= N; ++n) {
    for (int b = 0; b < 2; ++b) {
      auto& D = dir[b];
      if (!D.active) continue;
      CounterRng rng(plan.seed, static_cast<std::uint64_t>(n - 1), traj, static_cast<std::uint32_t>(b));
      law.sample_raw(rng, raw);
      if (b == 0) {
        for (int i = 0; i < raw.length; ++i) D.pos = D.trie->step(D.pos, raw.letters[i]);
      } else {
        for (int i = raw.length; i > 0; --i) D.pos = D.trie->step(D.pos, inverse(raw.letters[i - 1]));
      }
      if (D.core) D.core->insert(D.pos);
      if (D.pos == D.trie->root()) D.returned = true;
    }
    if (dir[0].returned_only() && dir[1].returned_only()) return out;  // later values are all 0
    if (n == plan.checkpoints[c]) {
      for (int b = 0; b < 2; ++b) {
        auto& D = dir[b];
        if (!D.active) continue;
        if (D.trie->node_count() > plan.site_cap) throw std::runtime_error("visited-set cap exceeded");
        record(plan, D.layout, D.core.get(), D.returned, c, out);
      }
      ++c;
    }
  }
  return out;
}

}  // namespace

std::vector<double> simulate_trajectory(const TrajectoryPlan& plan, std::uint32_t trajectory) {
  if (plan.checkpoints.empty()) throw UsageError("plan has no checkpoints");
  for (std::size_t i = 0; i < plan.checkpoints.size(); ++i) {
    if (plan.checkpoints[i] <= 0 || (i > 0 && plan.checkpoints[i] <= plan.checkpoints[i - 1])) {
      throw UsageError("checkpoints must be positive and increasing");
    }
  }
  if (plan.spec.group.kind() == GroupKind::F2) return run_free(plan, trajectory);
  return run_lattice(plan, trajectory);
}

namespace {

AvoidanceRecord avoid_lattice(const AvoidancePlan& plan, std::uint32_t traj) {
  const GroupKind kind = plan.law.group().kind();
  LatticeSpace arith(kind, 16);
  AvoidanceRecord rec;
  rec.forward_hit.assign(plan.forward_targets.size(), -1);
  rec.backward_hit.assign(plan.backward_targets.size(), -1);
  RawStep raw;
  for (int b = 0; b < 2; ++b) {
    const auto& targets = b == 0 ? plan.forward_targets : plan.backward_targets;
    auto& hits = b == 0 ? rec.forward_hit : rec.backward_hit;
    if (targets.empty()) continue;
    std::vector<Coord> t;
    for (const auto& g : targets) t.push_back(LatticeSpace::shift_of(g));
    Coord pos{0, 0, 0};
    if (b == 0 && plan.start) pos = LatticeSpace::shift_of(*plan.start);
    std::size_t remaining = t.size();
    for (std::int64_t n = 1; n <= plan.horizon && remaining > 0; ++n) {
      CounterRng rng(plan.seed, static_cast<std::uint64_t>(n - 1), traj, static_cast<std::uint32_t>(b));
      plan.law.sample_raw(rng, raw);
      pos = arith.multiply(pos, b == 0 ? raw.x : lattice_inverse(kind, raw.x));
      for (std::size_t j = 0; j < t.size(); ++j) {
        if (hits[j] < 0 && pos == t[j]) {
          hits[j] = n;
          --remaining;
        }
      }
    }
  }
  return rec;
}

AvoidanceRecord avoid_free(const AvoidancePlan& plan, std::uint32_t traj) {
  AvoidanceRecord rec;
  rec.forward_hit.assign(plan.forward_targets.size(), -1);
  rec.backward_hit.assign(plan.backward_targets.size(), -1);
  RawStep raw;
  for (int b = 0; b < 2; ++b) {
    const auto& targets = b == 0 ? plan.forward_targets : plan.backward_targets;
    auto& hits = b == 0 ? rec.forward_hit : rec.backward_hit;
    if (targets.empty()) continue;
    std::vector<std::vector<Letter>> t;
    std::size_t longest = 0;
    for (const auto& g : targets) {
      t.push_back(std::get<FreeWord>(g).letters);
      longest = std::max(longest, t.back().size());
    }
    FreeWord pos;
    if (b == 0 && plan.start) pos = std::get<FreeWord>(*plan.start);
    std::size_t remaining = t.size();
    for (std::int64_t n = 1; n <= plan.horizon && remaining > 0; ++n) {
      CounterRng rng(plan.seed, static_cast<std::uint64_t>(n - 1), traj, static_cast<std::uint32_t>(b));
      plan.law.sample_raw(rng, raw);
      if (b == 0) {
        for (int i = 0; i < raw.length; ++i) append(pos, raw.letters[i]);
      } else {
        for (int i = raw.length; i > 0; --i) append(pos, inverse(raw.letters[i - 1]));
      }
      if (pos.letters.size() > longest) continue;
      for (std::size_t j = 0; j < t.size(); ++j) {
        if (hits[j] < 0 && pos.letters == t[j]) {
          hits[j] = n;
          --remaining;
        }
      }
    }
  }
  return rec;
}

}  // namespace

AvoidanceRecord simulate_avoidance(const AvoidancePlan& plan, std::uint32_t trajectory) {
  const Group& g = plan.law.group();
  for (const auto& t : plan.forward_targets) {
    if (!g.contains(t)) throw UsageError("target " + to_string(t) + " is not in group " + g.token());
  }
  for (const auto& t : plan.backward_targets) {
    if (!g.contains(t)) throw UsageError("target " + to_string(t) + " is not in group " + g.token());
  }
  if (plan.start && !g.contains(*plan.start)) throw UsageError("start point is not in group " + g.token());
  if (g.kind() == GroupKind::F2) return avoid_free(plan, trajectory);
  return avoid_lattice(plan, trajectory);
}

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<std::string> parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  std::vector<std::string> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
        if (errors[i].empty()) errors[i] = "unknown failure";
      }
    }
  };
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), std::max<std::size_t>(count, 1));
  if (k <= 1) {
    worker();
    return errors;
  }
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < k; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return errors;
}

}  // namespace walkrange
