#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "walkrange/group.hpp"
#include "walkrange/site_store.hpp"
#include "walkrange/step_law.hpp"

namespace walkrange {

// Which set statistics a range accumulator maintains.
struct BoundarySpec {
  bool boundary = true;
  // |R \ (R v)| for each v (the lattice v-boundary R \ (R + v)).
  std::vector<GroupElement> vtests;
  // Folner probes g: both |R \ R g| and |R \ R g^-1| are kept, so the list is
  // effectively closed under inversion.
  std::vector<GroupElement> probes;

  // boundary on, v ranging over the canonical generators, no probes
  static BoundarySpec standard(const Group& g);
};

struct RangeSnapshot {
  std::int64_t n = 0;
  std::int64_t range = 0;
  std::int64_t boundary = 0;
  std::vector<std::int64_t> vboundary;
  std::vector<std::int64_t> minus_g;     // |R \ R g|
  std::vector<std::int64_t> minus_ginv;  // |R \ R g^-1|

  std::int64_t symdiff(std::size_t i) const { return minus_g[i] + minus_ginv[i]; }
  std::optional<double> boundary_ratio() const {
    if (range == 0) return std::nullopt;
    return static_cast<double>(boundary) / static_cast<double>(range);
  }
  std::optional<double> folner_ratio(std::size_t i) const {
    if (range == 0) return std::nullopt;
    return static_cast<double>(symdiff(i)) / static_cast<double>(range);
  }
};

// Z^d and H3 sites in a packed hash set.
class LatticeSpace {
 public:
  using Site = Coord;
  using Shift = Coord;
  static constexpr std::int64_t kNone = LatticeSiteSet::kNone;

  explicit LatticeSpace(GroupKind kind, std::size_t capacity = 1u << 10) : kind_(kind), set_(kind, capacity) {}

  GroupKind kind() const { return kind_; }

  Site multiply(const Site& x, const Shift& u) const {
    Site r;
    if (__builtin_add_overflow(x[0], u[0], &r[0]) || __builtin_add_overflow(x[1], u[1], &r[1]) ||
        __builtin_add_overflow(x[2], u[2], &r[2])) {
      throw std::overflow_error("coordinate overflow");
    }
    if (kind_ == GroupKind::Heisenberg && u[1] != 0) {
      std::int64_t cross;
      if (__builtin_mul_overflow(x[0], u[1], &cross) || __builtin_add_overflow(r[2], cross, &r[2])) {
        throw std::overflow_error("coordinate overflow");
      }
    }
    return r;
  }

  std::int64_t lookup(const Site& x, const Shift& u) const { return set_.find(multiply(x, u)); }
  std::pair<std::int64_t, bool> insert(const Site& y) { return set_.insert(y); }
  std::uint8_t payload(std::int64_t slot) const { return set_.payload(slot); }
  void set_payload(std::int64_t slot, std::uint8_t v) { set_.set_payload(slot, v); }
  std::size_t size() const { return set_.size(); }
  const LatticeSiteSet& set() const { return set_; }

  static Shift shift_of(const GroupElement& g);
  static GroupElement element_of(GroupKind kind, const Site& s);

 private:
  GroupKind kind_;
  LatticeSiteSet set_;
};

// F2 sites as trie nodes; the walk and the accumulator share the trie.
class FreeSpace {
 public:
  using Site = FreeTrie::Node;
  struct Shift {
    std::array<Letter, RawStep::kMaxWord> letters{};
    int length = 0;
  };
  static constexpr std::int64_t kNone = -1;
  static constexpr std::uint8_t kVisited = 0x80;

  explicit FreeSpace(FreeTrie& trie) : trie_(&trie) {}

  std::int64_t lookup(Site x, const Shift& u) const {
    const Site y = trie_->peek_word(x, u.letters.data(), u.length);
    if (y == FreeTrie::kNone || !(trie_->payload(y) & kVisited)) return kNone;
    return y;
  }
  std::pair<std::int64_t, bool> insert(Site y) {
    const std::uint8_t p = trie_->payload(y);
    if (p & kVisited) return {y, false};
    trie_->set_payload(y, kVisited);
    ++size_;
    return {y, true};
  }
  std::uint8_t payload(std::int64_t slot) const { return trie_->payload(static_cast<Site>(slot)) & 0x7f; }
  void set_payload(std::int64_t slot, std::uint8_t v) {
    trie_->set_payload(static_cast<Site>(slot), static_cast<std::uint8_t>(kVisited | (v & 0x7f)));
  }
  std::size_t size() const { return size_; }
  FreeTrie& trie() const { return *trie_; }

  static Shift shift_of(const GroupElement& g);

 private:
  FreeTrie* trie_;
  std::size_t size_ = 0;
};

// Incremental counters over a site space. Test shifts u record
// #{x in R : x u not in R}; inserting a new site y adds one if y u is
// unvisited and removes one if y u^-1 was visited (its partner is now in R).
template <class Space>
class RangeCore {
 public:
  using Site = typename Space::Site;
  using Shift = typename Space::Shift;

  struct Test {
    Shift u;
    Shift u_inv;
    bool trivial = false;
  };

  RangeCore(Space& space, std::vector<Shift> neighbors, std::vector<Test> tests)
      : space_(&space), neighbors_(std::move(neighbors)), tests_(std::move(tests)), counts_(tests_.size(), 0) {}

  void insert(const Site& y) {
    ++n_;
    const auto [slot, fresh] = space_->insert(y);
    if (!fresh) return;
    ++range_;
    if (!neighbors_.empty()) {
      std::uint8_t missing = 0;
      for (const Shift& s : neighbors_) {
        const std::int64_t nb = space_->lookup(y, s);
        if (nb == Space::kNone) {
          ++missing;
        } else {
          const std::uint8_t m = space_->payload(nb);
          space_->set_payload(nb, static_cast<std::uint8_t>(m - 1));
          if (m == 1) --boundary_;
        }
      }
      space_->set_payload(slot, missing);
      if (missing > 0) ++boundary_;
    }
    for (std::size_t i = 0; i < tests_.size(); ++i) {
      const Test& t = tests_[i];
      if (t.trivial) continue;
      if (space_->lookup(y, t.u) == Space::kNone) ++counts_[i];
      if (space_->lookup(y, t.u_inv) != Space::kNone) --counts_[i];
    }
  }

  std::int64_t n() const { return n_; }
  std::int64_t range() const { return range_; }
  std::int64_t boundary() const { return boundary_; }
  std::int64_t count(std::size_t i) const { return counts_[i]; }
  std::size_t test_count() const { return tests_.size(); }
  Space& space() const { return *space_; }

 private:
  Space* space_;
  std::vector<Shift> neighbors_;
  std::vector<Test> tests_;
  std::vector<std::int64_t> counts_;
  std::int64_t n_ = 0;
  std::int64_t range_ = 0;
  std::int64_t boundary_ = 0;
};

// Test shifts for a spec: v tests first (u = v^-1), then per probe the pair
// u = g^-1 (for R \ R g) and u = g (for R \ R g^-1).
template <class Space>
std::vector<typename RangeCore<Space>::Test> make_tests(const BoundarySpec& spec) {
  std::vector<typename RangeCore<Space>::Test> out;
  auto add = [&out](const GroupElement& u) {
    out.push_back({Space::shift_of(u), Space::shift_of(inverse(u)), is_identity(u)});
  };
  for (const auto& v : spec.vtests) add(inverse(v));
  for (const auto& g : spec.probes) {
    add(inverse(g));
    add(g);
  }
  return out;
}

template <class Space>
std::vector<typename Space::Shift> make_neighbors(const Group& group, const BoundarySpec& spec) {
  std::vector<typename Space::Shift> out;
  if (!spec.boundary) return out;
  for (const auto& s : group.generators()) out.push_back(Space::shift_of(s));
  return out;
}

template <class Space>
RangeSnapshot snapshot_of(const RangeCore<Space>& core, const BoundarySpec& spec) {
  RangeSnapshot s;
  s.n = core.n();
  s.range = core.range();
  s.boundary = core.boundary();
  std::size_t i = 0;
  for (; i < spec.vtests.size(); ++i) s.vboundary.push_back(core.count(i));
  for (std::size_t p = 0; p < spec.probes.size(); ++p) {
    s.minus_g.push_back(core.count(i++));
    s.minus_ginv.push_back(core.count(i++));
  }
  return s;
}

// Group-element front end over the typed cores.
class RangeAccumulator {
 public:
  RangeAccumulator(const Group& group, BoundarySpec spec);
  RangeAccumulator(const RangeAccumulator&) = delete;
  RangeAccumulator& operator=(const RangeAccumulator&) = delete;

  void insert(const GroupElement& x);
  RangeSnapshot snapshot() const;
  const BoundarySpec& spec() const { return spec_; }
  const Group& group() const { return group_; }
  // Visited sites, in unspecified order; size equals |R|.
  std::vector<GroupElement> visited() const;
  std::size_t stored_sites() const;

 private:
  struct LatticeState {
    std::unique_ptr<LatticeSpace> space;
    std::unique_ptr<RangeCore<LatticeSpace>> core;
  };
  struct FreeState {
    std::unique_ptr<FreeTrie> trie;
    std::unique_ptr<FreeSpace> space;
    std::unique_ptr<RangeCore<FreeSpace>> core;
  };

  Group group_;
  BoundarySpec spec_;
  std::variant<LatticeState, FreeState> state_;
};

}  // namespace walkrange
