#include "walkrange/range.hpp"

#include "walkrange/errors.hpp"

namespace walkrange {

BoundarySpec BoundarySpec::standard(const Group& g) {
  BoundarySpec s;
  s.boundary = true;
  s.vtests = g.generators();
  return s;
}

LatticeSpace::Shift LatticeSpace::shift_of(const GroupElement& g) {
  if (const auto* p = std::get_if<ZdPoint>(&g)) return p->x;
  if (const auto* h = std::get_if<HeisPoint>(&g)) return {h->x, h->y, h->z};
  throw UsageError("F2 element used with a lattice site space");
}

GroupElement LatticeSpace::element_of(GroupKind kind, const Site& s) {
  if (kind == GroupKind::Heisenberg) return HeisPoint{s[0], s[1], s[2]};
  const int d = Group(kind).lattice_dim();
  ZdPoint p{d, {0, 0, 0}};
  for (int i = 0; i < d; ++i) p.x[i] = s[i];
  return p;
}

FreeSpace::Shift FreeSpace::shift_of(const GroupElement& g) {
  const auto* w = std::get_if<FreeWord>(&g);
  if (!w) throw UsageError("non-F2 element used with the free-group site space");
  if (w->letters.size() > RawStep::kMaxWord) throw UsageError("F2 test element too long");
  Shift s;
  for (std::size_t i = 0; i < w->letters.size(); ++i) s.letters[i] = w->letters[i];
  s.length = static_cast<int>(w->letters.size());
  return s;
}

RangeAccumulator::RangeAccumulator(const Group& group, BoundarySpec spec) : group_(group), spec_(std::move(spec)) {
  for (const auto& v : spec_.vtests) {
    if (!group_.contains(v)) throw UsageError("test element " + to_string(v) + " is not in group " + group_.token());
  }
  for (const auto& g : spec_.probes) {
    if (!group_.contains(g)) throw UsageError("probe " + to_string(g) + " is not in group " + group_.token());
  }
  if (group_.kind() == GroupKind::F2) {
    FreeState st;
    st.trie = std::make_unique<FreeTrie>();
    st.space = std::make_unique<FreeSpace>(*st.trie);
    st.core = std::make_unique<RangeCore<FreeSpace>>(*st.space, make_neighbors<FreeSpace>(group_, spec_),
                                                     make_tests<FreeSpace>(spec_));
    state_ = std::move(st);
  } else {
    LatticeState st;
    st.space = std::make_unique<LatticeSpace>(group_.kind());
    st.core = std::make_unique<RangeCore<LatticeSpace>>(*st.space, make_neighbors<LatticeSpace>(group_, spec_),
                                                        make_tests<LatticeSpace>(spec_));
    state_ = std::move(st);
  }
}

void RangeAccumulator::insert(const GroupElement& x) {
  if (!group_.contains(x)) throw UsageError("site " + to_string(x) + " is not in group " + group_.token());
  if (auto* st = std::get_if<LatticeState>(&state_)) {
    st->core->insert(LatticeSpace::shift_of(x));
  } else {
    auto& fs = std::get<FreeState>(state_);
    fs.core->insert(fs.trie->intern(std::get<FreeWord>(x)));
  }
}

RangeSnapshot RangeAccumulator::snapshot() const {
  if (const auto* st = std::get_if<LatticeState>(&state_)) return snapshot_of(*st->core, spec_);
  return snapshot_of(*std::get<FreeState>(state_).core, spec_);
}

std::vector<GroupElement> RangeAccumulator::visited() const {
  std::vector<GroupElement> out;
  if (const auto* st = std::get_if<LatticeState>(&state_)) {
    st->space->set().for_each(
        [&](const Coord& c, std::uint8_t) { out.push_back(LatticeSpace::element_of(group_.kind(), c)); });
  } else {
    const auto& fs = std::get<FreeState>(state_);
    for (FreeTrie::Node n = 0; n < fs.trie->node_count(); ++n) {
      if (fs.trie->payload(n) & FreeSpace::kVisited) out.push_back(fs.trie->word(n));
    }
  }
  return out;
}

std::size_t RangeAccumulator::stored_sites() const {
  if (const auto* st = std::get_if<LatticeState>(&state_)) return st->space->size();
  return std::get<FreeState>(state_).space->size();
}

}  // namespace walkrange
