#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "walkrange/group.hpp"

namespace walkrange {

using Coord = std::array<std::int64_t, 3>;

// Open-addressing set of lattice sites (Z^d or H3 coordinates) with one
// small payload per site. Keys are packed into 120 bits; the top byte of the
// second word holds an occupied flag and a 7-bit payload. Linear probing,
// load factor at most 1/2, no deletion.
class LatticeSiteSet {
 public:
  static constexpr std::int64_t kNone = -1;

  explicit LatticeSiteSet(GroupKind kind, std::size_t capacity = 1u << 10) : kind_(kind) {
    if (kind == GroupKind::F2) throw std::invalid_argument("F2 sites are stored in a FreeTrie");
    std::size_t cap = 16;
    while (cap < 2 * capacity) cap <<= 1;
    allocate(cap);
  }

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return slots_.size(); }

  std::int64_t find(const Coord& c) const {
    const Key k = pack(c);
    std::size_t i = bucket(k);
    while (true) {
      const Slot& s = slots_[i];
      if (!(s.hi & kOccupied)) return kNone;
      if (s.lo == k.lo && (s.hi & kKeyMask) == k.hi) return static_cast<std::int64_t>(i);
      i = (i + 1) & mask_;
    }
  }

  // Slot of c and whether it was inserted now.
  std::pair<std::int64_t, bool> insert(const Coord& c) {
    if (2 * (size_ + 1) > slots_.size()) grow();
    const Key k = pack(c);
    std::size_t i = bucket(k);
    while (true) {
      Slot& s = slots_[i];
      if (!(s.hi & kOccupied)) {
        s.lo = k.lo;
        s.hi = k.hi | kOccupied;
        ++size_;
        return {static_cast<std::int64_t>(i), true};
      }
      if (s.lo == k.lo && (s.hi & kKeyMask) == k.hi) return {static_cast<std::int64_t>(i), false};
      i = (i + 1) & mask_;
    }
  }

  std::uint8_t payload(std::int64_t slot) const {
    return static_cast<std::uint8_t>((slots_[slot].hi >> 56) & 0x7f);
  }
  void set_payload(std::int64_t slot, std::uint8_t v) {
    Slot& s = slots_[slot];
    s.hi = (s.hi & ~kPayloadMask) | (static_cast<std::uint64_t>(v & 0x7f) << 56);
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      if (slots_[i].hi & kOccupied) f(unpack(slots_[i]), payload(static_cast<std::int64_t>(i)));
    }
  }

 private:
  struct Key {
    std::uint64_t lo;
    std::uint64_t hi;
  };
  struct Slot {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
  };

  static constexpr std::uint64_t kOccupied = std::uint64_t{1} << 63;
  static constexpr std::uint64_t kPayloadMask = std::uint64_t{0x7f} << 56;
  static constexpr std::uint64_t kKeyMask = (std::uint64_t{1} << 56) - 1;
  static constexpr std::uint64_t kMask40 = (std::uint64_t{1} << 40) - 1;
  static constexpr std::int64_t kLimit40 = std::int64_t{1} << 39;
  static constexpr std::int64_t kLimit56 = std::int64_t{1} << 55;

  static std::int64_t sign_extend(std::uint64_t v, int bits) {
    const int shift = 64 - bits;
    return static_cast<std::int64_t>(v << shift) >> shift;
  }

  Key pack(const Coord& c) const {
    switch (kind_) {
      case GroupKind::Z1:
        return {static_cast<std::uint64_t>(c[0]), 0};
      case GroupKind::Z2:
        if (c[1] >= kLimit56 || c[1] < -kLimit56) throw std::overflow_error("site outside the packable coordinate range");
        return {static_cast<std::uint64_t>(c[0]), static_cast<std::uint64_t>(c[1]) & kKeyMask};
      default: {
        for (int i = 0; i < 3; ++i) {
          if (c[i] >= kLimit40 || c[i] < -kLimit40) throw std::overflow_error("site outside the packable coordinate range");
        }
        const std::uint64_t x = static_cast<std::uint64_t>(c[0]) & kMask40;
        const std::uint64_t y = static_cast<std::uint64_t>(c[1]) & kMask40;
        const std::uint64_t z = static_cast<std::uint64_t>(c[2]) & kMask40;
        return {x | (y << 40), (y >> 24) | (z << 16)};
      }
    }
  }

  Coord unpack(const Slot& s) const {
    const std::uint64_t hi = s.hi & kKeyMask;
    switch (kind_) {
      case GroupKind::Z1:
        return {static_cast<std::int64_t>(s.lo), 0, 0};
      case GroupKind::Z2:
        return {static_cast<std::int64_t>(s.lo), sign_extend(hi, 56), 0};
      default: {
        const std::uint64_t x = s.lo & kMask40;
        const std::uint64_t y = (s.lo >> 40) | ((hi & 0xffff) << 24);
        const std::uint64_t z = hi >> 16;
        return {sign_extend(x, 40), sign_extend(y, 40), sign_extend(z, 40)};
      }
    }
  }

  std::size_t bucket(const Key& k) const {
    std::uint64_t h = k.lo * 0x9E3779B97F4A7C15ull ^ k.hi * 0xC2B2AE3D27D4EB4Full;
    h ^= h >> 29;
    h *= 0xD6E8FEB86659FD93ull;
    return static_cast<std::size_t>(h >> shift_);
  }

  void allocate(std::size_t cap) {
    slots_.assign(cap, Slot{});
    mask_ = cap - 1;
    int bits = 0;
    while ((std::size_t{1} << bits) < cap) ++bits;
    shift_ = 64 - bits;
  }

  void grow() {
    std::vector<Slot> old;
    old.swap(slots_);
    allocate(old.size() * 2);
    for (const Slot& s : old) {
      if (!(s.hi & kOccupied)) continue;
      std::size_t i = bucket({s.lo, s.hi & kKeyMask});
      while (slots_[i].hi & kOccupied) i = (i + 1) & mask_;
      slots_[i] = s;
    }
  }

  GroupKind kind_;
  std::vector<Slot> slots_;
  std::size_t mask_ = 0;
  int shift_ = 64;
  std::size_t size_ = 0;
};

// Interned reduced words of F2: node = word, children by appended letter.
// Moving by the inverse of a node's last letter goes to its parent, so
// walking and translating cost O(1) per letter.
class FreeTrie {
 public:
  using Node = std::uint32_t;
  static constexpr Node kNone = 0xffffffffu;

  FreeTrie() { nodes_.push_back(Entry{}); }

  Node root() const { return 0; }
  std::size_t node_count() const { return nodes_.size(); }

  Node step(Node n, Letter l) {
    const Entry& e = nodes_[n];
    if (n != 0 && l == inverse(e.letter)) return e.parent;
    Node c = e.child[index(l)];
    if (c != kNone) return c;
    if (nodes_.size() >= kNone) throw std::overflow_error("free-group trie exhausted node ids");
    c = static_cast<Node>(nodes_.size());
    Entry child;
    child.parent = n;
    child.letter = l;
    child.depth = nodes_[n].depth + 1;
    nodes_.push_back(child);
    nodes_[n].child[index(l)] = c;
    return c;
  }

  // Like step, but never creates: kNone if the word was never interned.
  Node peek(Node n, Letter l) const {
    if (n == kNone) return kNone;
    const Entry& e = nodes_[n];
    if (n != 0 && l == inverse(e.letter)) return e.parent;
    return e.child[index(l)];
  }

  Node peek_word(Node n, const Letter* w, int len) const {
    for (int i = 0; i < len && n != kNone; ++i) n = peek(n, w[i]);
    return n;
  }

  Node intern(const FreeWord& w) {
    Node n = root();
    for (Letter l : w.letters) n = step(n, l);
    return n;
  }

  FreeWord word(Node n) const {
    FreeWord w;
    w.letters.resize(nodes_[n].depth);
    for (std::size_t i = w.letters.size(); i > 0; --i) {
      w.letters[i - 1] = nodes_[n].letter;
      n = nodes_[n].parent;
    }
    return w;
  }

  std::uint32_t depth(Node n) const { return nodes_[n].depth; }

  std::uint8_t payload(Node n) const { return nodes_[n].payload; }
  void set_payload(Node n, std::uint8_t v) { nodes_[n].payload = v; }

 private:
  struct Entry {
    Node parent = kNone;
    std::array<Node, 4> child{kNone, kNone, kNone, kNone};
    std::uint32_t depth = 0;
    Letter letter = Letter::a;
    std::uint8_t payload = 0;
  };
  std::vector<Entry> nodes_;
};

}  // namespace walkrange
