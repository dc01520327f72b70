#include "walkrange/group.hpp"

#include <cmath>
#include <deque>
#include <sstream>
#include <unordered_set>

#include "walkrange/errors.hpp"

namespace walkrange {

char letter_char(Letter l) {
  static constexpr char kChars[] = {'a', 'A', 'b', 'B'};
  return kChars[index(l)];
}

Group Group::parse(std::string_view token) {
  if (token == "z1") return Group(GroupKind::Z1);
  if (token == "z2") return Group(GroupKind::Z2);
  if (token == "z3") return Group(GroupKind::Z3);
  if (token == "f2") return Group(GroupKind::F2);
  if (token == "heis") return Group(GroupKind::Heisenberg);
  throw UsageError("unknown group token '" + std::string(token) + "'");
}

Group Group::lattice(int d) {
  switch (d) {
    case 1: return Group(GroupKind::Z1);
    case 2: return Group(GroupKind::Z2);
    case 3: return Group(GroupKind::Z3);
    default: throw UsageError("lattice dimension must be 1, 2 or 3");
  }
}

int Group::coords() const {
  switch (kind_) {
    case GroupKind::Z1: return 1;
    case GroupKind::Z2: return 2;
    case GroupKind::Z3: return 3;
    case GroupKind::F2: return 0;
    case GroupKind::Heisenberg: return 3;
  }
  return 0;
}

int Group::lattice_dim() const {
  return kind_ == GroupKind::F2 || kind_ == GroupKind::Heisenberg ? 0 : coords();
}

std::string Group::token() const {
  switch (kind_) {
    case GroupKind::Z1: return "z1";
    case GroupKind::Z2: return "z2";
    case GroupKind::Z3: return "z3";
    case GroupKind::F2: return "f2";
    case GroupKind::Heisenberg: return "heis";
  }
  return "";
}

GroupElement Group::identity() const {
  if (kind_ == GroupKind::F2) return FreeWord{};
  if (kind_ == GroupKind::Heisenberg) return HeisPoint{};
  return ZdPoint{lattice_dim(), {0, 0, 0}};
}

std::vector<GroupElement> Group::generators() const {
  std::vector<GroupElement> out;
  if (kind_ == GroupKind::F2) {
    for (Letter l : {Letter::a, Letter::A, Letter::b, Letter::B}) out.push_back(FreeWord{{l}});
    return out;
  }
  if (kind_ == GroupKind::Heisenberg) {
    out.push_back(HeisPoint{1, 0, 0});
    out.push_back(HeisPoint{-1, 0, 0});
    out.push_back(HeisPoint{0, 1, 0});
    out.push_back(HeisPoint{0, -1, 0});
    return out;
  }
  const int d = lattice_dim();
  for (int i = 0; i < d; ++i) {
    for (int s : {1, -1}) {
      ZdPoint p{d, {0, 0, 0}};
      p.x[i] = s;
      out.push_back(p);
    }
  }
  return out;
}

bool Group::contains(const GroupElement& g) const {
  if (kind_ == GroupKind::F2) return std::holds_alternative<FreeWord>(g);
  if (kind_ == GroupKind::Heisenberg) return std::holds_alternative<HeisPoint>(g);
  const auto* p = std::get_if<ZdPoint>(&g);
  return p && p->dim == lattice_dim();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::int64_t> parse_ints(std::string_view text) {
  std::vector<std::int64_t> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = text.find(',', pos);
    std::string item(trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                          : comma - pos)));
    if (item.empty()) throw UsageError("malformed element literal '" + std::string(text) + "'");
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw UsageError("malformed element literal '" + std::string(text) + "'");
    }
    if (used != item.size()) throw UsageError("malformed element literal '" + std::string(text) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

GroupElement Group::parse_element(std::string_view text) const {
  text = trim(text);
  if (kind_ == GroupKind::F2) {
    std::vector<Letter> letters;
    if (text == "e" || text == "id") return FreeWord{};
    for (char c : text) {
      switch (c) {
        case 'a': letters.push_back(Letter::a); break;
        case 'A': letters.push_back(Letter::A); break;
        case 'b': letters.push_back(Letter::b); break;
        case 'B': letters.push_back(Letter::B); break;
        default: throw UsageError("malformed F2 word '" + std::string(text) + "'");
      }
    }
    return reduce(letters);
  }
  auto v = parse_ints(text);
  if (static_cast<int>(v.size()) != coords()) {
    throw UsageError("element '" + std::string(text) + "' needs " + std::to_string(coords()) +
                     " coordinates for group " + token());
  }
  if (kind_ == GroupKind::Heisenberg) return HeisPoint{v[0], v[1], v[2]};
  ZdPoint p{lattice_dim(), {0, 0, 0}};
  for (std::size_t i = 0; i < v.size(); ++i) p.x[i] = v[i];
  return p;
}

std::vector<GroupElement> Group::ball(int radius) const {
  std::unordered_set<GroupElement, ElementHash> seen;
  std::vector<GroupElement> out;
  std::deque<std::pair<GroupElement, int>> queue;
  const auto gens = generators();
  queue.emplace_back(identity(), 0);
  seen.insert(identity());
  while (!queue.empty()) {
    auto [g, r] = queue.front();
    queue.pop_front();
    out.push_back(g);
    if (r == radius) continue;
    for (const auto& s : gens) {
      auto h = multiply(g, s);
      if (seen.insert(h).second) queue.emplace_back(h, r + 1);
    }
  }
  return out;
}

void append(FreeWord& w, Letter l) {
  if (!w.letters.empty() && w.letters.back() == inverse(l)) {
    w.letters.pop_back();
  } else {
    w.letters.push_back(l);
  }
}

FreeWord reduce(const std::vector<Letter>& letters) {
  FreeWord w;
  w.letters.reserve(letters.size());
  for (Letter l : letters) append(w, l);
  return w;
}

namespace {

struct Multiplier {
  GroupElement operator()(const ZdPoint& a, const ZdPoint& b) const {
    if (a.dim != b.dim) throw UsageError("mixed-group operands: Z^d points of different dimension");
    ZdPoint r{a.dim, {0, 0, 0}};
    for (int i = 0; i < a.dim; ++i) r.x[i] = checked_add(a.x[i], b.x[i]);
    return r;
  }
  GroupElement operator()(const FreeWord& a, const FreeWord& b) const {
    FreeWord r = a;
    for (Letter l : b.letters) append(r, l);
    return r;
  }
  GroupElement operator()(const HeisPoint& a, const HeisPoint& b) const {
    return HeisPoint{checked_add(a.x, b.x), checked_add(a.y, b.y),
                     checked_add(checked_add(a.z, b.z), checked_mul(a.x, b.y))};
  }
  template <class A, class B>
  GroupElement operator()(const A&, const B&) const {
    throw UsageError("mixed-group operands");
  }
};

}  // namespace

GroupElement multiply(const GroupElement& a, const GroupElement& b) {
  return std::visit(Multiplier{}, a, b);
}

GroupElement inverse(const GroupElement& a) {
  if (const auto* p = std::get_if<ZdPoint>(&a)) {
    ZdPoint r{p->dim, {0, 0, 0}};
    for (int i = 0; i < p->dim; ++i) r.x[i] = checked_neg(p->x[i]);
    return r;
  }
  if (const auto* w = std::get_if<FreeWord>(&a)) {
    FreeWord r;
    r.letters.reserve(w->letters.size());
    for (auto it = w->letters.rbegin(); it != w->letters.rend(); ++it) r.letters.push_back(inverse(*it));
    return r;
  }
  const auto& h = std::get<HeisPoint>(a);
  // (x,y,z)^-1 = (-x, -y, -z + x y)
  return HeisPoint{checked_neg(h.x), checked_neg(h.y), checked_add(checked_neg(h.z), checked_mul(h.x, h.y))};
}

bool is_identity(const GroupElement& a) {
  if (const auto* p = std::get_if<ZdPoint>(&a)) return p->x == std::array<std::int64_t, 3>{0, 0, 0};
  if (const auto* w = std::get_if<FreeWord>(&a)) return w->letters.empty();
  const auto& h = std::get<HeisPoint>(a);
  return h.x == 0 && h.y == 0 && h.z == 0;
}

namespace {

std::uint64_t uabs(std::int64_t v) {
  return v < 0 ? std::uint64_t(0) - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
}

}  // namespace

std::uint64_t word_norm(const GroupElement& a) {
  if (const auto* p = std::get_if<ZdPoint>(&a)) {
    std::uint64_t s = 0;
    for (int i = 0; i < p->dim; ++i) s += uabs(p->x[i]);
    return s;
  }
  if (const auto* w = std::get_if<FreeWord>(&a)) return w->letters.size();
  const auto& h = std::get<HeisPoint>(a);
  const std::uint64_t planar = uabs(h.x) + uabs(h.y);
  // ceil(sqrt(|4z - 2xy|)): the centre coordinate z - xy/2 flips sign under
  // inversion; exact integer correction of the floating estimate
  const __int128 c = static_cast<__int128>(h.z) * 4 - static_cast<__int128>(h.x) * h.y * 2;
  const unsigned __int128 target = static_cast<unsigned __int128>(c < 0 ? -c : c);
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(target)));
  while (static_cast<unsigned __int128>(r) * r < target) ++r;
  while (r > 0 && static_cast<unsigned __int128>(r - 1) * (r - 1) >= target) --r;
  return std::max(planar, r);
}

std::string to_string(const GroupElement& a) {
  std::ostringstream os;
  if (const auto* p = std::get_if<ZdPoint>(&a)) {
    for (int i = 0; i < p->dim; ++i) os << (i ? "," : "") << p->x[i];
  } else if (const auto* w = std::get_if<FreeWord>(&a)) {
    if (w->letters.empty()) return "e";
    for (Letter l : w->letters) os << letter_char(l);
  } else {
    const auto& h = std::get<HeisPoint>(a);
    os << h.x << ',' << h.y << ',' << h.z;
  }
  return os.str();
}

ZdPoint zd(std::initializer_list<std::int64_t> coords) {
  if (coords.size() < 1 || coords.size() > 3) throw UsageError("Z^d point needs 1 to 3 coordinates");
  ZdPoint p{static_cast<int>(coords.size()), {0, 0, 0}};
  std::size_t i = 0;
  for (auto c : coords) p.x[i++] = c;
  return p;
}

FreeWord word(std::string_view letters) {
  return std::get<FreeWord>(Group(GroupKind::F2).parse_element(letters));
}

std::size_t hash_value(const GroupElement& a) {
  std::uint64_t h = 0x9e3779b97f4a7c15ull * (a.index() + 1);
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  if (const auto* p = std::get_if<ZdPoint>(&a)) {
    for (int i = 0; i < p->dim; ++i) mix(static_cast<std::uint64_t>(p->x[i]));
  } else if (const auto* w = std::get_if<FreeWord>(&a)) {
    for (Letter l : w->letters) mix(static_cast<std::uint64_t>(l));
    mix(w->letters.size());
  } else {
    const auto& q = std::get<HeisPoint>(a);
    mix(static_cast<std::uint64_t>(q.x));
    mix(static_cast<std::uint64_t>(q.y));
    mix(static_cast<std::uint64_t>(q.z));
  }
  return static_cast<std::size_t>(h);
}

}  // namespace walkrange
