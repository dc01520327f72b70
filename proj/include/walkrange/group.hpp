#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace walkrange {

enum class GroupKind : std::uint8_t { Z1, Z2, Z3, F2, Heisenberg };

// Free generators: a, a^-1 (written A), b, b^-1 (written B). The inverse of a
// letter flips the low bit.
enum class Letter : std::uint8_t { a = 0, A = 1, b = 2, B = 3 };

constexpr Letter inverse(Letter l) {
  return static_cast<Letter>(static_cast<std::uint8_t>(l) ^ 1u);
}
constexpr int index(Letter l) { return static_cast<int>(l); }
char letter_char(Letter l);

struct ZdPoint {
  int dim = 1;
  std::array<std::int64_t, 3> x{};

  friend bool operator==(const ZdPoint&, const ZdPoint&) = default;
};

// Always reduced.
struct FreeWord {
  std::vector<Letter> letters;

  friend bool operator==(const FreeWord&, const FreeWord&) = default;
};

struct HeisPoint {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t z = 0;

  friend bool operator==(const HeisPoint&, const HeisPoint&) = default;
};

using GroupElement = std::variant<ZdPoint, FreeWord, HeisPoint>;

// Overflow-checked helpers shared by every lattice-valued code path.
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("coordinate overflow");
  return r;
}
inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("coordinate overflow");
  return r;
}
inline std::int64_t checked_neg(std::int64_t a) { return checked_mul(a, -1); }

class Group {
 public:
  explicit Group(GroupKind kind = GroupKind::Z1) : kind_(kind) {}

  static Group parse(std::string_view token);
  static Group lattice(int d);

  GroupKind kind() const { return kind_; }
  // Number of integer coordinates (0 for F2).
  int coords() const;
  // d for Z^d, otherwise 0.
  int lattice_dim() const;
  bool is_lattice() const { return lattice_dim() > 0; }
  bool is_abelian() const { return is_lattice(); }
  bool virtually_cyclic() const { return kind_ == GroupKind::Z1; }
  std::string token() const;

  GroupElement identity() const;
  // Canonical generators, closed under inversion: +e1,-e1,+e2,... for Z^d;
  // a,A,b,B for F2; X,X^-1,Y,Y^-1 for H3.
  std::vector<GroupElement> generators() const;
  bool contains(const GroupElement& g) const;
  GroupElement parse_element(std::string_view text) const;
  // Word-metric ball of the given radius, by breadth-first search.
  std::vector<GroupElement> ball(int radius) const;

  friend bool operator==(const Group&, const Group&) = default;

 private:
  GroupKind kind_;
};

GroupElement multiply(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& a);
bool is_identity(const GroupElement& a);
// Z^d: l1 norm. F2: reduced length. H3: max(|x|+|y|, ceil(sqrt(|4z - 2xy|))),
// an inversion-symmetric subadditive proxy comparable to the word metric.
std::uint64_t word_norm(const GroupElement& a);
std::string to_string(const GroupElement& a);

ZdPoint zd(std::initializer_list<std::int64_t> coords);
FreeWord word(std::string_view letters);

// Appends one letter with free cancellation.
void append(FreeWord& w, Letter l);
FreeWord reduce(const std::vector<Letter>& letters);

std::size_t hash_value(const GroupElement& a);

struct ElementHash {
  std::size_t operator()(const GroupElement& a) const { return hash_value(a); }
};

}  // namespace walkrange
