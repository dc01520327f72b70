#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "walkrange/group.hpp"
#include "walkrange/rng.hpp"
#include "walkrange/step_law.hpp"

namespace walkrange {

// Exact rational in [0, 1) or (0, 1), denominator below 2^62.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;

  // "p/q", or a plain decimal such as 0.125 (held exactly).
  static Rational parse(std::string_view text);
  // Fibonacci convergent F_k / F_{k+1} of (sqrt 5 - 1)/2 with F_{k+1} > 2^50.
  static Rational golden();
};

std::string to_string(const Rational& r);

struct BernoulliBase {
  StepLaw law;
};

// Z-valued cocycle f(x) = 1{x in [0, beta)} over x -> x + theta mod 1.
struct RotationBase {
  Rational theta;
  Rational beta;
  Rational x0;
  std::string token;
};

struct CocycleSpec {
  Group group;
  std::variant<BernoulliBase, RotationBase> base;

  static CocycleSpec bernoulli(const StepLaw& law);
  static CocycleSpec rotation(Rational theta, Rational beta, Rational x0);
  // `bernoulli` (needs law) or `rotation:<theta>:<beta>:<x0>`.
  static CocycleSpec parse(std::string_view base_token, const Group& group, const StepLaw* law);

  bool is_rotation() const { return std::holds_alternative<RotationBase>(base); }
  const StepLaw& law() const;
  const RotationBase& rotation_base() const;
  std::string base_token() const;
};

// A point of the base space: the i.i.d. sequence of trajectory `trajectory`
// under master seed `seed`, shifted by `shift`. For rotations only `shift`
// matters: the point is x0 + shift * theta.
struct Omega {
  std::uint64_t seed = 0;
  std::uint32_t trajectory = 0;
  std::int64_t shift = 0;

  Omega shifted(std::int64_t m) const { return {seed, trajectory, shift + m}; }
};

// f(T^k omega)
GroupElement increment(const CocycleSpec& spec, const Omega& omega, std::int64_t k);

// F(n, omega): product f(omega) ... f(T^{n-1} omega) for n > 0, identity for
// n = 0, and f(T^{-1} omega)^{-1} ... f(T^{n} omega)^{-1} for n < 0.
GroupElement evaluate_cocycle(const CocycleSpec& spec, const Omega& omega, std::int64_t n);

// Exact orbit of a rotation: indicator of x_k = x0 + k theta mod 1 in [0, beta).
class RotationOrbit {
 public:
  RotationOrbit(const RotationBase& base, std::int64_t start);
  // Indicator at the current point, then advance k -> k + 1.
  bool next();
  // Indicator at the current point, then move k -> k - 1.
  bool prev();
  static bool indicator(const RotationBase& base, std::int64_t k);

 private:
  unsigned __int128 den_ = 1;
  unsigned __int128 pos_ = 0;
  unsigned __int128 step_ = 0;
  unsigned __int128 beta_num_ = 0;
  unsigned __int128 beta_den_ = 1;
};

// Sequential forward/backward walk over a cocycle, generic representation.
class WalkStream {
 public:
  WalkStream(const CocycleSpec& spec, Omega omega);

  const GroupElement& advance(Direction d);
  const GroupElement& position(Direction d) const;
  std::int64_t steps(Direction d) const;

 private:
  const CocycleSpec* spec_;
  Omega omega_;
  GroupElement forward_;
  GroupElement backward_;
  std::int64_t n_forward_ = 0;
  std::int64_t n_backward_ = 0;
};

}  // namespace walkrange
