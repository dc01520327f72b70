#include "walkrange/cocycle.hpp"

#include <cctype>
#include <numeric>

#include "walkrange/errors.hpp"

namespace walkrange {

namespace {

constexpr std::int64_t kMaxDen = std::int64_t{1} << 62;

std::int64_t parse_int(std::string_view text, std::string_view what) {
  if (text.empty()) throw UsageError("malformed " + std::string(what));
  std::int64_t v = 0;
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw UsageError("malformed " + std::string(what) + " '" + std::string(text) + "'");
    if (v > (kMaxDen - 9) / 10) throw UsageError(std::string(what) + " too large");
    v = v * 10 + (c - '0');
  }
  return v;
}

unsigned __int128 mod_u128(__int128 v, unsigned __int128 m) {
  __int128 r = v % static_cast<__int128>(m);
  if (r < 0) r += static_cast<__int128>(m);
  return static_cast<unsigned __int128>(r);
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  if (text == "golden") return golden();
  const auto slash = text.find('/');
  Rational r;
  if (slash != std::string_view::npos) {
    r.num = parse_int(text.substr(0, slash), "rational numerator");
    r.den = parse_int(text.substr(slash + 1), "rational denominator");
    if (r.den == 0) throw UsageError("zero denominator in '" + std::string(text) + "'");
  } else {
    const auto dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (frac.size() > 17) throw UsageError("decimal '" + std::string(text) + "' has too many digits");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::int64_t w = whole.empty() ? 0 : parse_int(whole, "decimal");
    const std::int64_t f = frac.empty() ? 0 : parse_int(frac, "decimal");
    if (w != 0) throw UsageError("value '" + std::string(text) + "' must lie in [0, 1)");
    r.num = f;
    r.den = den;
  }
  const auto g = std::gcd(r.num, r.den);
  if (g > 1) {
    r.num /= g;
    r.den /= g;
  }
  return r;
}

Rational Rational::golden() {
  std::int64_t a = 1, b = 1;  // consecutive Fibonacci numbers
  while (b <= (std::int64_t{1} << 50)) {
    const std::int64_t c = a + b;
    a = b;
    b = c;
  }
  return {a, b};
}

std::string to_string(const Rational& r) { return std::to_string(r.num) + "/" + std::to_string(r.den); }

CocycleSpec CocycleSpec::bernoulli(const StepLaw& law) { return {law.group(), BernoulliBase{law}}; }

CocycleSpec CocycleSpec::rotation(Rational theta, Rational beta, Rational x0) {
  auto check = [](const Rational& r, const char* name, bool open_low) {
    if (r.den <= 0 || r.den >= kMaxDen || r.num < 0 || r.num >= r.den || (open_low && r.num == 0)) {
      throw UsageError(std::string("rotation parameter ") + name + " out of range");
    }
  };
  check(theta, "theta", true);
  check(beta, "beta", true);
  check(x0, "x0", false);
  RotationBase base{theta, beta, x0,
                    "rotation:" + to_string(theta) + ":" + to_string(beta) + ":" + to_string(x0)};
  return {Group(GroupKind::Z1), base};
}

CocycleSpec CocycleSpec::parse(std::string_view base_token, const Group& group, const StepLaw* law) {
  if (base_token == "bernoulli") {
    if (!law) throw UsageError("--base bernoulli needs --law");
    if (!(law->group() == group)) throw UsageError("law group does not match --group");
    return bernoulli(*law);
  }
  if (base_token.rfind("rotation:", 0) == 0) {
    if (group.kind() != GroupKind::Z1) throw UnsupportedError("rotation base needs group z1");
    std::string rest(base_token.substr(9));
    const auto c1 = rest.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : rest.find(':', c1 + 1);
    if (c2 == std::string::npos) throw UsageError("--base rotation needs <theta>:<beta>:<x0>");
    auto spec = rotation(Rational::parse(rest.substr(0, c1)), Rational::parse(rest.substr(c1 + 1, c2 - c1 - 1)),
                         Rational::parse(rest.substr(c2 + 1)));
    std::get<RotationBase>(spec.base).token = std::string(base_token);
    return spec;
  }
  throw UsageError("unknown --base token '" + std::string(base_token) + "'");
}

const StepLaw& CocycleSpec::law() const {
  if (is_rotation()) throw UnsupportedError("rotation cocycle has no step law");
  return std::get<BernoulliBase>(base).law;
}

const RotationBase& CocycleSpec::rotation_base() const {
  if (!is_rotation()) throw UnsupportedError("not a rotation cocycle");
  return std::get<RotationBase>(base);
}

std::string CocycleSpec::base_token() const { return is_rotation() ? rotation_base().token : "bernoulli"; }

RotationOrbit::RotationOrbit(const RotationBase& base, std::int64_t start) {
  // Common denominator of theta and x0; x0 is rounded onto the theta grid
  // only when the exact common denominator would not fit.
  const std::int64_t q = base.theta.den;
  const std::int64_t qa = base.x0.den;
  const std::int64_t g = std::gcd(q, qa);
  unsigned __int128 D = static_cast<unsigned __int128>(q / g) * static_cast<unsigned __int128>(qa);
  unsigned __int128 x_num;
  if (D < static_cast<unsigned __int128>(kMaxDen)) {
    x_num = static_cast<unsigned __int128>(base.x0.num) * (D / static_cast<unsigned __int128>(qa));
  } else {
    D = static_cast<unsigned __int128>(q);
    const __int128 scaled = static_cast<__int128>(base.x0.num) * q;
    x_num = static_cast<unsigned __int128>((scaled + qa / 2) / qa) % D;
  }
  den_ = D;
  step_ = static_cast<unsigned __int128>(base.theta.num) * (D / static_cast<unsigned __int128>(q));
  pos_ = mod_u128(static_cast<__int128>(x_num) + static_cast<__int128>(start) * static_cast<__int128>(step_), D);
  beta_num_ = static_cast<unsigned __int128>(base.beta.num);
  beta_den_ = static_cast<unsigned __int128>(base.beta.den);
}

bool RotationOrbit::next() {
  // pos / den < beta_num / beta_den
  const bool inside = pos_ * beta_den_ < beta_num_ * den_;
  pos_ += step_;
  if (pos_ >= den_) pos_ -= den_;
  return inside;
}

bool RotationOrbit::prev() {
  const bool inside = pos_ * beta_den_ < beta_num_ * den_;
  pos_ = pos_ >= step_ ? pos_ - step_ : pos_ + den_ - step_;
  return inside;
}

bool RotationOrbit::indicator(const RotationBase& base, std::int64_t k) { return RotationOrbit(base, k).next(); }

GroupElement increment(const CocycleSpec& spec, const Omega& omega, std::int64_t k) {
  const std::int64_t idx = checked_add(k, omega.shift);
  if (spec.is_rotation()) return ZdPoint{1, {RotationOrbit::indicator(spec.rotation_base(), idx) ? 1 : 0, 0, 0}};
  CounterRng rng = increment_rng(omega.seed, omega.trajectory, idx);
  return spec.law().sample(rng);
}

GroupElement evaluate_cocycle(const CocycleSpec& spec, const Omega& omega, std::int64_t n) {
  if (spec.is_rotation()) {
    const auto& base = spec.rotation_base();
    std::int64_t count = 0;
    if (n >= 0) {
      RotationOrbit orbit(base, omega.shift);
      for (std::int64_t k = 0; k < n; ++k) count += orbit.next();
      return ZdPoint{1, {count, 0, 0}};
    }
    RotationOrbit orbit(base, omega.shift + n);
    for (std::int64_t k = n; k < 0; ++k) count += orbit.next();
    return ZdPoint{1, {-count, 0, 0}};
  }
  GroupElement acc = spec.group.identity();
  if (n >= 0) {
    for (std::int64_t k = 0; k < n; ++k) acc = multiply(acc, increment(spec, omega, k));
  } else {
    for (std::int64_t k = -1; k >= n; --k) acc = multiply(acc, inverse(increment(spec, omega, k)));
  }
  return acc;
}

WalkStream::WalkStream(const CocycleSpec& spec, Omega omega)
    : spec_(&spec), omega_(omega), forward_(spec.group.identity()), backward_(spec.group.identity()) {}

const GroupElement& WalkStream::advance(Direction d) {
  if (d == Direction::forward) {
    forward_ = multiply(forward_, increment(*spec_, omega_, n_forward_));
    ++n_forward_;
    return forward_;
  }
  ++n_backward_;
  backward_ = multiply(backward_, inverse(increment(*spec_, omega_, -n_backward_)));
  return backward_;
}

const GroupElement& WalkStream::position(Direction d) const { return d == Direction::forward ? forward_ : backward_; }

std::int64_t WalkStream::steps(Direction d) const { return d == Direction::forward ? n_forward_ : n_backward_; }

}  // namespace walkrange
