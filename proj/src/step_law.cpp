#include "walkrange/step_law.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "walkrange/errors.hpp"
#include "walkrange/integer_lattice.hpp"
#include "walkrange/zeta.hpp"

namespace walkrange {

namespace {

// Vose alias table.
struct AliasTable {
  std::vector<double> prob;
  std::vector<std::uint32_t> alias;

  explicit AliasTable(const std::vector<double>& p = {}) {
    const std::size_t n = p.size();
    prob.assign(n, 1.0);
    alias.resize(n);
    std::iota(alias.begin(), alias.end(), 0u);
    if (n == 0) return;
    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = p[i] * static_cast<double>(n);
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      const auto s = small.back();
      small.pop_back();
      const auto l = large.back();
      prob[s] = scaled[s];
      alias[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (auto i : large) prob[i] = 1.0;
    for (auto i : small) prob[i] = 1.0;
  }

  std::uint32_t draw(CounterRng& rng) const {
    const auto i = static_cast<std::uint32_t>(rng.below(prob.size()));
    return rng.uniform() < prob[i] ? i : alias[i];
  }
};

RawStep to_raw(const GroupElement& g) {
  RawStep r;
  if (const auto* p = std::get_if<ZdPoint>(&g)) {
    for (int i = 0; i < p->dim; ++i) r.x[i] = p->x[i];
  } else if (const auto* h = std::get_if<HeisPoint>(&g)) {
    r.x = {h->x, h->y, h->z};
  } else {
    const auto& w = std::get<FreeWord>(g);
    if (w.letters.size() > RawStep::kMaxWord) {
      throw UsageError("F2 atoms are limited to " + std::to_string(RawStep::kMaxWord) + " letters");
    }
    for (std::size_t i = 0; i < w.letters.size(); ++i) r.letters[i] = w.letters[i];
    r.length = static_cast<std::uint8_t>(w.letters.size());
  }
  return r;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

struct StepLaw::Impl {
  Group group;
  LawKind kind = LawKind::FiniteSupport;
  std::string token;

  // finite support and simple walks
  std::vector<Atom> atoms;
  std::vector<RawStep> raw;
  AliasTable alias;
  bool uniform = false;

  // zeta family
  double alpha = 0.0;
  double s = 0.0;
  double zeta_s = 0.0;
  std::int64_t cutoff = 0;
  // tail[k] = P(|X| > k), k = 0..cutoff
  std::vector<double> tail;

  // lazy
  double rho = 1.0;
  std::shared_ptr<const Impl> inner;
  StepLaw inner_handle;
};

const StepLaw::Impl& StepLaw::impl() const {
  if (!impl_) throw UsageError("empty step law");
  return *impl_;
}

StepLaw StepLaw::simple(const Group& g) {
  auto impl = std::make_shared<Impl>();
  impl->group = g;
  impl->kind = LawKind::SimpleRW;
  impl->token = "srw";
  const auto gens = g.generators();
  for (const auto& e : gens) {
    impl->atoms.push_back({e, 1.0 / static_cast<double>(gens.size())});
    impl->raw.push_back(to_raw(e));
  }
  impl->uniform = true;
  return StepLaw(impl);
}

StepLaw StepLaw::finite(const Group& g, std::vector<Atom> atoms) {
  if (atoms.empty()) throw UsageError("finite law needs at least one atom");
  double total = 0.0;
  for (const auto& a : atoms) {
    if (!g.contains(a.element)) throw UsageError("atom " + to_string(a.element) + " is not in group " + g.token());
    if (!(a.probability >= 0.0)) throw UsageError("negative atom probability");
    total += a.probability;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw UsageError("atom probabilities sum to " + format_number(total) + ", not 1");
  }
  auto impl = std::make_shared<Impl>();
  impl->group = g;
  impl->kind = LawKind::FiniteSupport;
  impl->token = "atoms:<inline>";
  std::vector<double> p;
  for (auto& a : atoms) {
    if (a.probability == 0.0) continue;
    impl->raw.push_back(to_raw(a.element));
    p.push_back(a.probability);
    impl->atoms.push_back(std::move(a));
  }
  impl->alias = AliasTable(p);
  return StepLaw(impl);
}

StepLaw StepLaw::zeta(double alpha, std::int64_t cutoff) {
  if (!(alpha >= 1.0 && alpha <= 2.0)) throw UsageError("zeta exponent alpha must lie in [1, 2]");
  if (alpha != 1.0 && alpha != 2.0 && (alpha - 1.0 < 1e-3 || 2.0 - alpha < 1e-3)) {
    throw UsageError("zeta exponent alpha within 1e-3 of an integer is not supported");
  }
  if (cutoff < 16) throw UsageError("zeta cutoff must be at least 16");
  auto impl = std::make_shared<Impl>();
  impl->group = Group(GroupKind::Z1);
  impl->kind = alpha == 1.0 ? LawKind::CauchyZeta : LawKind::SymmetricZeta;
  impl->token = alpha == 1.0 ? std::string("cauchy") : "zeta:" + format_number(alpha);
  impl->alpha = alpha;
  impl->s = 1.0 + alpha;
  impl->cutoff = cutoff;
  const double s = impl->s;
  // Normalization with the same head/tail split as the table, so tail[0] = 1.
  const double far = zeta_tail(s, static_cast<double>(cutoff) + 1.0);
  std::vector<double> partial(static_cast<std::size_t>(cutoff) + 1);
  // partial[k] = Sum_{m > k} m^{-s}, accumulated from the far end with
  // compensated summation.
  double sum = far, comp = 0.0;
  partial[cutoff] = far;
  for (std::int64_t k = cutoff; k >= 1; --k) {
    const double y = std::pow(static_cast<double>(k), -s) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    partial[k - 1] = sum;
  }
  impl->zeta_s = partial[0];
  impl->tail.resize(partial.size());
  for (std::size_t k = 0; k < partial.size(); ++k) impl->tail[k] = partial[k] / impl->zeta_s;
  impl->tail[0] = 1.0;
  return StepLaw(impl);
}

StepLaw StepLaw::cauchy(std::int64_t cutoff) { return zeta(1.0, cutoff); }

StepLaw StepLaw::lazy(const StepLaw& inner, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw UsageError("lazy holding parameter rho must lie in (0, 1)");
  auto impl = std::make_shared<Impl>();
  impl->group = inner.group();
  impl->kind = LawKind::Lazy;
  impl->token = "lazy:" + format_number(rho) + ":" + inner.token();
  impl->rho = rho;
  impl->inner = inner.impl_;
  impl->inner_handle = inner;
  return StepLaw(impl);
}

std::vector<Atom> StepLaw::read_atoms(const std::string& path, const Group& g) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read atom file '" + path + "'");
  std::vector<Atom> atoms;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream is(line);
    std::string elem, prob;
    if (!(is >> elem)) continue;
    if (!(is >> prob)) throw UsageError(path + ":" + std::to_string(lineno) + ": missing probability");
    std::string extra;
    if (is >> extra) throw UsageError(path + ":" + std::to_string(lineno) + ": trailing text");
    double p = 0.0;
    try {
      std::size_t used = 0;
      p = std::stod(prob, &used);
      if (used != prob.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": malformed probability '" + prob + "'");
    }
    atoms.push_back({g.parse_element(elem), p});
  }
  return atoms;
}

StepLaw StepLaw::parse(std::string_view token, const Group& g) {
  const std::string tok(token);
  if (tok == "srw") return simple(g);
  if (tok == "cauchy") {
    if (g.kind() != GroupKind::Z1) throw UsageError("law 'cauchy' lives on z1");
    return cauchy();
  }
  auto number = [&](const std::string& text) {
    try {
      std::size_t used = 0;
      double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw UsageError("malformed number '" + text + "' in law token '" + tok + "'");
    }
  };
  if (tok.rfind("zeta:", 0) == 0) {
    if (g.kind() != GroupKind::Z1) throw UsageError("law 'zeta' lives on z1");
    const double alpha = number(tok.substr(5));
    if (!(alpha > 1.0 && alpha <= 2.0)) throw UsageError("zeta alpha must lie in (1, 2]");
    StepLaw law = zeta(alpha);
    return law;
  }
  if (tok.rfind("atoms:", 0) == 0) {
    const std::string path = tok.substr(6);
    StepLaw law = finite(g, read_atoms(path, g));
    std::const_pointer_cast<Impl>(law.impl_)->token = tok;
    return law;
  }
  if (tok.rfind("lazy:", 0) == 0) {
    const auto colon = tok.find(':', 5);
    if (colon == std::string::npos) throw UsageError("law token 'lazy:<rho>:<inner>' is missing the inner law");
    const double rho = number(tok.substr(5, colon - 5));
    StepLaw inner = parse(tok.substr(colon + 1), g);
    StepLaw law = lazy(inner, rho);
    std::const_pointer_cast<Impl>(law.impl_)->token = tok;
    return law;
  }
  throw UsageError("unknown law token '" + tok + "'");
}

const Group& StepLaw::group() const { return impl().group; }
LawKind StepLaw::kind() const { return impl().kind; }
std::string StepLaw::token() const { return impl().token; }
double StepLaw::alpha() const { return impl().alpha; }
double StepLaw::rho() const { return impl().kind == LawKind::Lazy ? impl().rho : 1.0; }
std::int64_t StepLaw::cutoff() const { return impl().cutoff; }

const StepLaw& StepLaw::inner() const {
  if (impl().kind != LawKind::Lazy) throw UsageError("inner() on a non-lazy law");
  return impl().inner_handle;
}

bool StepLaw::has_finite_support() const {
  const auto& m = impl();
  if (m.kind == LawKind::Lazy) return StepLaw(m.inner).has_finite_support();
  return m.kind == LawKind::FiniteSupport || m.kind == LawKind::SimpleRW;
}

std::vector<Atom> StepLaw::atoms() const {
  const auto& m = impl();
  if (!has_finite_support()) throw UnsupportedError("law '" + m.token + "' has infinite support");
  std::vector<Atom> raw;
  if (m.kind == LawKind::Lazy) {
    raw.push_back({m.group.identity(), 1.0 - m.rho});
    for (auto a : StepLaw(m.inner).atoms()) {
      a.probability *= m.rho;
      raw.push_back(a);
    }
  } else {
    raw = m.atoms;
  }
  std::vector<Atom> merged;
  std::unordered_map<GroupElement, std::size_t, ElementHash> where;
  for (auto& a : raw) {
    auto [it, fresh] = where.emplace(a.element, merged.size());
    if (fresh) {
      merged.push_back(a);
    } else {
      merged[it->second].probability += a.probability;
    }
  }
  return merged;
}

namespace {

std::int64_t sample_zeta_magnitude(const StepLaw::Impl& m, double u, CounterRng& rng) {
  const auto& tail = m.tail;
  for (std::int64_t k = 1; k <= 16; ++k) {
    if (tail[k] < u) return k;
  }
  const std::int64_t K = m.cutoff;
  if (tail[K] < u) {
    // first k in (16, K] with tail[k] < u; tail is decreasing
    auto it = std::partition_point(tail.begin() + 17, tail.begin() + K + 1,
                                   [u](double v) { return v >= u; });
    return static_cast<std::int64_t>(it - tail.begin());
  }
  // Beyond the table: floor of a Pareto variable on [K+1, inf) with
  // rejection to the exact k^{-s} weights.
  const double s = m.s;
  const double kmin = static_cast<double>(K) + 1.0;
  const double bound = std::pow(1.0 + 1.0 / kmin, s) / (s - 1.0);
  while (true) {
    const double y = kmin * std::pow(rng.uniform_pos(), -1.0 / (s - 1.0));
    if (!(y < 0x1.0p62)) throw std::overflow_error("zeta increment exceeds the coordinate range");
    const double k = std::floor(y);
    const double ratio = 1.0 / (k * (-std::expm1((1.0 - s) * std::log1p(1.0 / k)))) / (s - 1.0);
    if (rng.uniform() * bound <= ratio) return static_cast<std::int64_t>(k);
  }
}

void sample_impl(const StepLaw::Impl& m, CounterRng& rng, RawStep& out) {
  switch (m.kind) {
    case LawKind::SimpleRW: {
      out = m.raw[rng.below(m.raw.size())];
      return;
    }
    case LawKind::FiniteSupport: {
      out = m.raw[m.alias.draw(rng)];
      return;
    }
    case LawKind::SymmetricZeta:
    case LawKind::CauchyZeta: {
      const std::uint64_t bits = rng.next_u64();
      const double u = static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
      const std::int64_t k = sample_zeta_magnitude(m, u, rng);
      out = RawStep{};
      out.x[0] = (bits & 1u) ? -k : k;
      return;
    }
    case LawKind::Lazy: {
      if (rng.uniform() >= m.rho) {
        out = RawStep{};
        return;
      }
      sample_impl(*m.inner, rng, out);
      return;
    }
  }
}

GroupElement from_raw(const Group& g, const RawStep& r) {
  if (g.kind() == GroupKind::F2) {
    FreeWord w;
    w.letters.assign(r.letters.begin(), r.letters.begin() + r.length);
    return w;
  }
  if (g.kind() == GroupKind::Heisenberg) return HeisPoint{r.x[0], r.x[1], r.x[2]};
  ZdPoint p{g.lattice_dim(), r.x};
  return p;
}

}  // namespace

void StepLaw::sample_raw(CounterRng& rng, RawStep& out) const { sample_impl(impl(), rng, out); }

GroupElement StepLaw::sample(CounterRng& rng) const {
  RawStep r;
  sample_raw(rng, r);
  return from_raw(group(), r);
}

std::complex<double> StepLaw::one_minus_char_fn(std::span<const double> t) const {
  const auto& m = impl();
  const int d = m.group.lattice_dim();
  if (d == 0) throw UnsupportedError("characteristic function needs a Z^d law");
  if (static_cast<int>(t.size()) != d) throw UsageError("frequency dimension does not match the group");
  switch (m.kind) {
    case LawKind::SimpleRW:
    case LawKind::FiniteSupport: {
      double re = 0.0, im = 0.0;
      for (std::size_t i = 0; i < m.atoms.size(); ++i) {
        double theta = 0.0;
        for (int k = 0; k < d; ++k) theta += static_cast<double>(m.raw[i].x[k]) * t[k];
        const double p = m.atoms[i].probability;
        const double h = std::sin(0.5 * theta);
        re += p * 2.0 * h * h;
        im -= p * std::sin(theta);
      }
      return {re, im};
    }
    case LawKind::SymmetricZeta:
    case LawKind::CauchyZeta: {
      double u = std::remainder(t[0], 2.0 * std::numbers::pi);
      return {cosine_series_deficit(m.s, u) / riemann_zeta(m.s), 0.0};
    }
    case LawKind::Lazy:
      return m.rho * StepLaw(m.inner).one_minus_char_fn(t);
  }
  return {};
}

std::complex<double> StepLaw::char_fn(std::span<const double> t) const {
  const auto& m = impl();
  if (m.kind == LawKind::SimpleRW || m.kind == LawKind::FiniteSupport) {
    if (m.group.lattice_dim() == 0) throw UnsupportedError("characteristic function needs a Z^d law");
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
      double theta = 0.0;
      for (std::size_t k = 0; k < t.size(); ++k) theta += static_cast<double>(m.raw[i].x[k]) * t[k];
      acc += m.atoms[i].probability * std::polar(1.0, theta);
    }
    return acc;
  }
  return 1.0 - one_minus_char_fn(t);
}

double zeta_tail_probability(double alpha, double k) {
  const double s = 1.0 + alpha;
  if (k < 1.0) return 1.0;
  return zeta_tail(s, std::floor(k) + 1.0) / riemann_zeta(s);
}

std::string to_string(Transience t) {
  switch (t) {
    case Transience::transient: return "transient";
    case Transience::recurrent: return "recurrent";
    case Transience::unknown: return "unknown";
  }
  return "";
}

// ---------------------------------------------------------------------------
// diagnostics

namespace {

IntVector coords_of(const GroupElement& g, int d) {
  IntVector v(static_cast<std::size_t>(d));
  const auto& p = std::get<ZdPoint>(g);
  for (int i = 0; i < d; ++i) v[i] = p.x[i];
  return v;
}

// gcd of loop lengths <= horizon returning to 0 for steps in Z^d.
int lattice_loop_gcd(const std::vector<IntVector>& steps, int d, int horizon) {
  std::int64_t reach = 0;
  for (const auto& s : steps) {
    std::int64_t n = 0;
    for (auto c : s) n += std::abs(c);
    reach = std::max(reach, n);
  }
  constexpr std::int64_t kBase = 4099, kShift = 2048;
  auto pack = [d](const IntVector& x) {
    std::uint64_t key = 0;
    for (int i = 0; i < d; ++i) key = key * kBase + static_cast<std::uint64_t>(x[i] + kShift);
    return key;
  };
  auto unpack = [d](std::uint64_t key, IntVector& x) {
    for (int i = d - 1; i >= 0; --i) {
      x[i] = static_cast<std::int64_t>(key % kBase) - kShift;
      key /= kBase;
    }
  };
  if (reach * horizon >= kShift) throw UnsupportedError("loop search radius too large");
  IntVector origin(static_cast<std::size_t>(d), 0), x(origin), y(origin);
  const std::uint64_t home = pack(origin);
  std::unordered_set<std::uint64_t> level{home};
  int g = 0;
  for (int len = 1; len <= horizon; ++len) {
    std::unordered_set<std::uint64_t> next;
    next.reserve(level.size() * 2);
    const std::int64_t budget = reach * (horizon - len);
    for (const auto key : level) {
      unpack(key, x);
      for (const auto& s : steps) {
        std::int64_t norm = 0;
        for (int i = 0; i < d; ++i) {
          y[i] = x[i] + s[i];
          norm += std::abs(y[i]);
        }
        if (norm <= budget) next.insert(pack(y));
      }
    }
    if (next.count(home)) {
      g = std::gcd(g, len);
      if (g == 1) return 1;
    }
    level.swap(next);
  }
  return g;
}

int group_loop_gcd(const std::vector<GroupElement>& steps, const Group& group, int horizon) {
  std::uint64_t reach = 0;
  for (const auto& s : steps) reach = std::max(reach, word_norm(s));
  std::unordered_set<GroupElement, ElementHash> level{group.identity()};
  int g = 0;
  for (int len = 1; len <= horizon; ++len) {
    std::unordered_set<GroupElement, ElementHash> next;
    const std::uint64_t budget = reach * static_cast<std::uint64_t>(horizon - len);
    for (const auto& x : level) {
      for (const auto& s : steps) {
        auto y = multiply(x, s);
        if (word_norm(inverse(y)) > budget) continue;
        next.insert(std::move(y));
      }
    }
    if (next.count(group.identity())) {
      g = std::gcd(g, len);
      if (g == 1) return 1;
    }
    level.swap(next);
  }
  return g;
}

// Average number of returns to the identity by a given time, from a few
// hundred simulated walks; used only where no analytic verdict exists.
Transience empirical_transience(const StepLaw& law) {
  constexpr int kWalks = 400;
  constexpr int kShort = 400, kLong = 4000;
  double short_returns = 0.0, long_returns = 0.0;
  for (int w = 0; w < kWalks; ++w) {
    GroupElement x = law.group().identity();
    for (int n = 1; n <= kLong; ++n) {
      CounterRng rng = increment_rng(0x7a11a5eedull, static_cast<std::uint32_t>(w), n - 1);
      x = multiply(x, law.sample(rng));
      if (is_identity(x)) {
        long_returns += 1.0;
        if (n <= kShort) short_returns += 1.0;
      }
    }
  }
  if (long_returns == 0.0) return Transience::transient;
  return long_returns / std::max(short_returns, 1.0) < 1.15 ? Transience::transient : Transience::recurrent;
}

void moment_sums(const std::vector<Atom>& atoms, int d, LawDiagnostics& out) {
  out.mean = Eigen::VectorXd::Zero(d);
  out.second_moment = Eigen::MatrixXd::Zero(d, d);
  for (const auto& a : atoms) {
    const auto& p = std::get<ZdPoint>(a.element);
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x[i] = static_cast<double>(p.x[i]);
    out.mean += a.probability * x;
    out.second_moment += a.probability * x * x.transpose();
  }
  out.a1_matrix = out.second_moment / 2.0;
  out.mean_finite = out.second_moment_finite = true;
}

bool is_centered(const LawDiagnostics& d) { return d.mean_finite && d.mean.cwiseAbs().maxCoeff() < 1e-13; }

LawDiagnostics diagnose_lattice_finite(const StepLaw& law) {
  LawDiagnostics out;
  const int d = law.group().lattice_dim();
  const auto atoms = law.atoms();
  std::vector<IntVector> vecs, diffs;
  for (const auto& a : atoms) vecs.push_back(coords_of(a.element, d));
  for (std::size_t i = 1; i < vecs.size(); ++i) {
    IntVector v(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) v[k] = vecs[i][k] - vecs[0][k];
    diffs.push_back(v);
  }
  out.aperiodic = generates_lattice(vecs, d);
  out.aperiodicity_certificate = "smith-normal-form";
  out.strongly_aperiodic = out.aperiodic && generates_lattice(diffs, d);
  out.strong_certificate = "smith-normal-form";
  out.support_rank = lattice_rank(vecs, d);
  out.loop_horizon = d >= 3 ? 32 : 64;
  std::int64_t reach = 0;
  for (const auto& v : vecs) {
    std::int64_t n = 0;
    for (auto c : v) n += std::abs(c);
    reach = std::max(reach, n);
  }
  while (out.loop_horizon > 8 && reach * out.loop_horizon >= 2048) out.loop_horizon /= 2;
  out.loop_gcd = reach * out.loop_horizon < 2048 ? lattice_loop_gcd(vecs, d, out.loop_horizon) : 0;
  moment_sums(atoms, d, out);
  out.transience_provenance = "analytic";
  if (out.support_rank >= 3 || !is_centered(out)) {
    out.transience = Transience::transient;
  } else {
    out.transience = Transience::recurrent;
  }
  if (d == 2 && is_centered(out) && std::abs(out.second_moment.determinant()) > 1e-12) out.assumption = "A1";
  return out;
}

LawDiagnostics diagnose_zeta(const StepLaw& law) {
  LawDiagnostics out;
  out.aperiodic = true;
  out.aperiodicity_certificate = "smith-normal-form";
  out.support_rank = 1;
  // loops of the law restricted to |k| <= 8
  std::vector<IntVector> steps;
  for (int k = 1; k <= 8; ++k) {
    steps.push_back({k});
    steps.push_back({-k});
  }
  if (law.kind() == LawKind::Lazy) steps.push_back({0});
  out.loop_horizon = 64;
  out.loop_gcd = lattice_loop_gcd(steps, 1, 64);
  out.strongly_aperiodic = out.loop_gcd == 1;
  out.strong_certificate = "bounded-horizon";
  const double alpha = law.kind() == LawKind::Lazy ? law.inner().alpha() : law.alpha();
  const double rho = law.rho();
  out.mean_finite = alpha > 1.0;
  if (out.mean_finite) out.mean = Eigen::VectorXd::Zero(1);
  out.second_moment_finite = false;
  if (alpha == 1.0) {
    out.cauchy_scale = rho * 3.0 / std::numbers::pi;
    out.assumption = "A2";
  }
  out.transience = Transience::recurrent;
  out.transience_provenance = "analytic";
  return out;
}

LawDiagnostics diagnose_nonabelian(const StepLaw& law) {
  LawDiagnostics out;
  const Group& g = law.group();
  const auto atoms = law.atoms();
  std::vector<GroupElement> support;
  std::vector<IntVector> abel;
  for (const auto& a : atoms) {
    support.push_back(a.element);
    if (g.kind() == GroupKind::Heisenberg) {
      const auto& h = std::get<HeisPoint>(a.element);
      abel.push_back({h.x, h.y});
    } else {
      IntVector v{0, 0};
      for (Letter l : std::get<FreeWord>(a.element).letters) {
        const int sign = (static_cast<int>(l) & 1) ? -1 : 1;
        v[static_cast<int>(l) >> 1] += sign;
      }
      abel.push_back(v);
    }
  }
  const bool abel_full = generates_lattice(abel, 2);
  out.support_rank = lattice_rank(abel, 2);
  if (g.kind() == GroupKind::Heisenberg) {
    // A subgroup of a nilpotent group surjecting onto the abelianization is everything.
    out.aperiodic = abel_full;
    out.aperiodicity_certificate = "abelianization";
  } else {
    bool has_a = false, has_b = false;
    for (const auto& s : support) {
      const auto& w = std::get<FreeWord>(s);
      if (w.letters.size() == 1) {
        (static_cast<int>(w.letters[0]) < 2 ? has_a : has_b) = true;
      }
    }
    out.aperiodic = abel_full && has_a && has_b;
    out.aperiodicity_certificate = has_a && has_b ? "abelianization" : "abelianization (necessary condition only)";
  }
  out.loop_horizon = g.kind() == GroupKind::F2 ? 12 : 20;
  out.loop_gcd = group_loop_gcd(support, g, out.loop_horizon);
  out.strongly_aperiodic = out.aperiodic && out.loop_gcd == 1;
  out.strong_certificate = "bounded-horizon";

  bool commuting = true;
  for (std::size_t i = 0; i < support.size() && commuting; ++i) {
    for (std::size_t j = i + 1; j < support.size(); ++j) {
      if (!(multiply(support[i], support[j]) == multiply(support[j], support[i]))) {
        commuting = false;
        break;
      }
    }
  }
  const bool big = g.kind() == GroupKind::F2 ? !commuting : out.support_rank == 2;
  if (big) {
    out.transience = Transience::transient;
    out.transience_provenance = "analytic";
  } else {
    out.transience = empirical_transience(law);
    out.transience_provenance = "empirical";
  }
  return out;
}

}  // namespace

LawDiagnostics diagnose(const StepLaw& law) {
  const Group& g = law.group();
  if (law.has_finite_support()) {
    if (g.is_lattice()) return diagnose_lattice_finite(law);
    return diagnose_nonabelian(law);
  }
  return diagnose_zeta(law);
}

}  // namespace walkrange
