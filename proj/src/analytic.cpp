#include "walkrange/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "walkrange/errors.hpp"
#include "walkrange/stats.hpp"

namespace walkrange {

namespace {

constexpr double kPi = std::numbers::pi;

int lattice_dim_of(const StepLaw& law) {
  const int d = law.group().lattice_dim();
  if (d == 0) throw UnsupportedError("analytic quantities need a Z^d law, got group " + law.group().token());
  return d;
}

void check_point(const ZdPoint& g, int d) {
  if (g.dim != d) throw UsageError("element " + to_string(GroupElement{g}) + " is not in Z^" + std::to_string(d));
}

bool has_drift(const LawDiagnostics& diag) { return diag.mean_finite && diag.mean.size() > 0 && diag.mean.norm() > 1e-13; }

double dot(const ZdPoint& g, const double* t, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += static_cast<double>(g.x[static_cast<std::size_t>(i)]) * t[i];
  return s;
}

double euclid(const ZdPoint& g, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += std::pow(static_cast<double>(g.x[static_cast<std::size_t>(i)]), 2);
  return std::sqrt(s);
}

double law_alpha(const StepLaw& law) { return law.kind() == LawKind::Lazy ? law.inner().alpha() : law.alpha(); }

}  // namespace

std::vector<AnalyticResult> green_quadrature(const StepLaw& law, const std::vector<ZdPoint>& gs,
                                             const QuadratureSettings& s) {
  const int d = lattice_dim_of(law);
  for (const auto& g : gs) check_point(g, d);
  const auto diag = diagnose(law);
  if (diag.transience != Transience::transient) {
    throw DomainError("law " + law.token() + " is recurrent: the Green function diverges (use potential_kernel)");
  }
  if (!diag.aperiodic) throw UnsupportedError("Green function quadrature needs an aperiodic law");
  const bool drift = has_drift(diag);
  if (drift && d >= 2) throw UnsupportedError("Green function of drifted walks is supported on Z only");
  if (!drift && d < 3) throw UnsupportedError("transient centered walks need dimension 3");
  SingularIntegrand f;
  f.dim = d;
  f.outputs = gs.size();
  f.degree = drift ? 0.0 : -2.0;
  for (const auto& g : gs) f.frequency = std::max(f.frequency, euclid(g, d));
  f.eval = [&](const double* t, double* out) {
    const std::complex<double> inv = 1.0 / law.one_minus_char_fn(std::span<const double>(t, static_cast<std::size_t>(d)));
    for (std::size_t k = 0; k < gs.size(); ++k) {
      const double th = dot(gs[k], t, d);
      out[k] = std::cos(th) * inv.real() + std::sin(th) * inv.imag();
    }
  };
  const auto q = torus_average(f, s);
  // drifted walks on Z: the Abel limit of sum phi^n carries pi / |mu| at t = 0
  const double atom = drift ? 0.5 / std::abs(diag.mean[0]) : 0.0;
  std::vector<AnalyticResult> out;
  for (std::size_t k = 0; k < gs.size(); ++k) out.push_back({q.value[k] + atom, q.error[k], "quadrature"});
  return out;
}

std::vector<AnalyticResult> green_batch(const StepLaw& law, const std::vector<ZdPoint>& gs, const QuadratureSettings& s) {
  const int d = lattice_dim_of(law);
  for (const auto& g : gs) check_point(g, d);
  if (law.has_finite_support()) {
    const auto atoms = law.atoms();
    if (atoms.size() == 1 && !is_identity(atoms[0].element)) {
      // S_n = n x: every site n x, n >= 0, is visited exactly once
      const auto& x = std::get<ZdPoint>(atoms[0].element);
      std::vector<AnalyticResult> out;
      for (const auto& g : gs) {
        bool on_ray = true;
        std::int64_t k = -1;
        for (int i = 0; i < d && on_ray; ++i) {
          const auto xi = x.x[static_cast<std::size_t>(i)], gi = g.x[static_cast<std::size_t>(i)];
          if (xi == 0) {
            on_ray = gi == 0;
          } else if (gi % xi != 0 || gi / xi < 0 || (k >= 0 && gi / xi != k)) {
            on_ray = false;
          } else {
            k = gi / xi;
          }
        }
        out.push_back({on_ray ? 1.0 : 0.0, 0.0, "closed-form"});
      }
      return out;
    }
  }
  return green_quadrature(law, gs, s);
}

AnalyticResult green(const StepLaw& law, const ZdPoint& g, const QuadratureSettings& s) {
  return green_batch(law, {g}, s).front();
}

std::vector<AnalyticResult> potential_kernel_batch(const StepLaw& law, const std::vector<ZdPoint>& js,
                                                   const QuadratureSettings& s) {
  const int d = lattice_dim_of(law);
  for (const auto& j : js) check_point(j, d);
  const auto diag = diagnose(law);
  if (diag.transience == Transience::transient) {
    throw DomainError("law " + law.token() + " is transient: use green instead of potential_kernel");
  }
  if (!diag.aperiodic) throw UnsupportedError("potential kernel quadrature needs an aperiodic law");
  std::vector<ZdPoint> nonzero;
  for (const auto& j : js) {
    if (!is_identity(GroupElement{j})) nonzero.push_back(j);
  }
  std::vector<double> values(nonzero.size()), errors(nonzero.size());
  if (!nonzero.empty()) {
    SingularIntegrand f;
    f.dim = d;
    f.outputs = nonzero.size();
    f.degree = law.has_finite_support() ? 0.0 : 2.0 - law_alpha(law);
    for (const auto& j : nonzero) f.frequency = std::max(f.frequency, euclid(j, d));
    f.eval = [&](const double* t, double* out) {
      const std::complex<double> z = law.one_minus_char_fn(std::span<const double>(t, static_cast<std::size_t>(d)));
      const double den = std::norm(z);
      for (std::size_t k = 0; k < nonzero.size(); ++k) {
        const double th = dot(nonzero[k], t, d);
        const double h = std::sin(0.5 * th);
        // Re[(1 - e^{i th}) / z]
        out[k] = (2.0 * h * h * z.real() - std::sin(th) * z.imag()) / den;
      }
    };
    const auto q = torus_average(f, s);
    values = q.value;
    errors = q.error;
  }
  std::vector<AnalyticResult> out;
  std::size_t k = 0;
  for (const auto& j : js) {
    if (is_identity(GroupElement{j})) {
      out.push_back({0.0, 0.0, "closed-form"});
    } else {
      out.push_back({values[k], errors[k], "quadrature"});
      ++k;
    }
  }
  return out;
}

AnalyticResult potential_kernel(const StepLaw& law, const ZdPoint& j, const QuadratureSettings& s) {
  return potential_kernel_batch(law, {j}, s).front();
}

TabooPair two_point_taboo(const StepLaw& law, const ZdPoint& j, const QuadratureSettings& s) {
  if (is_identity(GroupElement{j})) throw DomainError("two-point taboo needs j != 0");
  ZdPoint mj = j;
  for (auto& c : mj.x) c = checked_neg(c);
  const auto a = potential_kernel_batch(law, {j, mj}, s);
  const double sum = a[0].value + a[1].value;
  if (!(sum > 0.0)) throw DomainError("a(j) + a(-j) must be positive");
  const double err = (a[0].error + a[1].error) / sum;
  return {{a[0].value / sum, err, "quadrature"}, {a[1].value / sum, err, "quadrature"}};
}

// ---------------------------------------------------------------------------
// return partial sums and gamma

namespace {

std::vector<double> partial_sums_convolution(const StepLaw& law, const std::vector<std::int64_t>& ns,
                                             const QuadratureSettings& s) {
  const int d = law.group().lattice_dim();
  if (d > 2) throw UnsupportedError("convolution partial sums support Z and Z^2");
  const auto atoms = law.atoms();
  const auto diag = diagnose(law);
  const double lam = std::max(diag.second_moment.eigenvalues().real().maxCoeff(), 1e-12);
  const std::int64_t nmax = ns.back();
  std::int64_t reach = 0;
  struct Move {
    std::int64_t dx, dy;
    double p;
  };
  std::vector<Move> moves;
  for (const auto& a : atoms) {
    const auto& p = std::get<ZdPoint>(a.element);
    reach = std::max({reach, std::abs(p.x[0]), d == 2 ? std::abs(p.x[1]) : std::int64_t{0}});
    moves.push_back({p.x[0], d == 2 ? p.x[1] : 0, a.probability});
  }
  const std::int64_t radius = std::min<std::int64_t>(
      static_cast<std::int64_t>(std::ceil(s.window_sigmas * std::sqrt(static_cast<double>(nmax) * std::max(lam, 1.0)))) + reach,
      nmax * reach);
  const std::int64_t W = 2 * radius + 1;
  const std::int64_t cells = d == 1 ? W : W * W;
  if (cells > (std::int64_t{1} << 28)) throw UnsupportedError("convolution window too large; lower gamma_log2_max");
  auto idx = [&](std::int64_t a, std::int64_t b) {
    return static_cast<std::size_t>((a + radius) + (d == 2 ? (b + radius) * W : 0));
  };
  std::vector<double> cur(static_cast<std::size_t>(cells), 0.0), nxt(cur.size(), 0.0);
  cur[idx(0, 0)] = 1.0;
  std::int64_t lo0 = 0, hi0 = 0, lo1 = 0, hi1 = 0;
  CompensatedSum U, lost;
  U.add(1.0);
  std::vector<double> out;
  std::size_t next = 0;
  while (next < ns.size() && ns[next] == 0) {
    out.push_back(U.value());
    ++next;
  }
  for (std::int64_t n = 1; n <= nmax; ++n) {
    const std::int64_t nlo0 = std::max(lo0 - reach, -radius), nhi0 = std::min(hi0 + reach, radius);
    const std::int64_t nlo1 = d == 2 ? std::max(lo1 - reach, -radius) : 0;
    const std::int64_t nhi1 = d == 2 ? std::min(hi1 + reach, radius) : 0;
    for (std::int64_t b = nlo1; b <= nhi1; ++b) {
      for (std::int64_t a = nlo0; a <= nhi0; ++a) nxt[idx(a, b)] = 0.0;
    }
    for (std::int64_t b = lo1; b <= hi1; ++b) {
      for (std::int64_t a = lo0; a <= hi0; ++a) {
        const double v = cur[idx(a, b)];
        if (v == 0.0) continue;
        for (const auto& m : moves) {
          const std::int64_t na = a + m.dx, nb = b + m.dy;
          if (std::abs(na) > radius || std::abs(nb) > radius) {
            lost.add(v * m.p);
          } else {
            nxt[idx(na, nb)] += v * m.p;
          }
        }
        cur[idx(a, b)] = 0.0;
      }
    }
    lo0 = nlo0;
    hi0 = nhi0;
    lo1 = nlo1;
    hi1 = nhi1;
    std::swap(cur, nxt);
    U.add(cur[idx(0, 0)]);
    if (lost.value() > s.max_lost_mass) {
      throw DomainError("convolution window lost mass " + std::to_string(lost.value()) + " above the abort level");
    }
    while (next < ns.size() && ns[next] == n) {
      out.push_back(U.value());
      ++next;
    }
  }
  return out;
}

// (1 / 2 pi) int Re[(1 - phi^{n+1}) / (1 - phi)] dt with panels graded towards 0.
std::vector<double> partial_sums_fourier(const StepLaw& law, const std::vector<std::int64_t>& ns) {
  constexpr int kOrder = 24;
  const auto& g = gauss_legendre(kOrder);
  std::vector<CompensatedSum> acc(ns.size());
  for (int p = 0; p < 90; ++p) {
    const double b = kPi * std::ldexp(1.0, -p), a = 0.5 * b;
    for (int m = 0; m < kOrder; ++m) {
      const double t = 0.5 * (a + b) + 0.5 * (b - a) * g.x[static_cast<std::size_t>(m)];
      const double w = 0.5 * (b - a) * g.w[static_cast<std::size_t>(m)];
      for (double sign : {1.0, -1.0}) {
        const double ts = sign * t;
        const std::complex<double> z = law.one_minus_char_fn(std::span<const double>(&ts, 1));
        const std::complex<double> phi = 1.0 - z;
        const std::complex<double> lphi = std::log(phi);
        for (std::size_t k = 0; k < ns.size(); ++k) {
          const std::complex<double> pw = std::exp(static_cast<double>(ns[k] + 1) * lphi);
          acc[k].add(w * ((1.0 - pw) / z).real());
        }
      }
    }
  }
  std::vector<double> out;
  for (auto& a : acc) out.push_back(a.value() / (2.0 * kPi));
  return out;
}

}  // namespace

std::vector<double> return_partial_sums(const StepLaw& law, const std::vector<std::int64_t>& ns,
                                        const QuadratureSettings& s) {
  const int d = lattice_dim_of(law);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 0 || (i > 0 && ns[i] <= ns[i - 1])) throw UsageError("n values must be increasing and nonnegative");
  }
  if (ns.empty()) return {};
  if (law.has_finite_support()) return partial_sums_convolution(law, ns, s);
  if (d != 1) throw UnsupportedError("partial sums for infinite-support laws need Z");
  return partial_sums_fourier(law, ns);
}

AnalyticResult gamma_constant(const StepLaw& law, const QuadratureSettings& s) {
  lattice_dim_of(law);
  const auto diag = diagnose(law);
  if (diag.transience == Transience::transient) throw DomainError("law " + law.token() + " is transient: gamma undefined");
  if (diag.assumption != "A1" && diag.assumption != "A2") throw DomainError("gamma needs a law under (A1) or (A2)");
  const bool conv = law.has_finite_support();
  const int lo = s.gamma_log2_min > 0 ? s.gamma_log2_min : (conv ? 5 : 10);
  const int hi = s.gamma_log2_max > 0 ? s.gamma_log2_max : (conv ? 10 : 20);
  if (hi - lo < 3) throw UsageError("gamma fit needs at least four dyadic points");
  std::vector<std::int64_t> ns;
  for (int k = lo; k <= hi; ++k) ns.push_back(std::int64_t{1} << k);
  const auto U = return_partial_sums(law, ns, s);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    x.push_back(std::log(static_cast<double>(ns[i])));
    y.push_back(U[i]);
  }
  const LinearFit all = least_squares(x, y);
  const std::size_t half = x.size() / 2;
  const LinearFit upper = least_squares(std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(half), x.end()),
                                        std::vector<double>(y.begin() + static_cast<std::ptrdiff_t>(half), y.end()));
  const double c = upper.slope;
  const double err_c = std::max(std::abs(upper.slope - all.slope), upper.slope_se);
  return {1.0 / c, err_c / (c * c), conv ? "convolution" : "quadrature"};
}

HittingConstants hitting_constants(const StepLaw& law, const ZdPoint& j, const QuadratureSettings& s) {
  if (is_identity(GroupElement{j})) throw DomainError("hitting constants need j != 0");
  const AnalyticResult gamma = gamma_constant(law, s);
  ZdPoint mj = j;
  for (auto& c : mj.x) c = checked_neg(c);
  const auto a = potential_kernel_batch(law, {j, mj}, s);
  const double sum = a[0].value + a[1].value;
  if (!(sum > 0.0)) throw DomainError("a(j) + a(-j) must be positive");
  const double ratio = a[1].value / sum;
  const double ratio_err = (a[0].error + a[1].error) / sum;
  HittingConstants h;
  h.c = {gamma.value * ratio, gamma.error * ratio + gamma.value * ratio_err, gamma.method + "+quadrature"};
  h.d = {gamma.value * a[1].value, gamma.error * a[1].value + gamma.value * a[1].error, gamma.method + "+quadrature"};
  return h;
}

AnalyticResult escape_from_green(const StepLaw& law, const ZdPoint& g, const QuadratureSettings& s) {
  const int d = lattice_dim_of(law);
  check_point(g, d);
  ZdPoint zero{d, {0, 0, 0}};
  if (is_identity(GroupElement{g})) {
    const auto G0 = green(law, zero, s);
    return {1.0 / G0.value, G0.error / (G0.value * G0.value), G0.method};
  }
  const auto G = green_batch(law, {zero, g}, s);
  const double q = 1.0 - G[1].value / G[0].value;
  const double err = G[1].error / G[0].value + G[1].value * G[0].error / (G[0].value * G[0].value);
  return {q, err, G[0].method};
}

}  // namespace walkrange
