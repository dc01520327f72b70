#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "walkrange/group.hpp"
#include "walkrange/rng.hpp"

namespace walkrange {

struct Atom {
  GroupElement element;
  double probability = 0.0;
};

enum class LawKind { FiniteSupport, SimpleRW, SymmetricZeta, CauchyZeta, Lazy };

// Flat increment used by the hot simulation loops: up to three integer
// coordinates (Z^d, H3) or up to kMaxWord letters (F2).
struct RawStep {
  static constexpr int kMaxWord = 14;
  std::array<std::int64_t, 3> x{};
  std::array<Letter, kMaxWord> letters{};
  std::uint8_t length = 0;
};

class StepLaw {
 public:
  static constexpr std::int64_t kDefaultCutoff = 1'000'000;

  StepLaw() = default;

  static StepLaw simple(const Group& g);
  static StepLaw finite(const Group& g, std::vector<Atom> atoms);
  // P(X = +-k) = k^{-(1+alpha)} / (2 zeta(1+alpha)) on Z, alpha in (1, 2].
  static StepLaw zeta(double alpha, std::int64_t cutoff = kDefaultCutoff);
  // alpha = 1 member of the same family.
  static StepLaw cauchy(std::int64_t cutoff = kDefaultCutoff);
  // Holds with probability 1 - rho.
  static StepLaw lazy(const StepLaw& inner, double rho);
  // srw | atoms:<file> | zeta:<alpha> | cauchy | lazy:<rho>:<inner>
  static StepLaw parse(std::string_view token, const Group& g);
  static std::vector<Atom> read_atoms(const std::string& path, const Group& g);

  const Group& group() const;
  LawKind kind() const;
  std::string token() const;
  // Tail index for zeta laws (1 for Cauchy), 0 otherwise.
  double alpha() const;
  double rho() const;
  const StepLaw& inner() const;
  std::int64_t cutoff() const;
  bool has_finite_support() const;
  // Law as an explicit atom list (merged, identity included); finite support only.
  std::vector<Atom> atoms() const;

  GroupElement sample(CounterRng& rng) const;
  void sample_raw(CounterRng& rng, RawStep& out) const;

  // Z^d laws only.
  std::complex<double> char_fn(std::span<const double> t) const;
  // 1 - phi(t), computed without cancellation near t = 0.
  std::complex<double> one_minus_char_fn(std::span<const double> t) const;

  struct Impl;

 private:
  explicit StepLaw(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  const Impl& impl() const;
  std::shared_ptr<const Impl> impl_;
};

// P(|X| > k) for the symmetric zeta law of exponent 1 + alpha, from exact
// tail sums.
double zeta_tail_probability(double alpha, double k);

enum class Transience { transient, recurrent, unknown };

struct LawDiagnostics {
  bool aperiodic = false;
  bool strongly_aperiodic = false;
  // "smith-normal-form", "bounded-horizon", "abelianization"
  std::string aperiodicity_certificate;
  std::string strong_certificate;
  // gcd of positive-probability return-loop lengths up to loop_horizon (0 if none found)
  int loop_gcd = 0;
  int loop_horizon = 0;
  bool mean_finite = false;
  bool second_moment_finite = false;
  Eigen::VectorXd mean;
  // E[xi xi^T]
  Eigen::MatrixXd second_moment;
  // Quadratic-form convention: E[xi xi^T] / 2
  Eigen::MatrixXd a1_matrix;
  std::optional<double> cauchy_scale;
  // rank of the subgroup generated by the support (Z^d)
  int support_rank = 0;
  Transience transience = Transience::unknown;
  std::string transience_provenance;  // "analytic" | "empirical"
  // "A1", "A2" or "" when neither assumption holds
  std::string assumption;
};

LawDiagnostics diagnose(const StepLaw& law);

std::string to_string(Transience t);

}  // namespace walkrange
