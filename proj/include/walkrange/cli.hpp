#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "walkrange/estimators.hpp"

namespace walkrange {

enum class Subcommand { simulate, analytic, fit, verify };

std::string to_string(Subcommand c);

struct RunConfig {
  Subcommand command = Subcommand::simulate;

  // simulate
  std::string group = "z1";
  std::string law = "srw";
  std::string base = "bernoulli";
  std::int64_t steps = 0;
  std::int64_t reps = 0;
  std::vector<std::string> stats;
  std::uint64_t seed = kDefaultSeed;
  bool two_sided = false;
  std::int64_t horizon = 0;
  // checkpoint schedule n0 r^k; n0 = 0 picks clamp(steps / 64, 1, 1000)
  double first_checkpoint = 0.0;
  double checkpoint_ratio = 1.5;
  std::string out;
  int threads = 1;

  // analytic
  std::string quantity;
  std::string arg;

  // fit
  std::string in;
  std::string statistic;
  double n_min = 0.0;
  double n_max = 0.0;

  // verify
  std::string tier = "quick";

  int verbosity = 0;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Thrown by parse_args for --help; what() is the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arguments after the program name. Throws UsageError naming the offending
// flag.
RunConfig parse_args(const std::vector<std::string>& args);

// Canonical argument list; parse_args(to_args(c)) == c.
std::vector<std::string> to_args(const RunConfig& c);

// Experiment plan of a simulate config.
ExperimentPlan build_plan(const RunConfig& c);

// quantity,element,value,error,method records of an analytic config; one
// line per component (taboo2 and hitconst have two).
std::vector<std::string> analytic_records(const RunConfig& c);

// index,uncertainty,intercept,residual of a fit config.
std::string fit_record(const RunConfig& c);

// Full front end; returns the process exit code (0 ok, 1 failure, 2 usage).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace walkrange
