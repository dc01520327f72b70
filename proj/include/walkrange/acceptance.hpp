#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace walkrange {

enum class Tier { quick, full };

Tier parse_tier(const std::string& token);

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string measured;  // measured values and the bounds they were held to
  double seconds = 0.0;
};

// "[PASS|FAIL] <id> <title>: <measured> (<seconds> s)"
std::string format_result(const CriterionResult& r);

// Runs the acceptance criteria (all when `only` is empty), printing one line
// per criterion to `log` as it finishes. The full tier uses the documented
// sizes; the quick tier shrinks ensembles and horizons for a smoke run.
std::vector<CriterionResult> run_acceptance(Tier tier, int threads, std::ostream& log, const std::vector<int>& only = {});

}  // namespace walkrange
