#include "walkrange/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "walkrange/acceptance.hpp"
#include "walkrange/analytic.hpp"
#include "walkrange/errors.hpp"
#include "walkrange/report_io.hpp"

namespace walkrange {

namespace {

// Re-throws any parsing failure as a usage error that names the flag.
template <class F>
auto with_flag(const std::string& flag, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const UsageError& e) {
    throw UsageError(flag + ": " + e.what());
  } catch (const UnsupportedError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ';' || c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string real_text(double v) { return format_real(v); }

void parse_range(const std::string& text, double& lo, double& hi) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--range: expected <nmin>:<nmax>, got '" + text + "'");
  try {
    std::size_t p1 = 0, p2 = 0;
    const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
    lo = std::stod(a, &p1);
    hi = std::stod(b, &p2);
    if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument("trailing text");
  } catch (const std::exception&) {
    throw UsageError("--range: malformed range '" + text + "'");
  }
  if (!(lo > 0.0) || !(hi >= lo)) throw UsageError("--range: need 0 < nmin <= nmax");
}

std::string infer_group(const std::string& arg) {
  if (arg.empty()) return "z1";
  if (arg.find_first_of("aAbB") != std::string::npos) return "f2";
  const auto commas = std::count(arg.begin(), arg.end(), ',');
  return commas == 0 ? "z1" : commas == 1 ? "z2" : "z3";
}

const char* kQuantities[] = {"green", "akernel", "taboo2", "gamma", "hitconst"};

}  // namespace

std::string to_string(Subcommand c) {
  switch (c) {
    case Subcommand::simulate: return "simulate";
    case Subcommand::analytic: return "analytic";
    case Subcommand::fit: return "fit";
    case Subcommand::verify: return "verify";
  }
  return "simulate";
}

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig c;
  c.threads = default_threads();
  CLI::App app{"walkrange: range of random walks and cocycles on countable groups"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all");

  std::vector<std::string> stats_items;
  std::string range_text;
  std::string group_text;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo ensemble of range statistics");
  sim->add_option("--group", c.group, "z1 | z2 | z3 | f2 | heis")->capture_default_str();
  sim->add_option("--law", c.law, "srw | atoms:<file> | zeta:<alpha> | cauchy | lazy:<rho>:<inner>")
      ->capture_default_str();
  sim->add_option("--base", c.base, "bernoulli | rotation:<theta>:<beta>:<x0>")->capture_default_str();
  sim->add_option("--steps", c.steps, "walk length n")->required();
  sim->add_option("--reps", c.reps, "number of trajectories")->required();
  sim->add_option("--stats", stats_items,
                  "statistics, as separate values or joined by ';': range boundary bratio noreturn vboundary:<v> "
                  "folner:<g>, bwd_ prefix for the backward walk")
      ->required();
  sim->add_option("--seed", c.seed, "master seed")->capture_default_str();
  sim->add_flag("--two-sided", c.two_sided, "also record every statistic for the backward walk");
  sim->add_option("--horizon", c.horizon, "truncation horizon for no-return events; 0 means the last checkpoint")
      ->capture_default_str();
  sim->add_option("--n0", c.first_checkpoint, "first checkpoint; 0 picks clamp(steps / 64, 1, 1000)")
      ->capture_default_str();
  sim->add_option("--ratio", c.checkpoint_ratio, "checkpoint growth ratio")->capture_default_str();
  sim->add_option("--out", c.out, "output path, .csv or .json")->required();
  sim->add_option("--threads", c.threads, "worker threads (speed only, never results)")->capture_default_str();
  sim->add_flag("-v,--verbose", c.verbosity, "progress on stderr");

  auto* ana = app.add_subcommand("analytic", "deterministic quantities by quadrature or closed form");
  ana->add_option("--law", c.law, "step law token")->capture_default_str();
  ana->add_option("--group", group_text, "z1 | z2 | z3; inferred from --arg when omitted");
  ana->add_option("--quantity", c.quantity, "green | akernel | taboo2 | gamma | hitconst")->required();
  ana->add_option("--arg", c.arg, "element, comma-separated integers");
  ana->add_flag("-v,--verbose", c.verbosity, "");

  auto* fit = app.add_subcommand("fit", "log-log fit of one statistic from a simulate CSV");
  fit->add_option("--in", c.in, "CSV written by simulate")->required();
  fit->add_option("--statistic", c.statistic, "statistic token, name or name:element")->required();
  fit->add_option("--range", range_text, "<nmin>:<nmax>")->required();
  fit->add_flag("-v,--verbose", c.verbosity, "");

  auto* ver = app.add_subcommand("verify", "run the acceptance criteria");
  ver->add_option("--tier", c.tier, "quick | full")->capture_default_str();
  ver->add_option("--threads", c.threads, "worker threads")->capture_default_str();
  ver->add_flag("-v,--verbose", c.verbosity, "");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (sim->parsed()) {
    c.command = Subcommand::simulate;
    const Group g = with_flag("--group", [&] { return Group::parse(c.group); });
    if (c.base == "bernoulli") {
      with_flag("--law", [&] { return StepLaw::parse(c.law, g); });
    }
    if (c.steps <= 0) throw UsageError("--steps: must be positive");
    if (c.reps <= 0) throw UsageError("--reps: must be positive");
    if (c.reps > (std::int64_t{1} << 32)) throw UsageError("--reps: at most 2^32 trajectories");
    for (const auto& item : stats_items) {
      for (auto& s : split_list(item)) c.stats.push_back(std::move(s));
    }
    if (c.stats.empty()) throw UsageError("--stats: empty statistic list");
    for (const auto& s : c.stats) with_flag("--stats", [&] { return StatRequest::parse(s, g); });
    if (c.horizon < 0 || c.horizon > c.steps) throw UsageError("--horizon: must lie in [0, steps]");
    if (c.first_checkpoint < 0.0) throw UsageError("--n0: must be nonnegative");
    if (!(c.checkpoint_ratio > 1.0)) throw UsageError("--ratio: must exceed 1");
    if (c.threads < 1) throw UsageError("--threads: must be positive");
    const bool csv = c.out.size() > 4 && c.out.ends_with(".csv");
    const bool json = c.out.size() > 5 && c.out.ends_with(".json");
    if (!csv && !json) throw UsageError("--out: path must end in .csv or .json");
    with_flag("--base", [&] {
      const StepLaw law = c.base == "bernoulli" ? StepLaw::parse(c.law, g) : StepLaw{};
      return CocycleSpec::parse(c.base, g, c.base == "bernoulli" ? &law : nullptr);
    });
  } else if (ana->parsed()) {
    c.command = Subcommand::analytic;
    c.group = group_text.empty() ? infer_group(c.arg) : group_text;
    const Group g = with_flag("--group", [&] { return Group::parse(c.group); });
    if (!g.is_lattice()) throw UsageError("--group: analytic quantities need z1, z2 or z3");
    with_flag("--law", [&] { return StepLaw::parse(c.law, g); });
    if (std::find(std::begin(kQuantities), std::end(kQuantities), c.quantity) == std::end(kQuantities)) {
      throw UsageError("--quantity: unknown quantity '" + c.quantity + "'");
    }
    if (!c.arg.empty()) with_flag("--arg", [&] { return g.parse_element(c.arg); });
    if ((c.quantity == "taboo2" || c.quantity == "hitconst" || c.quantity == "akernel") && c.arg.empty()) {
      throw UsageError("--arg: quantity " + c.quantity + " needs an element");
    }
  } else if (fit->parsed()) {
    c.command = Subcommand::fit;
    parse_range(range_text, c.n_min, c.n_max);
  } else {
    c.command = Subcommand::verify;
    with_flag("--tier", [&] { return parse_tier(c.tier); });
    if (c.threads < 1) throw UsageError("--threads: must be positive");
  }
  return c;
}

std::vector<std::string> to_args(const RunConfig& c) {
  std::vector<std::string> a{to_string(c.command)};
  auto add = [&a](const std::string& flag, const std::string& v) {
    a.push_back(flag);
    a.push_back(v);
  };
  switch (c.command) {
    case Subcommand::simulate: {
      add("--group", c.group);
      add("--law", c.law);
      add("--base", c.base);
      add("--steps", std::to_string(c.steps));
      add("--reps", std::to_string(c.reps));
      std::string joined;
      for (const auto& s : c.stats) joined += (joined.empty() ? "" : ";") + s;
      add("--stats", joined);
      add("--seed", std::to_string(c.seed));
      if (c.two_sided) a.push_back("--two-sided");
      add("--horizon", std::to_string(c.horizon));
      add("--n0", real_text(c.first_checkpoint));
      add("--ratio", real_text(c.checkpoint_ratio));
      add("--out", c.out);
      add("--threads", std::to_string(c.threads));
      break;
    }
    case Subcommand::analytic:
      add("--law", c.law);
      add("--group", c.group);
      add("--quantity", c.quantity);
      if (!c.arg.empty()) add("--arg", c.arg);
      break;
    case Subcommand::fit:
      add("--in", c.in);
      add("--statistic", c.statistic);
      add("--range", real_text(c.n_min) + ":" + real_text(c.n_max));
      break;
    case Subcommand::verify:
      add("--tier", c.tier);
      add("--threads", std::to_string(c.threads));
      break;
  }
  for (int i = 0; i < c.verbosity; ++i) a.push_back("--verbose");
  return a;
}

ExperimentPlan build_plan(const RunConfig& c) {
  if (c.command != Subcommand::simulate) throw UsageError("not a simulate configuration");
  const Group g = Group::parse(c.group);
  ExperimentPlan plan;
  if (c.base == "bernoulli") {
    const StepLaw law = StepLaw::parse(c.law, g);
    plan.spec = CocycleSpec::parse(c.base, g, &law);
  } else {
    plan.spec = CocycleSpec::parse(c.base, g, nullptr);
  }
  std::vector<std::string> tokens = c.stats;
  if (c.two_sided) {
    for (const auto& s : c.stats) {
      if (s.rfind("bwd_", 0) == 0) continue;
      const std::string b = "bwd_" + s;
      if (std::find(tokens.begin(), tokens.end(), b) == tokens.end()) tokens.push_back(b);
    }
  }
  for (const auto& s : tokens) plan.stats.push_back(StatRequest::parse(s, g));
  const double n0 = c.first_checkpoint > 0.0
                        ? c.first_checkpoint
                        : std::clamp(static_cast<double>(c.steps / 64), 1.0, 1000.0);
  plan.checkpoints = geometric_checkpoints(c.steps, n0, c.checkpoint_ratio);
  plan.reps = c.reps;
  plan.seed = c.seed;
  plan.horizon = c.horizon;
  plan.threads = c.threads;
  plan.experiment = "simulate";
  return plan;
}

std::vector<std::string> analytic_records(const RunConfig& c) {
  const Group g = Group::parse(c.group);
  const StepLaw law = StepLaw::parse(c.law, g);
  const int d = g.lattice_dim();
  const ZdPoint x = c.arg.empty() ? ZdPoint{d, {0, 0, 0}} : std::get<ZdPoint>(g.parse_element(c.arg));
  const std::string el = to_string(GroupElement{x});
  auto line = [](const std::string& q, const std::string& e, const AnalyticResult& r) {
    const std::string field = e.find(',') == std::string::npos ? e : "\"" + e + "\"";
    return q + "," + field + "," + format_real(r.value) + "," + format_real(r.error) + "," + r.method;
  };
  if (c.quantity == "green") return {line("green", el, green(law, x))};
  if (c.quantity == "akernel") return {line("akernel", el, potential_kernel(law, x))};
  if (c.quantity == "gamma") return {line("gamma", "", gamma_constant(law))};
  if (c.quantity == "taboo2") {
    const auto t = two_point_taboo(law, x);
    return {line("taboo2:j", el, t.at_j), line("taboo2:0", el, t.at_zero)};
  }
  if (c.quantity == "hitconst") {
    const auto h = hitting_constants(law, x);
    return {line("hitconst:c", el, h.c), line("hitconst:d", el, h.d)};
  }
  throw UsageError("--quantity: unknown quantity '" + c.quantity + "'");
}

std::string fit_record(const RunConfig& c) {
  const auto records = read_csv_file(c.in);
  const FitResult f = with_flag("--statistic", [&] { return fit_records(records, c.statistic, c.n_min, c.n_max); });
  return format_real(f.index) + "," + format_real(f.uncertainty) + "," + format_real(f.intercept) + "," +
         format_real(f.residual);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  try {
    c = parse_args(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  try {
    switch (c.command) {
      case Subcommand::simulate: {
        const ExperimentPlan plan = build_plan(c);
        if (c.verbosity > 0) err << "plan " << plan.hash() << ": " << plan.reps << " trajectories\n";
        const EstimateReport report = run_experiment(plan);
        emit(report, c.out);
        for (const auto& f : report.failures) err << "trajectory " << f.trajectory << " failed: " << f.message << "\n";
        return report.failures.empty() ? 0 : 1;
      }
      case Subcommand::analytic:
        for (const auto& l : analytic_records(c)) out << l << "\n";
        return 0;
      case Subcommand::fit:
        out << fit_record(c) << "\n";
        return 0;
      case Subcommand::verify: {
        const auto results = run_acceptance(parse_tier(c.tier), c.threads, out);
        const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.pass; });
        out << (failed == 0 ? "all " + std::to_string(results.size()) + " criteria passed"
                            : std::to_string(failed) + " of " + std::to_string(results.size()) + " criteria failed")
            << "\n";
        return failed == 0 ? 0 : 1;
      }
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace walkrange
