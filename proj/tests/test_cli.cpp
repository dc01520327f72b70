#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "walkrange/cli.hpp"
#include "walkrange/errors.hpp"
#include "walkrange/report_io.hpp"

using namespace walkrange;
namespace fs = std::filesystem;

namespace {

std::string usage_message(const std::vector<std::string>& args) {
  try {
    parse_args(args);
  } catch (const UsageError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "walkrange_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

EstimateReport small_report() {
  RunConfig c = parse_args({"simulate", "--group", "z2", "--law", "srw", "--steps", "100", "--reps", "8", "--stats",
                            "range;boundary", "--n0", "10", "--ratio", "10", "--out", "x.csv"});
  return run_experiment(build_plan(c));
}

}  // namespace

TEST_CASE("argument parsing examples") {
  const auto c = parse_args({"simulate", "--group", "z2", "--law", "srw", "--steps", "1000", "--reps", "10", "--stats",
                             "boundary", "--seed", "7", "--out", "r.csv"});
  CHECK(c.command == Subcommand::simulate);
  CHECK(c.group == "z2");
  CHECK(c.steps == 1000);
  CHECK(c.reps == 10);
  CHECK(c.seed == 7);
  CHECK(c.stats == std::vector<std::string>{"boundary"});
  const auto plan = build_plan(c);
  CHECK(plan.reps == 10);
  CHECK(plan.checkpoints.front() == 15);
  CHECK(plan.checkpoints.back() == 1000);
  CHECK(plan.stats.size() == 1);

  CHECK(usage_message({"simulate", "--group", "z9", "--law", "srw", "--steps", "10", "--reps", "1", "--stats",
                       "range", "--out", "r.csv"})
            .find("--group") != std::string::npos);

  const auto a = parse_args({"analytic", "--law", "srw", "--quantity", "akernel", "--arg", "5", "--group", "z1"});
  CHECK(a.command == Subcommand::analytic);
  CHECK(a.quantity == "akernel");
  CHECK(a.arg == "5");
  const auto rec = analytic_records(a);
  REQUIRE(rec.size() == 1);
  CHECK(rec[0].rfind("akernel,5,", 0) == 0);
  // a(j) = |j| for SRW on Z
  CHECK(std::stod(rec[0].substr(10)) == doctest::Approx(5.0).epsilon(1e-6));

  CHECK(parse_args({"simulate", "--steps", "10", "--reps", "1", "--stats", "range", "--out", "r.csv"}).seed ==
        kDefaultSeed);
}

TEST_CASE("validation errors name the flag") {
  const std::vector<std::string> base{"simulate", "--group", "z2", "--law", "srw", "--stats", "range", "--out", "r.csv"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return usage_message(a);
  };
  CHECK(with({"--steps", "0", "--reps", "1"}).find("--steps") != std::string::npos);
  CHECK(with({"--steps", "10", "--reps", "-3"}).find("--reps") != std::string::npos);
  CHECK(with({"--steps", "10", "--reps", "1", "--ratio", "1"}).find("--ratio") != std::string::npos);
  CHECK(usage_message({"simulate", "--group", "z2", "--law", "zeta:7", "--steps", "10", "--reps", "1", "--stats",
                       "range", "--out", "r.csv"})
            .find("--law") != std::string::npos);
  CHECK(usage_message({"simulate", "--group", "z2", "--law", "srw", "--steps", "10", "--reps", "1", "--stats",
                       "vboundary:1,x", "--out", "r.csv"})
            .find("--stats") != std::string::npos);
  CHECK(usage_message({"simulate", "--group", "z2", "--law", "srw", "--steps", "10", "--reps", "1", "--stats",
                       "range", "--out", "r.txt"})
            .find("--out") != std::string::npos);
  CHECK(usage_message({"analytic", "--law", "srw", "--quantity", "green", "--arg", "1,q"}).find("--arg") !=
        std::string::npos);
  CHECK(usage_message({"analytic", "--group", "f2", "--quantity", "green"}).find("--group") != std::string::npos);
  CHECK(usage_message({"analytic", "--law", "srw", "--quantity", "volume", "--arg", "1"}).find("--quantity") !=
        std::string::npos);
  CHECK(usage_message({"fit", "--in", "x.csv", "--statistic", "range", "--range", "10"}).find("--range") !=
        std::string::npos);
  CHECK(usage_message({"verify", "--tier", "slow"}).find("--tier") != std::string::npos);
  CHECK_THROWS_AS(parse_args({"explode"}), UsageError);
  CHECK_THROWS_AS(parse_args({"verify", "--help"}), HelpRequested);
}

TEST_CASE("configurations round-trip through their argument list") {
  const std::vector<std::vector<std::string>> cases{
      {"simulate", "--group", "z2", "--law", "srw", "--steps", "1000", "--reps", "10", "--stats", "boundary;folner:1,0",
       "--seed", "7", "--out", "r.csv", "--two-sided", "--ratio", "2.5", "--n0", "3", "--threads", "3", "--verbose"},
      {"simulate", "--group", "z1", "--law", "lazy:0.25:zeta:1.5", "--steps", "50", "--reps", "2", "--stats", "range",
       "--out", "r.json", "--horizon", "20"},
      {"simulate", "--group", "z1", "--base", "rotation:golden:1/2:0", "--steps", "50", "--reps", "1", "--stats",
       "range", "--out", "r.csv"},
      {"analytic", "--law", "srw", "--quantity", "taboo2", "--arg", "1,0"},
      {"analytic", "--law", "cauchy", "--quantity", "gamma"},
      {"fit", "--in", "r.csv", "--statistic", "bratio", "--range", "1000:1e5"},
      {"verify", "--tier", "full", "--threads", "2"}};
  for (const auto& args : cases) {
    CAPTURE(args[0]);
    const auto c = parse_args(args);
    CHECK(parse_args(to_args(c)) == c);
    CHECK(to_args(parse_args(to_args(c))) == to_args(c));
  }
  // inferred group for analytic requests
  CHECK(parse_args({"analytic", "--law", "srw", "--quantity", "green", "--arg", "1,0,0"}).group == "z3");
}

TEST_CASE("CSV emission") {
  const auto empty_path = scratch("empty.csv");
  emit(EstimateReport{}, empty_path.string());
  CHECK(slurp(empty_path) == std::string(kCsvHeader) + "\n");

  const auto report = small_report();
  const auto path = scratch("small.csv");
  emit(report, path.string());
  const auto text = slurp(path);
  const auto lines = lines_of(text);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == kCsvHeader);
  CHECK(lines[1].find(",10,boundary,") != std::string::npos);
  CHECK(lines[2].find(",10,range,") != std::string::npos);
  CHECK(lines[3].find(",100,boundary,") != std::string::npos);
  CHECK(lines[4].find(",100,range,") != std::string::npos);

  emit(report, path.string());
  CHECK(slurp(path) == text);
  emit(small_report(), path.string());
  CHECK(slurp(path) == text);

  const auto back = read_csv_file(path.string());
  REQUIRE(back.size() == report.rows.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].row.n == report.rows[i].n);
    CHECK(back[i].row.mean == report.rows[i].mean);
    CHECK(back[i].row.variance == report.rows[i].variance);
    CHECK(back[i].seed == report.seed);
  }
  CHECK(format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("JSON emission and output errors") {
  const auto report = small_report();
  const auto path = scratch("small.json");
  emit(report, path.string());
  const auto text = slurp(path);
  CHECK(text.find(report.plan_hash) != std::string::npos);
  CHECK(text.find("\"rows\"") != std::string::npos);
  emit(report, path.string());
  CHECK(slurp(path) == text);

  const std::string bad = "/nonexistent_dir_for_walkrange/out.csv";
  try {
    emit(report, bad);
    FAIL("expected an I/O error");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find(bad) != std::string::npos);
  }
  CHECK_THROWS_AS(emit(report, scratch("out.txt").string()), UsageError);
}

TEST_CASE("front end") {
  std::ostringstream out, err;
  const auto csv = scratch("run.csv");
  CHECK(run_cli({"simulate", "--group", "z1", "--law", "zeta:1.5", "--steps", "20000", "--reps", "40", "--stats",
                 "range", "--n0", "1000", "--ratio", "2", "--out", csv.string()},
                out, err) == 0);
  CHECK(lines_of(slurp(csv)).size() == 1 + 6);

  out.str("");
  CHECK(run_cli({"fit", "--in", csv.string(), "--statistic", "range", "--range", "1000:20000"}, out, err) == 0);
  const auto fit = out.str();
  CHECK(std::count(fit.begin(), fit.end(), ',') == 3);
  CHECK(std::stod(fit) == doctest::Approx(1 / 1.5).epsilon(0.1));

  out.str("");
  CHECK(run_cli({"analytic", "--law", "srw", "--quantity", "taboo2", "--arg", "1,0"}, out, err) == 0);
  const auto taboo = lines_of(out.str());
  REQUIRE(taboo.size() == 2);
  CHECK(taboo[0].rfind("taboo2:j,\"1,0\",0.5", 0) == 0);
  CHECK(taboo[1].rfind("taboo2:0,\"1,0\",0.5", 0) == 0);

  err.str("");
  CHECK(run_cli({"verify", "--tier", "slow"}, out, err) == 2);
  CHECK(err.str().find("--tier") != std::string::npos);
  CHECK(run_cli({"fit", "--in", scratch("missing.csv").string(), "--statistic", "range", "--range", "1:2"}, out,
                err) == 1);
  out.str("");
  CHECK(run_cli({"--help"}, out, err) == 0);
  CHECK(out.str().find("simulate") != std::string::npos);
}

TEST_CASE("quick verification tier") {
  std::ostringstream out, err;
  CHECK(run_cli({"verify", "--tier", "quick"}, out, err) == 0);
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 13);
  for (std::size_t i = 0; i < 12; ++i) CHECK(lines[i].rfind("[PASS] " + std::to_string(i + 1) + " ", 0) == 0);
  CHECK(lines[12] == "all 12 criteria passed");
}
