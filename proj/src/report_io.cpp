#include "walkrange/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "walkrange/errors.hpp"

namespace walkrange {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted) throw UsageError("unterminated quote in CSV line");
  out.push_back(cur);
  return out;
}

double parse_real(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("malformed number '" + s + "' in CSV");
  }
  if (pos != s.size()) throw UsageError("malformed number '" + s + "' in CSV");
  return v;
}

std::int64_t parse_integer(const std::string& s) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("malformed integer '" + s + "' in CSV");
  }
  if (pos != s.size()) throw UsageError("malformed integer '" + s + "' in CSV");
  return v;
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const EstimateReport& report, std::ostream& os) {
  os << kCsvHeader << '\n';
  for (const auto& r : report.rows) {
    os << csv_field(report.experiment) << ',' << csv_field(report.group) << ',' << csv_field(report.law) << ',' << r.n
       << ',' << csv_field(r.statistic) << ',' << csv_field(r.element) << ',' << format_real(r.mean) << ','
       << format_real(r.variance) << ',' << format_real(r.stderr_) << ',' << r.reps << ',' << report.seed << '\n';
  }
}

void write_json(const EstimateReport& report, std::ostream& os) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["experiment"] = report.experiment;
  j["group"] = report.group;
  j["law"] = report.law;
  j["seed"] = report.seed;
  j["plan_hash"] = report.plan_hash;
  j["checkpoints"] = report.checkpoints;
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) {
    ordered_json o;
    o["n"] = r.n;
    o["statistic"] = r.statistic;
    o["element"] = r.element;
    // strings keep all 17 significant digits
    o["mean"] = format_real(r.mean);
    o["variance"] = format_real(r.variance);
    o["stderr"] = format_real(r.stderr_);
    o["reps"] = r.reps;
    rows.push_back(o);
  }
  j["rows"] = rows;
  ordered_json failures = ordered_json::array();
  for (const auto& f : report.failures) failures.push_back({{"trajectory", f.trajectory}, {"message", f.message}});
  j["failures"] = failures;
  os << j.dump(2) << '\n';
}

void emit(const EstimateReport& report, const std::string& path) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext != ".csv" && ext != ".json") throw UsageError("--out must end in .csv or .json: " + path);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  if (ext == ".csv") {
    write_csv(report, os);
  } else {
    write_json(report, os);
  }
  os.flush();
  if (!os) throw IoError("failed writing '" + path + "'");
}

std::vector<CsvRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw UsageError("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw UsageError("CSV header does not match the report format");
  std::vector<CsvRecord> out;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != 11) throw UsageError("CSV row has " + std::to_string(f.size()) + " fields, expected 11");
    CsvRecord r;
    r.experiment = f[0];
    r.group = f[1];
    r.law = f[2];
    r.row.n = parse_integer(f[3]);
    r.row.statistic = f[4];
    r.row.element = f[5];
    r.row.mean = parse_real(f[6]);
    r.row.variance = parse_real(f[7]);
    r.row.stderr_ = parse_real(f[8]);
    r.row.reps = parse_integer(f[9]);
    r.seed = static_cast<std::uint64_t>(std::stoull(f[10]));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CsvRecord> read_csv_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "' for reading");
  return read_csv(is);
}

FitResult fit_records(const std::vector<CsvRecord>& records, const std::string& statistic, double n_min, double n_max) {
  const auto colon = statistic.find(':');
  const std::string name = statistic.substr(0, colon);
  const std::string element = colon == std::string::npos ? "" : statistic.substr(colon + 1);
  std::vector<std::pair<double, double>> series;
  for (const auto& r : records) {
    if (r.row.statistic != name || r.row.element != element) continue;
    const double n = static_cast<double>(r.row.n);
    if (n < n_min || n > n_max) continue;
    series.emplace_back(n, r.row.mean);
  }
  if (series.empty()) throw UsageError("no rows for statistic '" + statistic + "' in the requested range");
  return regular_variation_fit(series);
}

}  // namespace walkrange
