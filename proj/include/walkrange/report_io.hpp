#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "walkrange/estimators.hpp"
#include "walkrange/stats.hpp"

namespace walkrange {

inline constexpr const char* kCsvHeader = "experiment,group,law,n,statistic,element,mean,variance,stderr,reps,seed";

// %.17g
std::string format_real(double v);

void write_csv(const EstimateReport& report, std::ostream& os);
void write_json(const EstimateReport& report, std::ostream& os);
// Format from the extension: .csv or .json.
void emit(const EstimateReport& report, const std::string& path);

struct CsvRecord {
  std::string experiment;
  std::string group;
  std::string law;
  EstimateRow row;
  std::uint64_t seed = 0;
};

std::vector<CsvRecord> read_csv(std::istream& is);
std::vector<CsvRecord> read_csv_file(const std::string& path);

// Fit of log(mean) against log(n) for one statistic token (name or
// name:element) over n in [n_min, n_max].
FitResult fit_records(const std::vector<CsvRecord>& records, const std::string& statistic, double n_min, double n_max);

}  // namespace walkrange
