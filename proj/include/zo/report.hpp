#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace zo {

struct ReportRow {
  std::string experiment;
  std::string scheme;
  std::size_t d = 0;
  double delta = 0.0;
  double mu = 0.0;
  std::size_t batch = 0;
  std::uint64_t seed = 0;
  std::size_t step = 0;
  std::string metric;
  double value = 0.0;
};

/// Flat experiment output. CSV header:
/// experiment,scheme,d,delta,mu,batch,seed,step,metric,value
struct ExperimentReport {
  std::vector<ReportRow> rows;

  /// Orders by (experiment, scheme, seed, step), then batch and metric.
  void sort();
  std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;
};

inline constexpr const char* kCsvHeader = "experiment,scheme,d,delta,mu,batch,seed,step,metric,value";

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

}  // namespace zo
