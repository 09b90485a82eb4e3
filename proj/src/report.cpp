#include "zo/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <tuple>

#include "zo/errors.hpp"

namespace zo {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), ptr);
}

void ExperimentReport::sort() {
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.experiment, a.scheme, a.seed, a.step, a.batch, a.metric) <
           std::tie(b.experiment, b.scheme, b.seed, b.step, b.batch, b.metric);
  });
}

std::string ExperimentReport::to_csv() const {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += r.experiment;
    out += ',';
    out += r.scheme;
    out += ',';
    out += std::to_string(r.d);
    out += ',';
    out += format_double(r.delta);
    out += ',';
    out += format_double(r.mu);
    out += ',';
    out += std::to_string(r.batch);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += std::to_string(r.step);
    out += ',';
    out += r.metric;
    out += ',';
    out += format_double(r.value);
    out += '\n';
  }
  return out;
}

void ExperimentReport::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << to_csv();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace zo
