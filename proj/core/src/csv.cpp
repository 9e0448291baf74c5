#include <cstdio>
#include <fstream>
#include <sstream>

#include "polarform/errors.hpp"
#include "polarform/experiments.hpp"

namespace polarform {
namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T field_as(const std::string& text, std::size_t line_no, const char* name) {
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  T v{};
  in >> v;
  if (in.fail() || !in.eof()) {
    throw InvalidInput("csv line " + std::to_string(line_no) + ": bad " + name + " '" + text + "'");
  }
  return v;
}

}  // namespace

std::string format_csv(const ExperimentConfig& cfg, const std::vector<RateSample>& samples) {
  std::string out(kCsvHeader);
  out += '\n';
  const std::string axis(to_string(cfg.sweep_axis));
  const std::string seed = std::to_string(cfg.master_seed);
  for (const auto& s : samples) {
    out += cfg.experiment_id + ',' + s.scheme + ',' + axis + ',' + format_double(s.sweep_value) + ',' +
           format_double(s.mean_rate_bits) + ',' + format_double(s.std_error) + ',' +
           std::to_string(s.realizations) + ',' + seed + '\n';
  }
  return out;
}

void write_csv(const ExperimentConfig& cfg, const std::vector<RateSample>& samples,
               const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out << format_csv(cfg, samples);
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool header_seen = false;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCsvHeader) throw InvalidInput("csv: unexpected header '" + std::string(line) + "'");
      header_seen = true;
      continue;
    }
    const auto f = split_fields(line);
    if (f.size() != 8) {
      throw InvalidInput("csv line " + std::to_string(line_no) + ": expected 8 fields, got " +
                         std::to_string(f.size()));
    }
    CsvRow r;
    r.experiment = f[0];
    r.scheme = f[1];
    r.sweep_axis = f[2];
    r.sweep_value = field_as<double>(f[3], line_no, "sweep_value");
    r.mean_rate_bits = field_as<double>(f[4], line_no, "mean_rate_bits");
    r.std_error = field_as<double>(f[5], line_no, "std_error");
    r.realizations = field_as<std::size_t>(f[6], line_no, "realizations");
    r.master_seed = field_as<std::uint64_t>(f[7], line_no, "master_seed");
    rows.push_back(std::move(r));
  }
  if (!header_seen) throw InvalidInput("csv: missing header");
  return rows;
}

std::vector<CsvRow> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

RateCurve curve_for(const std::vector<CsvRow>& rows, std::string_view label) {
  RateCurve out;
  for (const auto& r : rows) {
    if (r.scheme == label) out.emplace_back(r.sweep_value, r.mean_rate_bits);
  }
  return out;
}

}  // namespace polarform
