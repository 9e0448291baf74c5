#pragma once

// Monte-Carlo sweeps over SNR, antenna count, depolarization, XPI and
// correlation. Every series evaluated at a given (sweep point, realization)
// sees the same channel draw, and results depend only on the configuration
// and master seed, never on the worker count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polarform/baselines.hpp"
#include "polarform/channel.hpp"

namespace polarform {

enum class SweepAxis { kSnrDb, kAntennas, kChi, kMu, kNuMagnitude, kIteration };

std::string_view to_string(SweepAxis axis) noexcept;
std::optional<SweepAxis> parse_axis(std::string_view name) noexcept;

enum class FixedPolarization { kLpa, kCpa };

/// One curve of an experiment. Label grammar:
///   SCHEME[@MxN][/rx=LPA|/rx=CPA|/tx=LPA|/tx=CPA]
/// `@MxN` pins the antenna counts (otherwise the experiment's M, N apply);
/// `/rx=` or `/tx=` holds that end at a fixed LPA/CPA antenna.
struct SeriesSpec {
  SchemeId scheme = SchemeId::kPolarforming;
  std::optional<std::size_t> m_rx;
  std::optional<std::size_t> n_tx;
  std::optional<Side> fixed_side;
  FixedPolarization fixed_polarization = FixedPolarization::kLpa;

  std::string label() const;
  std::optional<FixedEnd> fixed_end() const;
  /// Throws ConfigError("series", ...) on a malformed label.
  static SeriesSpec parse(std::string_view label);
};

struct ExperimentConfig {
  std::string experiment_id;
  std::vector<SchemeId> schemes;
  // Explicit series; when empty, one plain series per entry of `schemes`.
  std::vector<SeriesSpec> series;
  SweepAxis sweep_axis = SweepAxis::kSnrDb;
  std::vector<double> sweep_values;
  ChannelParams fixed;  // chi, mu, nu and default M, N
  double snr_db = 5.0;
  std::size_t realizations = 10000;
  std::uint64_t master_seed = 1;
  std::size_t workers = 0;  // 0 = hardware concurrency

  /// Throws ConfigError naming the offending field.
  void validate() const;
  std::vector<SeriesSpec> resolved_series() const;
};

struct RateSample {
  std::string scheme;  // series label
  double sweep_value = 0.0;
  double mean_rate_bits = 0.0;
  double std_error = 0.0;
  std::size_t realizations = 0;
};

/// Per-realization rates, indexed [point][series][realization].
struct DetailedRun {
  std::vector<double> sweep_values;
  std::vector<std::string> labels;
  std::vector<std::vector<std::vector<double>>> rates;

  std::size_t series_index(std::string_view label) const;
};

DetailedRun run_detailed(const ExperimentConfig& cfg);
std::vector<RateSample> aggregate(const DetailedRun& run);

/// Mean rate and standard error per (series, sweep point), series-major.
/// For the iteration axis this is the convergence trace.
std::vector<RateSample> run_experiment(const ExperimentConfig& cfg);

/// Mean polarforming rate per iteration, converged runs padded with their
/// final value. `cfg.sweep_axis` must be kIteration and every series
/// POLARFORMING; sweep values are the iteration indices reported.
std::vector<RateSample> convergence_trace(const ExperimentConfig& cfg);

/// Per-realization padded traces, indexed [series][realization][iteration].
std::vector<std::vector<std::vector<double>>> convergence_traces(const ExperimentConfig& cfg);

using RateCurve = std::vector<std::pair<double, double>>;  // (snr_db, rate)

/// SNR at which a monotone increasing curve reaches `target_rate`, by
/// linear interpolation. Throws OutOfRange if the curve does not bracket it.
double snr_at_rate(const RateCurve& curve, double target_rate);

/// snr_b - snr_a at `target_rate`; positive means curve a needs less SNR.
double snr_gain(const RateCurve& curve_a, const RateCurve& curve_b, double target_rate);

/// Extracts (sweep_value, mean) for one series label, in sweep order.
RateCurve curve_for(const std::vector<RateSample>& samples, std::string_view label);

// Catalog of the stock experiments (one per reproduced figure panel set).
std::vector<std::string> experiment_ids();
/// Throws ConfigError("experiment_id", ...) if unknown.
ExperimentConfig catalog_experiment(std::string_view id);
std::string describe_experiment(std::string_view id);

/// Flat key=value override, e.g. "realizations=1000", "chi=0.5",
/// "sweep_values=0,5,10", "series=POLARFORMING@2x2,DPA@1x1".
void apply_override(ExperimentConfig& cfg, std::string_view assignment);

/// Config from a JSON document mirroring ExperimentConfig. Fields absent
/// from the document keep the values already in `base`.
ExperimentConfig config_from_json(std::string_view json_text, ExperimentConfig base = {});
std::string config_to_json(const ExperimentConfig& cfg);

// CSV persistence.
inline constexpr std::string_view kCsvHeader =
    "experiment,scheme,sweep_axis,sweep_value,mean_rate_bits,std_error,realizations,master_seed";

struct CsvRow {
  std::string experiment;
  std::string scheme;
  std::string sweep_axis;
  double sweep_value = 0.0;
  double mean_rate_bits = 0.0;
  double std_error = 0.0;
  std::size_t realizations = 0;
  std::uint64_t master_seed = 0;
};

std::string format_csv(const ExperimentConfig& cfg, const std::vector<RateSample>& samples);
/// Throws IoError carrying the path.
void write_csv(const ExperimentConfig& cfg, const std::vector<RateSample>& samples,
               const std::string& path);
std::vector<CsvRow> parse_csv(std::string_view text);
std::vector<CsvRow> read_csv(const std::string& path);
/// (sweep_value, mean) for one scheme label in file order.
RateCurve curve_for(const std::vector<CsvRow>& rows, std::string_view label);

}  // namespace polarform
