#include "polarform/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <tuple>

#include "polarform/errors.hpp"

namespace polarform {
namespace {

constexpr std::size_t kChunk = 32;

struct PointSetup {
  ChannelParams params;
  double snr_db = 0.0;
};

PointSetup point_setup(const ExperimentConfig& cfg, double value) {
  PointSetup s{cfg.fixed, cfg.snr_db};
  switch (cfg.sweep_axis) {
    case SweepAxis::kSnrDb: s.snr_db = value; break;
    case SweepAxis::kAntennas:
      s.params.m_rx = static_cast<std::size_t>(value);
      s.params.n_tx = static_cast<std::size_t>(value);
      break;
    case SweepAxis::kChi: s.params.chi = value; break;
    case SweepAxis::kMu: s.params.mu_t = s.params.mu_r = value; break;
    case SweepAxis::kNuMagnitude: s.params.nu_t = s.params.nu_r = Complex(value, 0.0); break;
    case SweepAxis::kIteration: break;
  }
  return s;
}

ChannelParams series_params(const PointSetup& setup, const SeriesSpec& s) {
  ChannelParams p = setup.params;
  if (s.m_rx) p.m_rx = *s.m_rx;
  if (s.n_tx) p.n_tx = *s.n_tx;
  return p;
}

// Channels for one realization, one per distinct antenna geometry. Each is
// drawn from a fresh child stream so the draw does not depend on which other
// geometries the experiment contains.
class RealizationChannels {
 public:
  RealizationChannels(std::uint64_t seed, std::uint64_t realization)
      : seed_(seed), realization_(realization) {}

  const PolarizedChannel& get(const ChannelParams& p) {
    for (const auto& [m, n, ch] : cache_) {
      if (m == p.m_rx && n == p.n_tx) return ch;
    }
    GaussianSource src = GaussianSource::child(seed_, realization_);
    cache_.push_back({p.m_rx, p.n_tx, generate(p, src)});
    return std::get<2>(cache_.back());
  }

 private:
  std::uint64_t seed_;
  std::uint64_t realization_;
  std::vector<std::tuple<std::size_t, std::size_t, PolarizedChannel>> cache_;
};

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::size_t resolve_workers(std::size_t requested) {
  if (requested > 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// Runs body(task) for task in [0, count) on `workers` threads; rethrows the
// first exception raised by any task.
template <typename Body>
void parallel_for(std::size_t count, std::size_t workers, Body body) {
  workers = std::min(workers, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    while (true) {
      const std::size_t task = next.fetch_add(1);
      if (task >= count) return;
      try {
        body(task);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  }
  if (failure) std::rethrow_exception(failure);
}

RateSample summarize(std::string label, double sweep_value, const std::vector<double>& xs) {
  RateSample s;
  s.scheme = std::move(label);
  s.sweep_value = sweep_value;
  s.realizations = xs.size();
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean_rate_bits = xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean_rate_bits) * (x - s.mean_rate_bits);
    const double var = ss / static_cast<double>(xs.size() - 1);
    s.std_error = std::sqrt(var / static_cast<double>(xs.size()));
  }
  return s;
}

}  // namespace

std::size_t DetailedRun::series_index(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  throw InvalidInput("no series labelled " + std::string(label));
}

DetailedRun run_detailed(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.sweep_axis == SweepAxis::kIteration) {
    throw ConfigError("sweep_axis", "iteration sweeps are convergence traces; use convergence_trace");
  }
  const std::vector<SeriesSpec> series = cfg.resolved_series();
  const std::size_t points = cfg.sweep_values.size();
  const std::size_t reals = cfg.realizations;

  DetailedRun run;
  run.sweep_values = cfg.sweep_values;
  for (const auto& s : series) run.labels.push_back(s.label());
  run.rates.assign(points, std::vector<std::vector<double>>(series.size(), std::vector<double>(reals)));

  const std::size_t chunks_per_point = (reals + kChunk - 1) / kChunk;
  parallel_for(points * chunks_per_point, resolve_workers(cfg.workers), [&](std::size_t task) {
    const std::size_t point = task / chunks_per_point;
    const std::size_t begin = (task % chunks_per_point) * kChunk;
    const std::size_t end = std::min(reals, begin + kChunk);
    const PointSetup setup = point_setup(cfg, cfg.sweep_values[point]);
    const double snr = db_to_linear(setup.snr_db);
    for (std::size_t r = begin; r < end; ++r) {
      RealizationChannels channels(cfg.master_seed, r);
      for (std::size_t s = 0; s < series.size(); ++s) {
        const PolarizedChannel& ch = channels.get(series_params(setup, series[s]));
        run.rates[point][s][r] = scheme_rate(series[s].scheme, ch, snr, series[s].fixed_end());
      }
    }
  });
  return run;
}

std::vector<RateSample> aggregate(const DetailedRun& run) {
  std::vector<RateSample> out;
  for (std::size_t s = 0; s < run.labels.size(); ++s) {
    for (std::size_t p = 0; p < run.sweep_values.size(); ++p) {
      out.push_back(summarize(run.labels[s], run.sweep_values[p], run.rates[p][s]));
    }
  }
  return out;
}

std::vector<RateSample> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.sweep_axis == SweepAxis::kIteration) return convergence_trace(cfg);
  return aggregate(run_detailed(cfg));
}

std::vector<std::vector<std::vector<double>>> convergence_traces(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.sweep_axis != SweepAxis::kIteration) {
    throw ConfigError("sweep_axis", "convergence traces need the iteration axis");
  }
  const std::vector<SeriesSpec> series = cfg.resolved_series();
  for (const auto& s : series) {
    if (s.scheme != SchemeId::kPolarforming || s.fixed_side) {
      throw ConfigError("series", "convergence traces are defined for two-sided POLARFORMING only, got " + s.label());
    }
  }
  const OptimizeOptions opts;
  const std::size_t length = opts.max_iterations + 1;
  const double snr = db_to_linear(cfg.snr_db);
  const PointSetup setup = point_setup(cfg, 0.0);

  std::vector<std::vector<std::vector<double>>> traces(
      series.size(), std::vector<std::vector<double>>(cfg.realizations));
  const std::size_t chunks = (cfg.realizations + kChunk - 1) / kChunk;
  parallel_for(chunks, resolve_workers(cfg.workers), [&](std::size_t task) {
    const std::size_t begin = task * kChunk;
    const std::size_t end = std::min(cfg.realizations, begin + kChunk);
    for (std::size_t r = begin; r < end; ++r) {
      RealizationChannels channels(cfg.master_seed, r);
      for (std::size_t s = 0; s < series.size(); ++s) {
        const PolarizedChannel& ch = channels.get(series_params(setup, series[s]));
        std::vector<double> trace = optimize_polarforming(ch, snr, opts).trace;
        trace.resize(length, trace.back());
        traces[s][r] = std::move(trace);
      }
    }
  });
  return traces;
}

std::vector<RateSample> convergence_trace(const ExperimentConfig& cfg) {
  const auto traces = convergence_traces(cfg);
  const std::vector<SeriesSpec> series = cfg.resolved_series();
  std::vector<RateSample> out;
  std::vector<double> column(cfg.realizations);
  for (std::size_t s = 0; s < series.size(); ++s) {
    for (double v : cfg.sweep_values) {
      const auto it = static_cast<std::size_t>(v);
      for (std::size_t r = 0; r < cfg.realizations; ++r) column[r] = traces[s][r][it];
      out.push_back(summarize(series[s].label(), v, column));
    }
  }
  return out;
}

double snr_at_rate(const RateCurve& curve, double target_rate) {
  if (curve.size() < 2) throw OutOfRange("snr_at_rate: curve needs at least two points");
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].first <= curve[i - 1].first || curve[i].second < curve[i - 1].second) {
      throw InvalidInput("snr_at_rate: curve must be increasing in SNR and rate");
    }
  }
  if (target_rate < curve.front().second || target_rate > curve.back().second) {
    throw OutOfRange("snr_at_rate: target rate " + std::to_string(target_rate) +
                     " outside curve range [" + std::to_string(curve.front().second) + ", " +
                     std::to_string(curve.back().second) + "]");
  }
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const auto [x0, y0] = curve[i - 1];
    const auto [x1, y1] = curve[i];
    if (target_rate <= y1) {
      if (y1 == y0) return x0;
      return x0 + (target_rate - y0) * (x1 - x0) / (y1 - y0);
    }
  }
  return curve.back().first;
}

double snr_gain(const RateCurve& curve_a, const RateCurve& curve_b, double target_rate) {
  return snr_at_rate(curve_b, target_rate) - snr_at_rate(curve_a, target_rate);
}

RateCurve curve_for(const std::vector<RateSample>& samples, std::string_view label) {
  RateCurve out;
  for (const auto& s : samples) {
    if (s.scheme == label) out.emplace_back(s.sweep_value, s.mean_rate_bits);
  }
  return out;
}

}  // namespace polarform
