// polarform: run the stock Monte-Carlo experiments and query their CSVs.
//
//   polarform list
//   polarform run fig7_rate_vs_snr --out results --realizations 2000
//   polarform gain results/fig7_rate_vs_snr.csv --scheme-a POLARFORMING --scheme-b LPA --rate 4
//
// Exit codes: 0 success, 1 configuration error, 2 I/O error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "polarform/errors.hpp"
#include "polarform/experiments.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

struct RunArgs {
  std::string id;
  std::string out_dir = ".";
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> realizations;
  std::optional<std::size_t> workers;
  bool print_config = false;
};

struct GainArgs {
  std::string csv;
  std::string scheme_a;
  std::string scheme_b;
  double rate = 0.0;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw polarform::IoError(path, "cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_list() {
  for (const auto& id : polarform::experiment_ids()) {
    std::cout << id << "  " << polarform::describe_experiment(id) << '\n';
  }
  return 0;
}

int cmd_run(const RunArgs& a) {
  polarform::ExperimentConfig cfg = polarform::catalog_experiment(a.id);
  if (!a.config_path.empty()) cfg = polarform::config_from_json(slurp(a.config_path), cfg);
  for (const auto& o : a.overrides) polarform::apply_override(cfg, o);
  if (a.seed) cfg.master_seed = *a.seed;
  if (a.realizations) cfg.realizations = *a.realizations;
  if (a.workers) cfg.workers = *a.workers;
  cfg.validate();
  if (a.print_config) std::cerr << polarform::config_to_json(cfg) << '\n';

  const auto start = std::chrono::steady_clock::now();
  const auto samples = polarform::run_experiment(cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  if (ec) throw polarform::IoError(a.out_dir, ec.message());
  const std::string path = (std::filesystem::path(a.out_dir) / (cfg.experiment_id + ".csv")).string();
  polarform::write_csv(cfg, samples, path);
  std::cout << "wrote " << samples.size() << " rows to " << path << " in " << secs << " s\n";
  return 0;
}

int cmd_gain(const GainArgs& a) {
  const auto rows = polarform::read_csv(a.csv);
  const auto ca = polarform::curve_for(rows, a.scheme_a);
  const auto cb = polarform::curve_for(rows, a.scheme_b);
  if (ca.empty()) throw polarform::ConfigError("scheme-a", "no rows for '" + a.scheme_a + "'");
  if (cb.empty()) throw polarform::ConfigError("scheme-b", "no rows for '" + a.scheme_b + "'");
  const double gain = polarform::snr_gain(ca, cb, a.rate);
  std::printf("%s over %s at %g bits/s/Hz: %.3f dB\n", a.scheme_a.c_str(), a.scheme_b.c_str(),
              a.rate, gain);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polarforming Monte-Carlo experiments"};
  app.require_subcommand(1);

  app.add_subcommand("list", "List the stock experiments");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment and write <out>/<id>.csv");
  run_cmd->add_option("experiment", run.id, "Experiment id (see `list`)")->required();
  run_cmd->add_option("--out", run.out_dir, "Output directory")->capture_default_str();
  run_cmd->add_option("--config", run.config_path, "JSON file overriding the stock configuration");
  run_cmd->add_option("--override,-o", run.overrides, "key=value override, repeatable");
  run_cmd->add_option("--seed", run.seed, "Master seed");
  run_cmd->add_option("--realizations", run.realizations, "Channel realizations per point");
  run_cmd->add_option("--workers", run.workers, "Worker threads (0 = all cores)");
  run_cmd->add_flag("--print-config", run.print_config, "Echo the resolved configuration as JSON");

  GainArgs gain;
  auto* gain_cmd = app.add_subcommand("gain", "SNR gain of scheme A over scheme B at a target rate");
  gain_cmd->add_option("csv", gain.csv, "CSV written by `run`")->required();
  gain_cmd->add_option("--scheme-a", gain.scheme_a, "Series label of scheme A")->required();
  gain_cmd->add_option("--scheme-b", gain.scheme_b, "Series label of scheme B")->required();
  gain_cmd->add_option("--rate", gain.rate, "Target rate in bits/s/Hz")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (app.got_subcommand("list")) return cmd_list();
    if (app.got_subcommand("run")) return cmd_run(run);
    return cmd_gain(gain);
  } catch (const polarform::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
