#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "polarform/experiments.hpp"

namespace {

namespace fs = std::filesystem;

int run(const std::string& args) {
  const std::string cmd = std::string(POLARFORM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "polarform_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("cli: list and help") {
  CHECK(run("list") == 0);
  CHECK(run("--help") == 0);
  CHECK(run("") == 1);
  CHECK(run("frobnicate") == 1);
}

TEST_CASE("cli: run writes the CSV and gain reads it") {
  const fs::path dir = scratch();
  fs::remove(dir / "fig7_siso.csv");
  REQUIRE(run("run fig7_siso --out " + dir.string() +
              " --realizations 200 --seed 9 -o sweep_values=-10,0,10,20,30") == 0);
  const auto rows = polarform::read_csv((dir / "fig7_siso.csv").string());
  CHECK(rows.size() == 6 * 5);
  CHECK(rows.front().realizations == 200);
  CHECK(rows.front().master_seed == 9);

  CHECK(run("gain " + (dir / "fig7_siso.csv").string() +
            " --scheme-a POLARFORMING --scheme-b LPA --rate 4") == 0);
  // Target rate outside the curves.
  CHECK(run("gain " + (dir / "fig7_siso.csv").string() +
            " --scheme-a POLARFORMING --scheme-b LPA --rate 400") == 1);
  CHECK(run("gain " + (dir / "fig7_siso.csv").string() +
            " --scheme-a POLARFORMING --scheme-b NOPE --rate 4") == 1);
}

TEST_CASE("cli: configuration errors exit 1") {
  const fs::path dir = scratch();
  CHECK(run("run fig99 --out " + dir.string()) == 1);
  CHECK(run("run fig7_siso --out " + dir.string() + " --realizations 0") == 1);
  CHECK(run("run fig7_siso --out " + dir.string() + " -o chi=2 -o realizations=5") == 1);
  CHECK(run("run fig7_siso --out " + dir.string() + " -o bogus=1") == 1);

  const fs::path cfg = dir / "bad.json";
  std::ofstream(cfg) << "{\"sweep\": {\"axis\": \"time\"}}";
  CHECK(run("run fig7_siso --out " + dir.string() + " --config " + cfg.string()) == 1);

  const fs::path good = dir / "good.json";
  std::ofstream(good) << "{\"realizations\": 10, \"sweep\": {\"values\": [0, 10]}}";
  CHECK(run("run fig7_siso --out " + dir.string() + " --config " + good.string()) == 0);
  CHECK(polarform::read_csv((dir / "fig7_siso.csv").string()).front().realizations == 10);
}

TEST_CASE("cli: I/O errors exit 2") {
  const fs::path dir = scratch();
  const fs::path blocker = dir / "not_a_dir";
  std::ofstream(blocker) << "x";
  CHECK(run("run fig7_siso --realizations 5 -o sweep_values=0 --out " + blocker.string()) == 2);
  CHECK(run("gain " + (dir / "missing.csv").string() + " --scheme-a A --scheme-b B --rate 1") == 2);
  CHECK(run("run fig7_siso --out " + dir.string() + " --config " + (dir / "missing.json").string()) == 2);
}
