#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "qrc/experiments.hpp"

using namespace qrc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qrc_test_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig small_timer(const fs::path& out) {
  ExperimentConfig c = parse_config(
      "experiment = timer\n"
      "realizations = 3\n"
      "spin.n_spins = 3\n"
      "task.c = 60\ntask.length = 100\ntask.washout = 40\ntask.tau = 3,8\n");
  c.output_dir = out.string();
  return c;
}

ExperimentConfig small_classify(const fs::path& out) {
  ExperimentConfig c = parse_config(
      "experiment = classify\n"
      "realizations = 3\n"
      "gaussian.dt = 10\n"
      "task.class_counts = 2,3\n"
      "task.n_train = 60\ntask.n_test = 40\n");
  c.output_dir = out.string();
  return c;
}

}  // namespace

TEST_CASE("timer output is byte-deterministic and independent of the job count") {
  const fs::path a = scratch("timer_a"), b = scratch("timer_b");
  const auto files_a = run_experiment(small_timer(a), 1).files;
  const auto files_b = run_experiment(small_timer(b), 2).files;
  REQUIRE(files_a.size() == files_b.size());
  for (std::size_t i = 0; i < files_a.size(); ++i) {
    CHECK(files_a[i].filename() == files_b[i].filename());
    if (files_a[i].filename() == "meta.txt") continue;  // output_dir differs
    CHECK(slurp(files_a[i]) == slurp(files_b[i]));
  }
  CHECK(fs::exists(a / "trajectory_3_3.csv"));
  CHECK(fs::exists(a / "trajectory_8_12.csv"));
  CHECK(slurp(a / "meta.txt").find("# seeds: 1 2 3") != std::string::npos);
}

TEST_CASE("timer summary matches the per-realization file") {
  const fs::path dir = scratch("timer_summary");
  run_experiment(small_timer(dir), 1);
  const auto per = read_csv(dir / "timer_mse.csv");
  const auto summary = read_csv(dir / "timer_summary.csv");
  std::map<std::string, std::vector<double>> groups;
  for (std::size_t i = 1; i < per.size(); ++i) groups[per[i][0] + "/" + per[i][1]].push_back(std::stod(per[i][5]));
  REQUIRE(summary.size() == 1 + groups.size());
  for (std::size_t i = 1; i < summary.size(); ++i) {
    const auto& v = groups.at(summary[i][0] + "/" + summary[i][1]);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    CHECK(std::abs(std::stod(summary[i][3]) - mean) < 1e-12);
  }
}

TEST_CASE("nested observable sets never fit worse on the training window") {
  const TimerResult res = run_timer(small_timer(scratch("timer_nested")), 1);
  for (std::size_t i = 0; i < res.taus.size(); ++i) {
    CHECK(res.mean_mse(i, 1) <= res.mean_mse(i, 0) + 1e-12);
    CHECK(res.mean_mse(i, 2) <= res.mean_mse(i, 1) + 1e-12);
  }
}

TEST_CASE("classification summary matches the per-realization file") {
  const fs::path dir = scratch("classify");
  run_experiment(small_classify(dir), 2);
  const auto per = read_csv(dir / "classify_realizations.csv");
  const auto summary = read_csv(dir / "classify_summary.csv");
  REQUIRE(per.size() == 1 + 2 * 2 * 3);
  REQUIRE(summary.size() == 1 + 4);
  for (std::size_t i = 1; i < summary.size(); ++i) {
    std::vector<double> v;
    for (std::size_t j = 1; j < per.size(); ++j)
      if (per[j][0] == summary[i][0] && per[j][1] == summary[i][1]) v.push_back(std::stod(per[j][5]));
    REQUIRE(v.size() == 3);
    const double mean = (v[0] + v[1] + v[2]) / 3.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    CHECK(std::abs(std::stod(summary[i][2]) - mean) < 1e-12);
    CHECK(std::abs(std::stod(summary[i][3]) - std::sqrt(ss / 2.0)) < 1e-12);
  }
}

TEST_CASE("invariant experiment passes and reports every check") {
  ExperimentConfig c = parse_config("experiment = invariants\ninvariants.steps = 200\ninvariants.n_spins = 4\n");
  c.output_dir = scratch("invariants").string();
  const auto outcome = run_experiment(c, 1);
  CHECK(outcome.invariants_passed);
  for (const auto& check : run_invariants(c)) {
    CAPTURE(check.name);
    CHECK(check.passed);
  }
}

TEST_CASE("unwritable output directory raises IoError") {
  const fs::path blocker = scratch("blocker");
  std::ofstream(blocker) << "file, not a directory";
  ExperimentConfig c = small_timer(blocker / "sub");
  CHECK_THROWS_AS(run_experiment(c, 1), IoError);
}
