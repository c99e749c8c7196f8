// qreservoir: run reservoir-computing experiments from a config file.
//
//   qreservoir run <config-file> [--jobs N] [--seed S] [--out DIR]
//   qreservoir validate <config-file>
//   qreservoir invariants [--suite spin|gaussian|readout|all]
//
// Exit codes: 0 success, 1 config error, 2 numerical failure, 3 I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qrc/config.hpp"
#include "qrc/experiments.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kNumerical = 2, kIo = 3 };

qrc::ExperimentConfig load(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw qrc::IoError("cannot read config file " + path);
  std::ostringstream text;
  text << file.rdbuf();
  return qrc::parse_config(text.str());
}

void print_checks(const std::vector<qrc::InvariantCheck>& checks) {
  for (const auto& c : checks)
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.suite << ": " << c.name << " = "
              << qrc::format_real(c.value) << " (threshold " << qrc::format_real(c.threshold)
              << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum reservoir computing experiments"};
  app.require_subcommand(1);

  std::string config_path;
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--jobs", jobs, "Worker threads for realizations")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Override base_seed");
  run->add_option("--out", out_dir, "Override output_dir");

  auto* check = app.add_subcommand("validate", "Parse and validate a config file");
  check->add_option("config", config_path, "Config file")->required();

  std::string suite = "all";
  int steps = 1000;
  int spins = 6;
  auto* invariants = app.add_subcommand("invariants", "Run the physics and readout invariant suites");
  invariants->add_option("--suite", suite, "Suite to run")
      ->check(CLI::IsMember({"spin", "gaussian", "readout", "all"}));
  invariants->add_option("--steps", steps, "Spin run length")->check(CLI::PositiveNumber);
  invariants->add_option("--spins", spins, "Spin count")->check(CLI::Range(2, qrc::kMaxSpins));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*check) {
      const auto cfg = load(config_path);
      std::cout << qrc::render_config(cfg);
      return kOk;
    }
    if (*run) {
      auto cfg = load(config_path);
      if (seed) cfg.base_seed = *seed;
      if (out_dir) cfg.output_dir = *out_dir;
      qrc::validate(cfg);
      const auto outcome = qrc::run_experiment(cfg, jobs);
      for (const auto& path : outcome.files) std::cout << path.string() << '\n';
      return outcome.invariants_passed ? kOk : kNumerical;
    }
    if (*invariants) {
      qrc::ExperimentConfig cfg =
          qrc::parse_config("experiment = invariants\ninvariants.suite = " + suite + "\n");
      cfg.invariant_steps = steps;
      cfg.invariant_spins = spins;
      const auto checks = qrc::run_invariants(cfg);
      print_checks(checks);
      for (const auto& c : checks)
        if (!c.passed) return kNumerical;
      return kOk;
    }
  } catch (const qrc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const qrc::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
