#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qrc/config.hpp"

namespace qrc {

/// Output file could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- timer ---------------------------------------------------------------

struct TimerRealization {
  std::uint64_t seed = 0;
  // indexed [tau][observable set]
  std::vector<std::vector<Vector>> outputs;
  std::vector<std::vector<double>> mse;
};

struct TimerResult {
  std::vector<int> taus;
  std::vector<ObservableSet> sets;
  std::vector<Index> set_sizes;  // O per set (times multiplex_v)
  Vector steps;                  // evaluated step indices k
  InputSequence inputs;          // s_k on the evaluated window
  std::vector<Vector> targets;   // per tau, on the evaluated window
  std::vector<TimerRealization> realizations;

  /// Mean over realizations of the per-realization MSE.
  double mean_mse(std::size_t tau_index, std::size_t set_index) const;
};

TimerResult run_timer(const ExperimentConfig& config, int jobs = 1);

// ---- squeezing classification -------------------------------------------

struct ClassifyCase {
  int n_classes = 0;
  bool random_phase = false;
  std::vector<double> success;  // per realization
  std::vector<double> dt;       // evolution time used per realization

  double mean() const;
  double std_dev() const;  // sample standard deviation
};

struct ClassifyResult {
  std::vector<ClassifyCase> cases;  // phase mode major, class count minor
};

/// One realization: network from `seed`, dataset from a stream derived from it.
double classify_success_rate(const ExperimentConfig& config, int n_classes, bool random_phase,
                             std::uint64_t seed, double* dt_used = nullptr);

ClassifyResult run_classify(const ExperimentConfig& config, int jobs = 1);

// ---- information processing capacity -----------------------------------

struct IpcRow {
  ObservableSet set;
  Index feature_count = 0;
  std::uint64_t seed = 0;
  Index rank = 0;
  std::vector<double> per_degree;
  double total = 0.0;
};

struct IpcExperimentResult {
  std::vector<IpcRow> rows;  // realization major, observable set minor
};

IpcExperimentResult run_ipc(const ExperimentConfig& config, int jobs = 1);

// ---- invariant suites ----------------------------------------------------

struct InvariantCheck {
  std::string suite;
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

std::vector<InvariantCheck> run_invariants(const ExperimentConfig& config);

// ---- reports -------------------------------------------------------------

struct ExperimentOutcome {
  std::vector<std::filesystem::path> files;
  bool invariants_passed = true;  // false if any invariant check failed
};

/// Runs the configured experiment and writes its CSV files plus meta.txt
/// into config.output_dir. Throws IoError when a file cannot be written.
ExperimentOutcome run_experiment(const ExperimentConfig& config, int jobs = 1);

/// %.17g rendering used by every CSV.
std::string format_real(double v);

}  // namespace qrc
