#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qrc/gaussian.hpp"
#include "qrc/spin.hpp"

namespace qrc {

enum class Experiment { timer, classify, ipc, invariants };
enum class EvalMode { train_window, holdout };
enum class InvariantSuite { spin, gaussian, readout, all };

std::string_view to_string(Experiment e);
std::string_view to_string(EvalMode m);
std::string_view to_string(InvariantSuite s);

struct TimerSection {
  int c = 500;
  int length = 800;
  int washout = 400;
  std::vector<int> taus{5, 20};
  int holdout_shift = 50;
};

struct ClassifySection {
  std::vector<int> class_counts{2, 3, 4, 5};
  std::vector<bool> random_phase{false, true};
  int n_train = 500;
  int n_test = 200;
  double r_max = 2.0;
  double phi_max = 0.7853981633974483;
};

struct IpcSection {
  int d_max = 3;
  int delay_max = 20;
  int length = 5000;
  int washout = 500;
  int surrogates = 20;
  double sigma_threshold = 4.0;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::timer;
  std::string output_dir = "out";
  int realizations = 1;
  std::uint64_t base_seed = 1;

  SpinConfig spin;
  std::vector<ObservableSet> observable_sets{ObservableSet::z, ObservableSet::xyz,
                                             ObservableSet::xyz_zz};

  GaussianConfig gaussian;
  bool gaussian_dt_auto = true;
  std::vector<double> dt_candidates{1, 2, 5, 10, 20, 50};

  TimerSection timer;
  ClassifySection classify;
  IpcSection ipc;

  double ridge = 0.0;
  EvalMode eval_mode = EvalMode::train_window;

  InvariantSuite suite = InvariantSuite::all;
  int invariant_steps = 1000;
  int invariant_spins = 6;
};

/// Parses `section.key = value` lines ('#' starts a comment). Defaults for
/// keys not given depend on the experiment. Throws ConfigError whose message
/// names the offending line.
ExperimentConfig parse_config(std::string_view text);

/// Checks cross-field constraints; throws ConfigError.
void validate(const ExperimentConfig& config);

/// Every resolved key in parse_config format; parse_config(render_config(c))
/// reproduces c.
std::string render_config(const ExperimentConfig& config);

}  // namespace qrc
