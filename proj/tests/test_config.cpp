#include <doctest.h>

#include <string>

#include "qrc/config.hpp"

using namespace qrc;

namespace {

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("parse_config defaults per experiment") {
  const ExperimentConfig timer = parse_config("experiment = timer\n");
  CHECK(timer.realizations == 10);
  CHECK(timer.spin.n_spins == 10);
  CHECK(timer.timer.taus == std::vector<int>{5, 20});

  const ExperimentConfig classify = parse_config("experiment = classify\n");
  CHECK(classify.realizations == 100);
  CHECK(classify.classify.class_counts == std::vector<int>{2, 3, 4, 5});

  const ExperimentConfig ipc = parse_config("experiment = ipc\n");
  CHECK(ipc.spin.n_spins == 3);
  CHECK(ipc.ipc.length == 5000);
}

TEST_CASE("parse_config reads every section") {
  const ExperimentConfig c = parse_config(
      "# comment line\n"
      "experiment = timer   # trailing comment\n"
      "realizations = 3\n"
      "base_seed = 77\n"
      "spin.n_spins = 6\n"
      "spin.h = 2.5\n"
      "spin.coupling_low = -1\n"
      "spin.coupling_high = 1\n"
      "spin.multiplex = 2\n"
      "spin.encoding = mixed\n"
      "spin.observables = Z, XYZ_ZZ\n"
      "gaussian.dt = auto\n"
      "gaussian.input_osc = 2\n"
      "task.tau = 5,10,20\n"
      "training.ridge = 1e-6\n"
      "training.eval_mode = holdout\n");
  CHECK(c.realizations == 3);
  CHECK(c.base_seed == 77);
  CHECK(c.spin.n_spins == 6);
  CHECK(c.spin.field_h == 2.5);
  CHECK(c.spin.coupling_low == -1.0);
  CHECK(c.spin.multiplex_v == 2);
  CHECK(c.spin.encoding == Encoding::mixed);
  CHECK(c.observable_sets == std::vector<ObservableSet>{ObservableSet::z, ObservableSet::xyz_zz});
  CHECK(c.gaussian_dt_auto);
  CHECK(c.gaussian.input_osc == 1);
  CHECK(c.timer.taus == std::vector<int>{5, 10, 20});
  CHECK(c.ridge == 1e-6);
  CHECK(c.eval_mode == EvalMode::holdout);
}

TEST_CASE("render_config round-trips") {
  const ExperimentConfig c = parse_config(
      "experiment = classify\nrealizations = 4\ngaussian.dt = 7.25\ntask.phase_modes = random\n");
  const std::string text = render_config(c);
  CHECK(render_config(parse_config(text)) == text);
  CHECK_FALSE(parse_config(text).gaussian_dt_auto);
  CHECK(parse_config(text).gaussian.dt == 7.25);
}

TEST_CASE("parse_config errors name the line") {
  CHECK(message_of("realizations = 2\n") == "experiment: required");
  CHECK(message_of("experiment = timer\nspin.n_spins = 20\n") ==
        "line 2: spin.n_spins: 20 exceeds hard cap 12");
  CHECK(message_of("experiment = timer\nspin.bogus = 1\n").find("line 2") == 0);
  CHECK(message_of("experiment = timer\nspin.h = ten\n").find("line 2: spin.h") == 0);
  CHECK(message_of("experiment = timer\n\nspin.encoding = quantum\n").find("line 3") == 0);
  CHECK(message_of("experiment = timer\nno equals sign\n").find("line 2") == 0);
  CHECK(message_of("experiment = timer\nrealizations = 1\nrealizations = 2\n").find("line 3") == 0);
  CHECK(message_of("experiment = dance\n").find("line 1") == 0);
  CHECK(message_of("experiment = timer\nspin.coupling_low = 2\n").find("line 2") == 0);
  CHECK(message_of("experiment = classify\ngaussian.input_osc = 9\n").find("line 2") == 0);
  CHECK(message_of("experiment = timer\nspin.coupling_low = 0\nspin.coupling_high = 0\n").empty());
}
