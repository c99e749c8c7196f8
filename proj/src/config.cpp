#include "qrc/config.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace qrc {

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::timer: return "timer";
    case Experiment::classify: return "classify";
    case Experiment::ipc: return "ipc";
    case Experiment::invariants: return "invariants";
  }
  return "?";
}

std::string_view to_string(EvalMode m) {
  return m == EvalMode::train_window ? "train_window" : "holdout";
}

std::string_view to_string(InvariantSuite s) {
  switch (s) {
    case InvariantSuite::spin: return "spin";
    case InvariantSuite::gaussian: return "gaussian";
    case InvariantSuite::readout: return "readout";
    case InvariantSuite::all: return "all";
  }
  return "?";
}

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(int line, const std::string& key, const std::string& message) {
  if (line > 0) throw ConfigError("line " + std::to_string(line) + ": " + key + ": " + message);
  throw ConfigError(key + ": " + message);
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                               : comma - start));
    out.emplace_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const Entry& e) {
  T value{};
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || e.value.empty())
    fail(e.line, key, "expected a number, got '" + e.value + "'");
  return value;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& values, F&& render) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += render(values[i]);
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": missing key");
    if (entries.contains(key)) fail(line_no, key, "duplicate key");
    entries[key] = {value, line_no};
  }

  ExperimentConfig cfg;
  const auto experiment = entries.find("experiment");
  if (experiment == entries.end() || experiment->second.value.empty())
    throw ConfigError("experiment: required");
  const std::string& name = experiment->second.value;
  if (name == "timer") cfg.experiment = Experiment::timer;
  else if (name == "classify") cfg.experiment = Experiment::classify;
  else if (name == "ipc") cfg.experiment = Experiment::ipc;
  else if (name == "invariants") cfg.experiment = Experiment::invariants;
  else fail(experiment->second.line, "experiment", "unknown experiment '" + name + "'");

  // experiment-specific defaults
  switch (cfg.experiment) {
    case Experiment::timer: cfg.realizations = 10; break;
    case Experiment::classify: cfg.realizations = 100; break;
    case Experiment::ipc: cfg.spin.n_spins = 3; break;
    case Experiment::invariants: break;
  }

  using Setter = std::function<void(const std::string&, const Entry&)>;
  const auto integer = [](int& field) -> Setter {
    return [&field](const std::string& k, const Entry& e) { field = parse_number<int>(k, e); };
  };
  const auto real = [](double& field) -> Setter {
    return [&field](const std::string& k, const Entry& e) { field = parse_number<double>(k, e); };
  };

  const std::map<std::string, Setter> setters = {
      {"experiment", [](const std::string&, const Entry&) {}},
      {"output_dir", [&](const std::string& k, const Entry& e) {
         if (e.value.empty()) fail(e.line, k, "must not be empty");
         cfg.output_dir = e.value;
       }},
      {"realizations", integer(cfg.realizations)},
      {"base_seed", [&](const std::string& k, const Entry& e) {
         cfg.base_seed = parse_number<std::uint64_t>(k, e);
       }},
      {"spin.n_spins", integer(cfg.spin.n_spins)},
      {"spin.h", real(cfg.spin.field_h)},
      {"spin.coupling_low", real(cfg.spin.coupling_low)},
      {"spin.coupling_high", real(cfg.spin.coupling_high)},
      {"spin.dt", real(cfg.spin.dt)},
      {"spin.multiplex", integer(cfg.spin.multiplex_v)},
      {"spin.encoding", [&](const std::string& k, const Entry& e) {
         const auto parsed = parse_encoding(e.value);
         if (!parsed) fail(e.line, k, "expected pure or mixed, got '" + e.value + "'");
         cfg.spin.encoding = *parsed;
       }},
      {"spin.observables", [&](const std::string& k, const Entry& e) {
         cfg.observable_sets.clear();
         for (const auto& item : split_list(e.value)) {
           const auto parsed = parse_observable_set(item);
           if (!parsed) fail(e.line, k, "expected Z, XYZ or XYZ_ZZ, got '" + item + "'");
           cfg.observable_sets.push_back(*parsed);
         }
       }},
      {"gaussian.n_osc", integer(cfg.gaussian.n_osc)},
      {"gaussian.omega0", real(cfg.gaussian.omega0)},
      {"gaussian.coupling_low", real(cfg.gaussian.coupling_low)},
      {"gaussian.coupling_high", real(cfg.gaussian.coupling_high)},
      {"gaussian.dt", [&](const std::string& k, const Entry& e) {
         if (e.value == "auto") {
           cfg.gaussian_dt_auto = true;
         } else {
           cfg.gaussian_dt_auto = false;
           cfg.gaussian.dt = parse_number<double>(k, e);
         }
       }},
      {"gaussian.dt_candidates", [&](const std::string& k, const Entry& e) {
         cfg.dt_candidates.clear();
         for (const auto& item : split_list(e.value))
           cfg.dt_candidates.push_back(parse_number<double>(k, Entry{item, e.line}));
       }},
      {"gaussian.input_osc", [&](const std::string& k, const Entry& e) {
         cfg.gaussian.input_osc = parse_number<int>(k, e) - 1;
       }},
      {"task.c", integer(cfg.timer.c)},
      {"task.length", [&](const std::string& k, const Entry& e) {
         const int v = parse_number<int>(k, e);
         cfg.timer.length = v;
         cfg.ipc.length = v;
       }},
      {"task.washout", [&](const std::string& k, const Entry& e) {
         const int v = parse_number<int>(k, e);
         cfg.timer.washout = v;
         cfg.ipc.washout = v;
       }},
      {"task.tau", [&](const std::string& k, const Entry& e) {
         cfg.timer.taus.clear();
         for (const auto& item : split_list(e.value))
           cfg.timer.taus.push_back(parse_number<int>(k, Entry{item, e.line}));
       }},
      {"task.holdout_shift", integer(cfg.timer.holdout_shift)},
      {"task.class_counts", [&](const std::string& k, const Entry& e) {
         cfg.classify.class_counts.clear();
         for (const auto& item : split_list(e.value))
           cfg.classify.class_counts.push_back(parse_number<int>(k, Entry{item, e.line}));
       }},
      {"task.phase_modes", [&](const std::string& k, const Entry& e) {
         cfg.classify.random_phase.clear();
         for (const auto& item : split_list(e.value)) {
           if (item == "constant") cfg.classify.random_phase.push_back(false);
           else if (item == "random") cfg.classify.random_phase.push_back(true);
           else fail(e.line, k, "expected constant or random, got '" + item + "'");
         }
       }},
      {"task.n_train", integer(cfg.classify.n_train)},
      {"task.n_test", integer(cfg.classify.n_test)},
      {"task.r_max", real(cfg.classify.r_max)},
      {"task.phi_max", real(cfg.classify.phi_max)},
      {"task.d_max", integer(cfg.ipc.d_max)},
      {"task.delay_max", integer(cfg.ipc.delay_max)},
      {"task.surrogates", integer(cfg.ipc.surrogates)},
      {"task.sigma_threshold", real(cfg.ipc.sigma_threshold)},
      {"training.ridge", real(cfg.ridge)},
      {"training.eval_mode", [&](const std::string& k, const Entry& e) {
         if (e.value == "train_window") cfg.eval_mode = EvalMode::train_window;
         else if (e.value == "holdout") cfg.eval_mode = EvalMode::holdout;
         else fail(e.line, k, "expected train_window or holdout, got '" + e.value + "'");
       }},
      {"invariants.suite", [&](const std::string& k, const Entry& e) {
         if (e.value == "spin") cfg.suite = InvariantSuite::spin;
         else if (e.value == "gaussian") cfg.suite = InvariantSuite::gaussian;
         else if (e.value == "readout") cfg.suite = InvariantSuite::readout;
         else if (e.value == "all") cfg.suite = InvariantSuite::all;
         else fail(e.line, k, "expected spin, gaussian, readout or all, got '" + e.value + "'");
       }},
      {"invariants.steps", integer(cfg.invariant_steps)},
      {"invariants.n_spins", integer(cfg.invariant_spins)},
  };

  for (const auto& [key, entry] : entries) {
    const auto setter = setters.find(key);
    if (setter == setters.end()) fail(entry.line, key, "unknown key");
    setter->second(key, entry);
  }

  // constraint violations are reported against the line that set the field
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    const std::string message = e.what();
    const auto colon = message.find(':');
    const std::string key = message.substr(0, colon);
    const auto where = entries.find(key);
    if (where != entries.end())
      throw ConfigError("line " + std::to_string(where->second.line) + ": " + message);
    throw;
  }
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  const auto require = [](bool ok, const std::string& key, const std::string& message) {
    if (!ok) throw ConfigError(key + ": " + message);
  };
  require(cfg.realizations >= 1, "realizations", "must be at least 1");

  if (cfg.spin.n_spins > kMaxSpins)
    throw ConfigError("spin.n_spins: " + std::to_string(cfg.spin.n_spins) + " exceeds hard cap " +
                      std::to_string(kMaxSpins));
  require(cfg.spin.n_spins >= 2, "spin.n_spins", "must be at least 2");
  require(cfg.spin.dt > 0.0, "spin.dt", "must be positive");
  require(cfg.spin.multiplex_v >= 1, "spin.multiplex", "must be at least 1");
  require(cfg.spin.coupling_low <= cfg.spin.coupling_high, "spin.coupling_low",
          "must not exceed spin.coupling_high");
  require(!cfg.observable_sets.empty(), "spin.observables", "must not be empty");

  require(cfg.gaussian.n_osc >= 2, "gaussian.n_osc", "must be at least 2");
  require(cfg.gaussian.omega0 > 0.0, "gaussian.omega0", "must be positive");
  require(cfg.gaussian.coupling_low >= 0.0, "gaussian.coupling_low", "must be non-negative");
  require(cfg.gaussian.coupling_low <= cfg.gaussian.coupling_high, "gaussian.coupling_low",
          "must not exceed gaussian.coupling_high");
  require(cfg.gaussian.input_osc >= 0 && cfg.gaussian.input_osc < cfg.gaussian.n_osc,
          "gaussian.input_osc", "must lie in 1..n_osc");
  require(cfg.gaussian_dt_auto || cfg.gaussian.dt >= 0.0, "gaussian.dt", "must be non-negative");
  require(!cfg.dt_candidates.empty(), "gaussian.dt_candidates", "must not be empty");
  for (const double dt : cfg.dt_candidates)
    require(dt >= 0.0, "gaussian.dt_candidates", "entries must be non-negative");

  if (cfg.experiment == Experiment::timer) {
    require(!cfg.timer.taus.empty(), "task.tau", "must not be empty");
    require(cfg.timer.c >= 0, "task.c", "must be non-negative");
    require(cfg.timer.washout >= 0 && cfg.timer.washout < cfg.timer.length, "task.washout",
            "must lie in [0, length)");
    for (const int tau : cfg.timer.taus) {
      require(tau >= 0, "task.tau", "must be non-negative");
      require(cfg.timer.c + tau < cfg.timer.length, "task.tau", "requires c + tau < length");
      require(cfg.timer.c + tau >= cfg.timer.washout, "task.tau",
              "target spike falls inside the washout");
      if (cfg.eval_mode == EvalMode::holdout)
        require(cfg.timer.c + cfg.timer.holdout_shift + tau < cfg.timer.length,
                "task.holdout_shift", "pushes the holdout spike past the sequence end");
    }
  }
  if (cfg.experiment == Experiment::classify) {
    require(!cfg.classify.class_counts.empty(), "task.class_counts", "must not be empty");
    for (const int n : cfg.classify.class_counts)
      require(n >= 2, "task.class_counts", "entries must be at least 2");
    require(!cfg.classify.random_phase.empty(), "task.phase_modes", "must not be empty");
    require(cfg.classify.n_train >= 1, "task.n_train", "must be positive");
    require(cfg.classify.n_test >= 1, "task.n_test", "must be positive");
    require(cfg.classify.r_max > 0.0, "task.r_max", "must be positive");
    require(cfg.classify.phi_max >= 0.0, "task.phi_max", "must be non-negative");
  }
  if (cfg.experiment == Experiment::ipc) {
    require(cfg.ipc.d_max >= 1, "task.d_max", "must be at least 1");
    require(cfg.ipc.delay_max >= 1, "task.delay_max", "must be at least 1");
    require(cfg.ipc.surrogates >= 2, "task.surrogates", "must be at least 2");
    require(cfg.ipc.washout >= cfg.ipc.delay_max - 1, "task.washout",
            "must cover delay_max - 1 steps");
    require(cfg.ipc.length - cfg.ipc.washout > 2 * cfg.ipc.delay_max, "task.length",
            "leaves too few rows after the washout");
  }
  require(cfg.ridge >= 0.0, "training.ridge", "must be non-negative");
  require(cfg.invariant_steps >= 1, "invariants.steps", "must be positive");
  require(cfg.invariant_spins >= 2 && cfg.invariant_spins <= kMaxSpins, "invariants.n_spins",
          "must lie in 2..12");
}

std::string render_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  const auto d = format_double;
  out << "experiment = " << to_string(cfg.experiment) << '\n'
      << "output_dir = " << cfg.output_dir << '\n'
      << "realizations = " << cfg.realizations << '\n'
      << "base_seed = " << cfg.base_seed << '\n'
      << "spin.n_spins = " << cfg.spin.n_spins << '\n'
      << "spin.h = " << d(cfg.spin.field_h) << '\n'
      << "spin.coupling_low = " << d(cfg.spin.coupling_low) << '\n'
      << "spin.coupling_high = " << d(cfg.spin.coupling_high) << '\n'
      << "spin.dt = " << d(cfg.spin.dt) << '\n'
      << "spin.multiplex = " << cfg.spin.multiplex_v << '\n'
      << "spin.encoding = " << to_string(cfg.spin.encoding) << '\n'
      << "spin.observables = "
      << join(cfg.observable_sets, [](ObservableSet o) { return std::string(to_string(o)); })
      << '\n'
      << "gaussian.n_osc = " << cfg.gaussian.n_osc << '\n'
      << "gaussian.omega0 = " << d(cfg.gaussian.omega0) << '\n'
      << "gaussian.coupling_low = " << d(cfg.gaussian.coupling_low) << '\n'
      << "gaussian.coupling_high = " << d(cfg.gaussian.coupling_high) << '\n'
      << "gaussian.dt = " << (cfg.gaussian_dt_auto ? std::string("auto") : d(cfg.gaussian.dt))
      << '\n'
      << "gaussian.dt_candidates = " << join(cfg.dt_candidates, d) << '\n'
      << "gaussian.input_osc = " << cfg.gaussian.input_osc + 1 << '\n';
  switch (cfg.experiment) {
    case Experiment::timer:
      out << "task.c = " << cfg.timer.c << '\n'
          << "task.length = " << cfg.timer.length << '\n'
          << "task.washout = " << cfg.timer.washout << '\n'
          << "task.tau = " << join(cfg.timer.taus, [](int t) { return std::to_string(t); }) << '\n'
          << "task.holdout_shift = " << cfg.timer.holdout_shift << '\n';
      break;
    case Experiment::classify:
      out << "task.class_counts = "
          << join(cfg.classify.class_counts, [](int n) { return std::to_string(n); }) << '\n'
          << "task.phase_modes = "
          << join(cfg.classify.random_phase,
                  [](bool r) { return std::string(r ? "random" : "constant"); })
          << '\n'
          << "task.n_train = " << cfg.classify.n_train << '\n'
          << "task.n_test = " << cfg.classify.n_test << '\n'
          << "task.r_max = " << d(cfg.classify.r_max) << '\n'
          << "task.phi_max = " << d(cfg.classify.phi_max) << '\n';
      break;
    case Experiment::ipc:
      out << "task.length = " << cfg.ipc.length << '\n'
          << "task.washout = " << cfg.ipc.washout << '\n'
          << "task.d_max = " << cfg.ipc.d_max << '\n'
          << "task.delay_max = " << cfg.ipc.delay_max << '\n'
          << "task.surrogates = " << cfg.ipc.surrogates << '\n'
          << "task.sigma_threshold = " << d(cfg.ipc.sigma_threshold) << '\n';
      break;
    case Experiment::invariants:
      break;
  }
  out << "training.ridge = " << d(cfg.ridge) << '\n'
      << "training.eval_mode = " << to_string(cfg.eval_mode) << '\n'
      << "invariants.suite = " << to_string(cfg.suite) << '\n'
      << "invariants.steps = " << cfg.invariant_steps << '\n'
      << "invariants.n_spins = " << cfg.invariant_spins << '\n';
  return out.str();
}

}  // namespace qrc
