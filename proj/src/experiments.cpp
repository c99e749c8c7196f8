#include "qrc/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "qrc/core.hpp"
#include "qrc/gaussian.hpp"
#include "qrc/readout.hpp"
#include "qrc/spin.hpp"
#include "qrc/tasks.hpp"

namespace qrc {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// Runs fn(0..count-1) on up to `jobs` threads. Rethrows the exception of the
// lowest failing index.
template <typename F>
void parallel_for(int count, int jobs, F&& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::vector<std::thread> workers;
  for (int t = 0; t < jobs; ++t)
    workers.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

FeatureMatrix select_columns(const FeatureMatrix& x, const std::vector<Index>& cols) {
  return x(Eigen::all, cols);
}

double sample_std(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return std::sqrt(sq / static_cast<double>(values.size() - 1));
}

double mean_of(const std::vector<double>& values) {
  double mean = 0.0;
  for (double v : values) mean += v;
  return values.empty() ? 0.0 : mean / static_cast<double>(values.size());
}

std::uint64_t realization_seed(const ExperimentConfig& cfg, int r) {
  return cfg.base_seed + static_cast<std::uint64_t>(r);
}

class CsvWriter {
 public:
  explicit CsvWriter(std::filesystem::path path) : path_(std::move(path)) {}

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  std::filesystem::path save() const {
    std::ofstream file(path_, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open " + path_.string() + " for writing");
    file << out_.str();
    if (!file) throw IoError("failed writing " + path_.string());
    return path_;
  }

 private:
  std::filesystem::path path_;
  std::ostringstream out_;
};

std::string str(Index v) { return std::to_string(v); }

}  // namespace

// ---- timer ---------------------------------------------------------------

double TimerResult::mean_mse(std::size_t tau_index, std::size_t set_index) const {
  std::vector<double> values;
  for (const auto& r : realizations) values.push_back(r.mse[tau_index][set_index]);
  return mean_of(values);
}

TimerResult run_timer(const ExperimentConfig& cfg, int jobs) {
  validate(cfg);
  const TimerSection& t = cfg.timer;
  const Index window = t.length - t.washout;
  const bool holdout = cfg.eval_mode == EvalMode::holdout;

  TimerResult result;
  result.taus = t.taus;
  result.sets = cfg.observable_sets;
  for (const ObservableSet set : result.sets)
    result.set_sizes.push_back(cfg.spin.multiplex_v * observable_count(cfg.spin.n_spins, set));

  const InputSequence train_inputs = timer_sequence(t.c, t.taus.front(), t.length).inputs;
  const int eval_c = holdout ? t.c + t.holdout_shift : t.c;
  const InputSequence eval_inputs = timer_sequence(eval_c, t.taus.front(), t.length).inputs;
  std::vector<Vector> train_targets;
  for (const int tau : t.taus) {
    train_targets.push_back(timer_sequence(t.c, tau, t.length).target.tail(window));
    result.targets.push_back(timer_sequence(eval_c, tau, t.length).target.tail(window));
  }
  result.steps = Vector::LinSpaced(window, static_cast<double>(t.washout),
                                   static_cast<double>(t.length - 1));
  result.inputs = eval_inputs.tail(window);

  std::vector<std::vector<Index>> columns;
  for (const ObservableSet set : result.sets)
    columns.push_back(observable_columns(cfg.spin.n_spins, cfg.spin.multiplex_v, set));

  result.realizations.resize(static_cast<std::size_t>(cfg.realizations));
  parallel_for(cfg.realizations, jobs, [&](int r) {
    SpinConfig sc = cfg.spin;
    sc.seed = realization_seed(cfg, r);
    sc.observables = ObservableSet::xyz_zz;
    SpinReservoir reservoir(sc);
    const FeatureMatrix train = run_sequence(reservoir, train_inputs, t.washout);
    FeatureMatrix eval = train;
    if (holdout) {
      reservoir.reset();
      eval = run_sequence(reservoir, eval_inputs, t.washout);
    }

    TimerRealization& out = result.realizations[static_cast<std::size_t>(r)];
    out.seed = sc.seed;
    for (std::size_t i = 0; i < t.taus.size(); ++i) {
      out.outputs.emplace_back();
      out.mse.emplace_back();
      for (std::size_t j = 0; j < result.sets.size(); ++j) {
        const ReadoutWeights w =
            train_linear(select_columns(train, columns[j]), train_targets[i], cfg.ridge);
        Vector y = predict(select_columns(eval, columns[j]), w);
        out.mse.back().push_back(mse(y, result.targets[i]));
        out.outputs.back().push_back(std::move(y));
      }
    }
  });
  return result;
}

// ---- classification ------------------------------------------------------

double ClassifyCase::mean() const { return mean_of(success); }
double ClassifyCase::std_dev() const { return sample_std(success); }

namespace {

FeatureMatrix features_for(const SymplecticPropagator& network, Index input_osc,
                           const std::vector<SqueezeSample>& samples, Vector& labels) {
  FeatureMatrix x(static_cast<Index>(samples.size()), 2 * (network.modes() - 1));
  labels.resize(static_cast<Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto row = static_cast<Index>(i);
    x.row(row) =
        run_qelm_instance(network, squeezed_vacuum(samples[i].r, samples[i].phi), input_osc)
            .transpose();
    labels[row] = samples[i].label;
  }
  return x;
}

}  // namespace

double classify_success_rate(const ExperimentConfig& cfg, int n_classes, bool random_phase,
                             std::uint64_t seed, double* dt_used) {
  GaussianConfig g = cfg.gaussian;
  g.seed = seed;
  if (cfg.gaussian_dt_auto) {
    DtSelectionOptions options;
    options.n_classes = n_classes;
    options.random_phase = random_phase;
    options.r_max = cfg.classify.r_max;
    options.phi_max = cfg.classify.phi_max;
    options.seed = seed;
    g.dt = select_dt(g, cfg.dt_candidates, options);
  }
  if (dt_used) *dt_used = g.dt;
  const SymplecticPropagator network = build_oscillator_network(g);

  SqueezeClassifyTask task;
  task.n_classes = n_classes;
  task.random_phase = random_phase;
  task.n_train = cfg.classify.n_train;
  task.n_test = cfg.classify.n_test;
  task.r_max = cfg.classify.r_max;
  task.phi_max = cfg.classify.phi_max;
  Rng rng = Rng::derive(seed, 1);
  const SqueezeDataset data = squeeze_dataset(task, rng);

  Vector train_labels;
  Vector test_labels;
  const FeatureMatrix train = features_for(network, g.input_osc, data.train, train_labels);
  const FeatureMatrix test = features_for(network, g.input_osc, data.test, test_labels);
  const ClassifierModel model = train_classifier(train, train_labels, data.class_values, cfg.ridge);
  return success_rate(classify(model, test), test_labels);
}

ClassifyResult run_classify(const ExperimentConfig& cfg, int jobs) {
  validate(cfg);
  ClassifyResult result;
  for (const bool random_phase : cfg.classify.random_phase)
    for (const int n : cfg.classify.class_counts) {
      ClassifyCase c;
      c.n_classes = n;
      c.random_phase = random_phase;
      c.success.resize(static_cast<std::size_t>(cfg.realizations));
      c.dt.resize(static_cast<std::size_t>(cfg.realizations));
      parallel_for(cfg.realizations, jobs, [&](int r) {
        const auto i = static_cast<std::size_t>(r);
        c.success[i] = classify_success_rate(cfg, n, random_phase, realization_seed(cfg, r), &c.dt[i]);
      });
      result.cases.push_back(std::move(c));
    }
  return result;
}

// ---- capacity ------------------------------------------------------------

IpcExperimentResult run_ipc(const ExperimentConfig& cfg, int jobs) {
  validate(cfg);
  const IpcSection& p = cfg.ipc;
  std::vector<std::vector<IpcRow>> per_realization(static_cast<std::size_t>(cfg.realizations));
  parallel_for(cfg.realizations, jobs, [&](int r) {
    SpinConfig sc = cfg.spin;
    sc.seed = realization_seed(cfg, r);
    sc.observables = ObservableSet::xyz_zz;
    SpinReservoir reservoir(sc);
    const Vector raw = draw_ipc_inputs(p.length, sc.seed);
    const InputSequence injected = (raw.array() + 1.0) / 2.0;
    const FeatureMatrix x = run_sequence(reservoir, injected, p.washout);

    IpcOptions options;
    options.d_max = p.d_max;
    options.delay_max = p.delay_max;
    options.surrogates = p.surrogates;
    options.sigma_threshold = p.sigma_threshold;
    options.seed = sc.seed;
    for (const ObservableSet set : cfg.observable_sets) {
      const auto cols = observable_columns(sc.n_spins, sc.multiplex_v, set);
      const IpcResult ipc = ipc_from_features(select_columns(x, cols), raw, p.washout, options);
      per_realization[static_cast<std::size_t>(r)].push_back(
          {set, ipc.feature_count, sc.seed, ipc.rank, ipc.per_degree, ipc.total});
    }
  });
  IpcExperimentResult result;
  for (auto& rows : per_realization)
    for (auto& row : rows) result.rows.push_back(std::move(row));
  return result;
}

// ---- invariants ----------------------------------------------------------

namespace {

void add_check(std::vector<InvariantCheck>& out, std::string suite, std::string name, double value,
               double threshold, bool passed) {
  out.push_back({std::move(suite), std::move(name), value, threshold, passed});
}

void spin_invariants(const ExperimentConfig& cfg, std::vector<InvariantCheck>& out) {
  for (const Encoding encoding : {Encoding::pure, Encoding::mixed}) {
    SpinConfig sc = cfg.spin;
    sc.n_spins = cfg.invariant_spins;
    sc.seed = cfg.base_seed;
    sc.encoding = encoding;
    sc.observables = ObservableSet::xyz_zz;
    SpinReservoir reservoir(sc);
    Rng rng = Rng::derive(cfg.base_seed, 7);

    double hermiticity = 0.0;
    double trace_error = 0.0;
    double min_eigenvalue = 1.0;
    double observable_excess = 0.0;
    for (int k = 1; k <= cfg.invariant_steps; ++k) {
      reservoir.step(rng.uniform());
      observable_excess = std::max(observable_excess, reservoir.features().cwiseAbs().maxCoeff() - 1.0);
      if (k % 100 == 0 || k == cfg.invariant_steps) {
        const auto v = reservoir.state().validity();
        hermiticity = std::max(hermiticity, v.hermiticity);
        trace_error = std::max(trace_error, v.trace_error);
        min_eigenvalue = std::min(min_eigenvalue, v.min_eigenvalue);
      }
    }
    const std::string tag = std::string(to_string(encoding)) + " N=" + std::to_string(sc.n_spins) +
                            " steps=" + std::to_string(cfg.invariant_steps);
    add_check(out, "spin", "trace error (" + tag + ")", trace_error, 1e-10, trace_error <= 1e-10);
    add_check(out, "spin", "hermiticity (" + tag + ")", hermiticity, 1e-10, hermiticity <= 1e-10);
    add_check(out, "spin", "min eigenvalue (" + tag + ")", min_eigenvalue, -1e-9,
              min_eigenvalue >= -1e-9);
    add_check(out, "spin", "observable bound excess (" + tag + ")", observable_excess, 1e-12,
              observable_excess <= 1e-12);
  }

  SpinConfig sc = cfg.spin;
  sc.n_spins = cfg.invariant_spins;
  sc.seed = cfg.base_seed;
  const double unitarity =
      build_propagator(build_spin_hamiltonian(sc), sc.dt / sc.multiplex_v).unitarity_error();
  add_check(out, "spin", "unitarity |U^dag U - I|_max", unitarity, 1e-10, unitarity <= 1e-10);

  Rng rng = Rng::derive(cfg.base_seed, 8);
  const DensityMatrix rho = random_pure_state(sc.n_spins, rng);
  const DensityMatrix injected = inject_input(rho, encode_input(rng.uniform(), Encoding::pure));
  const double locality =
      (partial_trace_first(rho.matrix()) - partial_trace_first(injected.matrix())).cwiseAbs().maxCoeff();
  add_check(out, "spin", "injection locality", locality, 1e-12, locality <= 1e-12);
}

void gaussian_invariants(const ExperimentConfig& cfg, std::vector<InvariantCheck>& out) {
  std::vector<double> radii;
  for (const int n : {2, 3, 4, 5})
    for (const double r : squeeze_class_values(n, cfg.classify.r_max)) radii.push_back(r);
  const int phases = 9;

  double symplectic = 0.0;
  double uncertainty = 1.0;
  double purity = 0.0;
  double min_feature = 1.0;
  double phase_spread = 0.0;
  for (int r = 0; r < 100; ++r) {
    GaussianConfig g = cfg.gaussian;
    g.seed = cfg.base_seed + static_cast<std::uint64_t>(r);
    const Matrix couplings = draw_oscillator_couplings(g);
    for (const double dt : cfg.dt_candidates) {
      const SymplecticPropagator s = oscillator_propagator(g.omega0, couplings, dt);
      symplectic = std::max(symplectic, s.symplectic_error());
      const Vector vacuum_features =
          run_qelm_instance(s, squeezed_vacuum(0.0, 0.0), g.input_osc);
      for (int k = 0; k < phases; ++k) {
        const double phi = cfg.classify.phi_max * k / (phases - 1);
        phase_spread = std::max(
            phase_spread,
            (run_qelm_instance(s, squeezed_vacuum(0.0, phi), g.input_osc) - vacuum_features)
                .cwiseAbs()
                .maxCoeff());
        for (const double radius : radii) {
          const CovarianceState in = inject_mode(CovarianceState::vacuum(g.n_osc),
                                                 squeezed_vacuum(radius, phi), g.input_osc);
          const CovarianceState evolved = evolve(s, in);
          uncertainty = std::min(uncertainty, evolved.uncertainty_min_eigenvalue());
          const double expected = std::pow(0.25, g.n_osc);
          purity = std::max(purity, std::abs(evolved.cov.determinant() / expected - 1.0));
          min_feature = std::min(min_feature, output_features(evolved, g.input_osc).minCoeff());
        }
      }
    }
  }
  add_check(out, "gaussian", "symplecticity |S Omega S^T - Omega|_max", symplectic, 1e-10,
            symplectic <= 1e-10);
  add_check(out, "gaussian", "uncertainty min eigenvalue", uncertainty, -1e-9, uncertainty >= -1e-9);
  add_check(out, "gaussian", "purity det relative error", purity, 1e-8, purity <= 1e-8);
  add_check(out, "gaussian", "min feature", min_feature, 0.0, min_feature > 0.0);
  add_check(out, "gaussian", "vacuum phase independence", phase_spread, 1e-12, phase_spread <= 1e-12);
}

void readout_invariants(const ExperimentConfig& cfg, std::vector<InvariantCheck>& out) {
  Rng rng = Rng::derive(cfg.base_seed, 9);
  const Index rows = 300;
  const Index cols = 8;
  FeatureMatrix x(rows, cols);
  Vector y(rows);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) x(i, j) = rng.normal();
    y[i] = std::sin(x(i, 0)) + 0.3 * x(i, 1) * x(i, 2) + 0.1 * rng.normal();
  }

  const ReadoutWeights w = train_linear(x, y, 0.0);
  const Vector residual = y - predict(x, w);
  const double orthogonality = (x.transpose() * residual).cwiseAbs().maxCoeff() / x.norm();
  add_check(out, "readout", "residual orthogonality |X^T r|_max / |X|", orthogonality, 1e-8,
            orthogonality <= 1e-8);

  double previous = -1.0;
  double worst_drop = 0.0;
  for (const double ridge : {0.0, 1e-3, 1e-1, 1.0, 10.0, 100.0}) {
    const double m = mse(predict(x, train_linear(x, y, ridge)), y);
    if (previous >= 0.0) worst_drop = std::max(worst_drop, previous - m);
    previous = m;
  }
  add_check(out, "readout", "ridge monotonicity (largest MSE decrease)", worst_drop, 1e-12,
            worst_drop <= 1e-12);

  double capacity_excess = 0.0;
  for (int k = 0; k < 20; ++k) {
    Vector target(rows);
    for (Index i = 0; i < rows; ++i) target[i] = rng.uniform(-1.0, 1.0) + (k % 2) * x(i, k % cols);
    const double c = capacity(x, target);
    capacity_excess = std::max({capacity_excess, c - 1.0, -c});
  }
  add_check(out, "readout", "capacity outside [0,1]", capacity_excess, 0.0, capacity_excess <= 0.0);

  const std::vector<double> classes{0.0, 1.0, 2.0};
  Vector labels(rows);
  for (Index i = 0; i < rows; ++i) labels[i] = classes[rng.below(3)];
  FeatureMatrix noisy = x;
  noisy.col(0) = labels + 0.4 * Vector::NullaryExpr(rows, [&](Index) { return rng.normal(); });
  ClassifierModel model = train_classifier(noisy, labels, classes);
  const double shifted = success_rate(classify(model, noisy), labels);
  model.bias_shift = 0.0;
  const double unshifted = success_rate(classify(model, noisy), labels);
  add_check(out, "readout", "bias shift accuracy gain", shifted - unshifted, 0.0,
            shifted >= unshifted);
}

}  // namespace

std::vector<InvariantCheck> run_invariants(const ExperimentConfig& cfg) {
  std::vector<InvariantCheck> out;
  const bool all = cfg.suite == InvariantSuite::all;
  if (all || cfg.suite == InvariantSuite::spin) spin_invariants(cfg, out);
  if (all || cfg.suite == InvariantSuite::gaussian) gaussian_invariants(cfg, out);
  if (all || cfg.suite == InvariantSuite::readout) readout_invariants(cfg, out);
  return out;
}

// ---- reports -------------------------------------------------------------

namespace {

std::filesystem::path write_meta(const ExperimentConfig& cfg) {
  std::ostringstream text;
  text << render_config(cfg);
  text << "# seeds:";
  for (int r = 0; r < cfg.realizations; ++r) text << ' ' << realization_seed(cfg, r);
  text << '\n';

  const auto path = std::filesystem::path(cfg.output_dir) / "meta.txt";
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  file << text.str();
  if (!file) throw IoError("failed writing " + path.string());
  return path;
}

void write_timer(const ExperimentConfig& cfg, const TimerResult& res,
                 std::vector<std::filesystem::path>& files) {
  const std::filesystem::path dir(cfg.output_dir);
  for (std::size_t i = 0; i < res.taus.size(); ++i)
    for (std::size_t j = 0; j < res.sets.size(); ++j) {
      CsvWriter csv(dir / ("trajectory_" + std::to_string(res.taus[i]) + "_" +
                           str(res.set_sizes[j]) + ".csv"));
      std::vector<std::string> header{"k", "s", "target", "y_mean"};
      for (std::size_t r = 0; r < res.realizations.size(); ++r)
        header.push_back("y_r" + std::to_string(r));
      csv.row(header);
      for (Index k = 0; k < res.steps.size(); ++k) {
        double mean = 0.0;
        for (const auto& r : res.realizations) mean += r.outputs[i][j][k];
        mean /= static_cast<double>(res.realizations.size());
        std::vector<std::string> row{str(static_cast<Index>(res.steps[k])), format_real(res.inputs[k]),
                                     format_real(res.targets[i][k]), format_real(mean)};
        for (const auto& r : res.realizations) row.push_back(format_real(r.outputs[i][j][k]));
        csv.row(row);
      }
      files.push_back(csv.save());
    }

  CsvWriter per(dir / "timer_mse.csv");
  per.row({"tau", "observables", "O", "realization", "seed", "mse"});
  CsvWriter summary(dir / "timer_summary.csv");
  summary.row({"tau", "observables", "O", "mean_mse", "std_mse", "mse_of_mean_trajectory"});
  for (std::size_t i = 0; i < res.taus.size(); ++i)
    for (std::size_t j = 0; j < res.sets.size(); ++j) {
      std::vector<double> values;
      Vector mean_trajectory = Vector::Zero(res.steps.size());
      for (std::size_t r = 0; r < res.realizations.size(); ++r) {
        const auto& real = res.realizations[r];
        values.push_back(real.mse[i][j]);
        mean_trajectory += real.outputs[i][j];
        per.row({std::to_string(res.taus[i]), std::string(to_string(res.sets[j])),
                 str(res.set_sizes[j]), std::to_string(r), std::to_string(real.seed),
                 format_real(real.mse[i][j])});
      }
      mean_trajectory /= static_cast<double>(res.realizations.size());
      summary.row({std::to_string(res.taus[i]), std::string(to_string(res.sets[j])),
                   str(res.set_sizes[j]), format_real(mean_of(values)),
                   format_real(sample_std(values)),
                   format_real(mse(mean_trajectory, res.targets[i]))});
    }
  files.push_back(per.save());
  files.push_back(summary.save());
}

void write_classify(const ExperimentConfig& cfg, const ClassifyResult& res,
                    std::vector<std::filesystem::path>& files) {
  const std::filesystem::path dir(cfg.output_dir);
  CsvWriter per(dir / "classify_realizations.csv");
  per.row({"n_classes", "phase_mode", "realization", "seed", "dt", "success_rate"});
  CsvWriter summary(dir / "classify_summary.csv");
  summary.row({"n_classes", "phase_mode", "mean", "std", "realizations"});
  for (const auto& c : res.cases) {
    const std::string mode = c.random_phase ? "random" : "constant";
    for (std::size_t r = 0; r < c.success.size(); ++r)
      per.row({std::to_string(c.n_classes), mode, std::to_string(r),
               std::to_string(realization_seed(cfg, static_cast<int>(r))), format_real(c.dt[r]),
               format_real(c.success[r])});
    summary.row({std::to_string(c.n_classes), mode, format_real(c.mean()), format_real(c.std_dev()),
                 std::to_string(c.success.size())});
  }
  files.push_back(per.save());
  files.push_back(summary.save());
}

void write_ipc(const ExperimentConfig& cfg, const IpcExperimentResult& res,
               std::vector<std::filesystem::path>& files) {
  const std::filesystem::path dir(cfg.output_dir);
  CsvWriter degrees(dir / "ipc_degrees.csv");
  degrees.row({"observables", "O", "seed", "degree", "capacity"});
  CsvWriter totals(dir / "ipc_totals.csv");
  totals.row({"observables", "O", "seed", "rank", "total"});
  for (const auto& row : res.rows) {
    const std::string name(to_string(row.set));
    for (std::size_t d = 0; d < row.per_degree.size(); ++d)
      degrees.row({name, str(row.feature_count), std::to_string(row.seed), std::to_string(d + 1),
                   format_real(row.per_degree[d])});
    totals.row({name, str(row.feature_count), std::to_string(row.seed), str(row.rank),
                format_real(row.total)});
  }
  files.push_back(degrees.save());
  files.push_back(totals.save());
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& cfg, int jobs) {
  validate(cfg);
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.output_dir + ": " + ec.message());

  ExperimentOutcome outcome;
  switch (cfg.experiment) {
    case Experiment::timer:
      write_timer(cfg, run_timer(cfg, jobs), outcome.files);
      break;
    case Experiment::classify:
      write_classify(cfg, run_classify(cfg, jobs), outcome.files);
      break;
    case Experiment::ipc:
      write_ipc(cfg, run_ipc(cfg, jobs), outcome.files);
      break;
    case Experiment::invariants: {
      const auto checks = run_invariants(cfg);
      CsvWriter csv(std::filesystem::path(cfg.output_dir) / "invariants.csv");
      csv.row({"suite", "check", "value", "threshold", "passed"});
      for (const auto& c : checks) {
        csv.row({c.suite, "\"" + c.name + "\"", format_real(c.value), format_real(c.threshold),
                 c.passed ? "1" : "0"});
        outcome.invariants_passed = outcome.invariants_passed && c.passed;
      }
      outcome.files.push_back(csv.save());
      break;
    }
  }
  outcome.files.push_back(write_meta(cfg));
  return outcome;
}

}  // namespace qrc
