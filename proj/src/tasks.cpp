#include "qrc/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace qrc {

void validate(const TaskSpec& task) {
  std::visit(
      [](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, TimerTask>) {
          if (t.c < 0 || t.tau < 0 || t.c + t.tau >= t.length)
            throw DomainError("timer task requires 0 <= c, 0 <= tau and c + tau < length");
        } else if constexpr (std::is_same_v<T, SqueezeClassifyTask>) {
          if (t.n_classes < 2) throw DomainError("classification needs at least 2 classes");
          if (t.n_train < 1 || t.n_test < 1) throw DomainError("dataset sizes must be positive");
          if (!(t.r_max > 0.0)) throw DomainError("r_max must be positive");
          if (!(t.phi_max >= 0.0)) throw DomainError("phi_max must be non-negative");
        } else if constexpr (std::is_same_v<T, StmTask> || std::is_same_v<T, ParityTask>) {
          if (t.tau < 0) throw DomainError("tau must be non-negative");
        } else if constexpr (std::is_same_v<T, IpcTask>) {
          if (t.d_max < 1) throw DomainError("ipc d_max must be at least 1");
          if (t.delay_max < 1) throw DomainError("ipc delay_max must be at least 1");
          if (t.length <= t.delay_max) throw DomainError("ipc length must exceed delay_max");
        }
      },
      task);
}

TimerData timer_sequence(int c, int tau, int length) {
  validate(TaskSpec{TimerTask{c, tau, length}});
  TimerData out{InputSequence::Zero(length), Vector::Zero(length)};
  out.inputs.tail(length - c).setOnes();
  out.target[c + tau] = 1.0;
  return out;
}

std::vector<double> squeeze_class_values(int n_classes, double r_max) {
  if (n_classes < 2) throw DomainError("squeeze_class_values: need at least 2 classes");
  std::vector<double> values(static_cast<std::size_t>(n_classes));
  for (int i = 0; i < n_classes; ++i) values[static_cast<std::size_t>(i)] = r_max * i / (n_classes - 1);
  return values;
}

std::vector<SqueezeSample> draw_squeeze_samples(int count, const std::vector<double>& class_values,
                                                bool random_phase, double phi_max, Rng& rng) {
  std::vector<SqueezeSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    SqueezeSample sample;
    sample.r = class_values[rng.below(class_values.size())];
    sample.label = sample.r;
    sample.phi = random_phase ? rng.uniform(0.0, phi_max) : 0.0;
    out.push_back(sample);
  }
  return out;
}

SqueezeDataset squeeze_dataset(const SqueezeClassifyTask& task, Rng& rng) {
  validate(TaskSpec{task});
  SqueezeDataset out;
  out.class_values = squeeze_class_values(task.n_classes, task.r_max);
  out.train = draw_squeeze_samples(task.n_train, out.class_values, task.random_phase,
                                   task.phi_max, rng);
  out.test = draw_squeeze_samples(task.n_test, out.class_values, task.random_phase,
                                  task.phi_max, rng);
  return out;
}

Vector benchmark_target(const InputSequence& inputs, BenchmarkKind kind, int tau) {
  const Index length = inputs.size();
  if (tau < 0 || tau >= length)
    throw DomainError("benchmark_target: tau must lie in [0, length)");
  Vector out(length - tau);
  if (kind == BenchmarkKind::stm) {
    out = inputs.head(length - tau);
    return out;
  }
  for (Index k = 0; k < length; ++k)
    if (inputs[k] != 0.0 && inputs[k] != 1.0)
      throw DomainError("parity task requires binary inputs; got " + std::to_string(inputs[k]) +
                        " at step " + std::to_string(k));
  for (Index k = tau; k < length; ++k) {
    int sum = 0;
    for (Index j = 0; j <= tau; ++j) sum += static_cast<int>(inputs[k - j]);
    out[k - tau] = sum % 2;
  }
  return out;
}

int DegreeAssignment::degree() const {
  int d = 0;
  for (const auto& [delay, degree] : terms) d += degree;
  return d;
}

int DegreeAssignment::max_delay() const {
  int m = 0;
  for (const auto& [delay, degree] : terms) m = std::max(m, delay);
  return m;
}

std::vector<DegreeAssignment> enumerate_assignments(int d_max, int delay_max) {
  if (d_max < 1 || delay_max < 1)
    throw DomainError("enumerate_assignments: d_max and delay_max must be positive");
  std::vector<DegreeAssignment> out;
  for (int d = 1; d <= d_max; ++d) {
    std::vector<DegreeAssignment> level;
    DegreeAssignment current;
    // delays strictly increasing, every degree at least one
    std::function<void(int, int)> extend = [&](int first_delay, int remaining) {
      if (remaining == 0) {
        level.push_back(current);
        return;
      }
      for (int delay = first_delay; delay < delay_max; ++delay)
        for (int degree = 1; degree <= remaining; ++degree) {
          current.terms.emplace_back(delay, degree);
          extend(delay + 1, remaining - degree);
          current.terms.pop_back();
        }
    };
    extend(0, d);
    std::stable_sort(level.begin(), level.end(), [](const auto& a, const auto& b) {
      return a.max_delay() < b.max_delay();
    });
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

Vector ipc_target(const Vector& inputs_raw, const DegreeAssignment& assignment, Index first_step) {
  const Index length = inputs_raw.size();
  if (assignment.max_delay() >= length)
    throw DomainError("ipc_target: delay exceeds sequence length");
  if (first_step < assignment.max_delay() || first_step > length)
    throw DomainError("ipc_target: first_step must lie in [max delay, length]");
  Vector out = Vector::Ones(length - first_step);
  for (const auto& [delay, degree] : assignment.terms)
    for (Index k = first_step; k < length; ++k)
      out[k - first_step] *= legendre(degree, inputs_raw[k - delay]);
  return out;
}

Vector draw_ipc_inputs(Index length, std::uint64_t seed) {
  Rng rng = Rng::derive(seed, 0x1bc);
  Vector raw(length);
  for (Index k = 0; k < length; ++k) raw[k] = rng.uniform(-1.0, 1.0);
  return raw;
}

namespace {

Vector cyclic_shift(const Vector& y, Index shift) {
  const Index n = y.size();
  Vector out(n);
  out.head(n - shift) = y.tail(n - shift);
  out.tail(shift) = y.head(shift);
  return out;
}

}  // namespace

IpcResult ipc_from_features(const FeatureMatrix& x, const Vector& inputs_raw, Index washout,
                            const IpcOptions& options) {
  if (x.rows() + washout != inputs_raw.size())
    throw DimensionError("ipc_from_features: rows + washout must equal the input length");
  if (washout < options.delay_max - 1)
    throw DomainError("ipc_from_features: washout must cover delay_max - 1 steps");
  const Index rows = x.rows();
  if (rows <= 2 * options.delay_max)
    throw DomainError("ipc_from_features: sequence too short for surrogate shifts");

  const CapacityEstimator estimator(x);
  IpcResult result;
  result.feature_count = x.cols();
  result.rank = estimator.rank() - 1;
  result.per_degree.assign(static_cast<std::size_t>(options.d_max), 0.0);

  Rng rng = Rng::derive(options.seed, 0x5a77);
  std::vector<Index> shifts;
  const Index span = rows - 2 * options.delay_max + 1;
  for (int j = 0; j < options.surrogates; ++j)
    shifts.push_back(options.delay_max + static_cast<Index>(rng.below(static_cast<std::uint64_t>(span))));

  const auto assignments = enumerate_assignments(options.d_max, options.delay_max);
  int current_degree = 0;
  bool degree_retained = true;
  for (const DegreeAssignment& a : assignments) {
    if (a.degree() != current_degree) {
      if (options.early_stop && !degree_retained) break;
      current_degree = a.degree();
      degree_retained = false;
    }
    const Vector y = ipc_target(inputs_raw, a, washout);
    if (!(y.squaredNorm() > 0.0)) continue;
    const double c = estimator(y);

    double mean = 0.0;
    double sq = 0.0;
    for (const Index shift : shifts) {
      const double cs = estimator(cyclic_shift(y, shift));
      mean += cs;
      sq += cs * cs;
    }
    const double count = static_cast<double>(shifts.size());
    mean /= count;
    const double std_dev = std::sqrt(std::max(0.0, sq / count - mean * mean));
    if (c > mean + options.sigma_threshold * std_dev) {
      result.per_degree[static_cast<std::size_t>(current_degree - 1)] += c;
      result.retained.emplace_back(a, c);
      degree_retained = true;
    }
  }
  for (const double c : result.per_degree) result.total += c;
  return result;
}

}  // namespace qrc
