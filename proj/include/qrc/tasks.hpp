#pragma once

#include <cstdint>
#include <numbers>
#include <utility>
#include <variant>
#include <vector>

#include "qrc/core.hpp"
#include "qrc/readout.hpp"
#include "qrc/rng.hpp"
#include "qrc/types.hpp"

namespace qrc {

struct TimerTask {
  int c = 500;
  int tau = 5;
  int length = 800;
};

struct SqueezeClassifyTask {
  int n_classes = 3;
  bool random_phase = false;
  int n_train = 500;
  int n_test = 200;
  double r_max = 2.0;
  double phi_max = std::numbers::pi / 4.0;
};

struct StmTask {
  int tau = 1;
};

struct ParityTask {
  int tau = 1;
};

struct IpcTask {
  int d_max = 3;
  int delay_max = 20;
  int length = 5000;
};

using TaskSpec = std::variant<TimerTask, SqueezeClassifyTask, StmTask, ParityTask, IpcTask>;

/// Throws DomainError on the first violated invariant.
void validate(const TaskSpec& task);

struct TimerData {
  InputSequence inputs;  // s_k = 1 for k >= c
  Vector target;         // 1 at k = c + tau, 0 elsewhere
};

TimerData timer_sequence(int c, int tau, int length);

struct SqueezeSample {
  double r = 0.0;
  double phi = 0.0;
  double label = 0.0;  // equals r
};

struct SqueezeDataset {
  std::vector<double> class_values;
  std::vector<SqueezeSample> train;
  std::vector<SqueezeSample> test;
};

/// n_classes equally spaced values over [0, r_max], endpoints included.
std::vector<double> squeeze_class_values(int n_classes, double r_max);

/// Labels uniform over the classes; phi = 0 or uniform in [0, phi_max].
SqueezeDataset squeeze_dataset(const SqueezeClassifyTask& task, Rng& rng);
std::vector<SqueezeSample> draw_squeeze_samples(int count, const std::vector<double>& class_values,
                                                bool random_phase, double phi_max, Rng& rng);

enum class BenchmarkKind { stm, parity };

/// Targets for k = tau..L-1 (length L - tau).
///   stm:    ybar_k = s_{k-tau}
///   parity: ybar_k = (s_k + ... + s_{k-tau}) mod 2, inputs must be 0/1
Vector benchmark_target(const InputSequence& inputs, BenchmarkKind kind, int tau);

/// Legendre polynomial P_d(s) by the three-term recurrence.
template <typename Scalar>
Scalar legendre(int degree, Scalar s) {
  if (degree == 0) return Scalar(1);
  Scalar previous(1);
  Scalar current = s;
  for (int n = 1; n < degree; ++n) {
    const Scalar next = (Scalar(2 * n + 1) * s * current - Scalar(n) * previous) / Scalar(n + 1);
    previous = current;
    current = next;
  }
  return current;
}

/// Product of Legendre polynomials P_{d_i}(s_{k - delay_i}).
struct DegreeAssignment {
  std::vector<std::pair<int, int>> terms;  // (delay, degree), delays increasing

  int degree() const;
  int max_delay() const;
  friend bool operator==(const DegreeAssignment&, const DegreeAssignment&) = default;
};

/// Every assignment with total degree 1..d_max over delays 0..delay_max-1,
/// ordered by (total degree, max delay).
std::vector<DegreeAssignment> enumerate_assignments(int d_max, int delay_max);

/// Target values for k = first_step..L-1; requires first_step >= max delay.
Vector ipc_target(const Vector& inputs_raw, const DegreeAssignment& assignment, Index first_step);

struct IpcOptions {
  int d_max = 3;
  int delay_max = 20;
  int surrogates = 20;
  double sigma_threshold = 4.0;
  bool early_stop = true;
  std::uint64_t seed = 0;
};

struct IpcResult {
  std::vector<double> per_degree;  // index d-1
  double total = 0.0;
  Index feature_count = 0;
  Index rank = 0;
  std::vector<std::pair<DegreeAssignment, double>> retained;
};

/// Capacities of every Legendre target against the feature rows, which
/// correspond to steps washout..L-1 of `inputs_raw`. A capacity is kept only
/// if it exceeds mean + sigma_threshold * std of its cyclic-shift surrogates.
IpcResult ipc_from_features(const FeatureMatrix& x, const Vector& inputs_raw, Index washout,
                            const IpcOptions& options);

/// Uniform raw inputs in [-1, 1] from Rng(options.seed), injected as (s+1)/2.
Vector draw_ipc_inputs(Index length, std::uint64_t seed);

template <Reservoir R>
IpcResult total_ipc(R& reservoir, Index length, Index washout, const IpcOptions& options) {
  const Vector raw = draw_ipc_inputs(length, options.seed);
  const InputSequence injected = (raw.array() + 1.0) / 2.0;
  const FeatureMatrix x = run_sequence(reservoir, injected, washout);
  return ipc_from_features(x, raw, washout, options);
}

}  // namespace qrc
