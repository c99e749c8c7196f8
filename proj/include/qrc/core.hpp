#pragma once

#include <concepts>
#include <string>
#include <vector>

#include "qrc/types.hpp"

namespace qrc {

// A reservoir is a deterministic state map x_k = f(s_k, x_{k-1}) together
// with a fixed-size readout vector of observables evaluated on x_k.
//
//   step(s)        advance the state by one input injection
//   features()     observables of the current state (fixed length)
//   reset()        return to the declared initial state
//   distance_to()  substrate-specific distance between two states
template <typename R>
concept Reservoir = requires(R r, const R cr, double s, const typename R::State& x) {
  typename R::State;
  { r.step(s) };
  { cr.features() } -> std::convertible_to<Vector>;
  { cr.feature_count() } -> std::convertible_to<Index>;
  { cr.state() } -> std::convertible_to<typename R::State>;
  { r.set_state(x) };
  { r.reset() };
  { cr.distance_to(cr) } -> std::convertible_to<double>;
};

namespace detail {

inline void check_finite_row(const Vector& row, Index step) {
  if (!row.allFinite())
    throw NumericalError("non-finite feature value at step " + std::to_string(step));
}

}  // namespace detail

/// Folds `step` over the inputs and returns one feature row per step after
/// the washout. The washout rows are dropped.
template <Reservoir R>
FeatureMatrix run_sequence(R& reservoir, const InputSequence& inputs, Index washout = 0) {
  const Index length = inputs.size();
  if (washout < 0 || washout > length)
    throw DomainError("run_sequence: washout " + std::to_string(washout) +
                      " exceeds sequence length " + std::to_string(length));
  FeatureMatrix out(length - washout, reservoir.feature_count());
  for (Index k = 0; k < length; ++k) {
    reservoir.step(inputs[k]);
    if (k < washout) continue;
    const Vector row = reservoir.features();
    detail::check_finite_row(row, k);
    out.row(k - washout) = row.transpose();
  }
  return out;
}

/// Extreme learning mode: the reservoir is reset before every instance, so
/// each row depends on its own input only.
template <Reservoir R>
FeatureMatrix run_instances(R& reservoir, const InputSequence& inputs) {
  FeatureMatrix out(inputs.size(), reservoir.feature_count());
  for (Index k = 0; k < inputs.size(); ++k) {
    reservoir.reset();
    reservoir.step(inputs[k]);
    const Vector row = reservoir.features();
    detail::check_finite_row(row, k);
    out.row(k) = row.transpose();
  }
  return out;
}

/// Drives two copies of the reservoir, started in `state_a` and `state_b`,
/// with the same inputs. Entry 0 is the initial distance, entry k the
/// distance after the k-th injection.
template <Reservoir R>
std::vector<double> convergence_test(const R& reservoir, const InputSequence& inputs,
                                     const typename R::State& state_a,
                                     const typename R::State& state_b) {
  R a = reservoir;
  R b = reservoir;
  a.set_state(state_a);
  b.set_state(state_b);
  std::vector<double> distances;
  distances.reserve(static_cast<std::size_t>(inputs.size()) + 1);
  distances.push_back(a.distance_to(b));
  for (Index k = 0; k < inputs.size(); ++k) {
    a.step(inputs[k]);
    b.step(inputs[k]);
    distances.push_back(a.distance_to(b));
  }
  return distances;
}

/// Memoryless reference substrate whose single feature is the last input.
/// Serves as an exact oracle for readout and capacity estimates.
class PassthroughReservoir {
 public:
  using State = double;

  void step(double s) { value_ = s; }
  Vector features() const { return Vector::Constant(1, value_); }
  Index feature_count() const { return 1; }
  State state() const { return value_; }
  void set_state(State s) { value_ = s; }
  void reset() { value_ = 0.0; }
  double distance_to(const PassthroughReservoir& other) const {
    return std::abs(value_ - other.value_);
  }

 private:
  double value_ = 0.0;
};

}  // namespace qrc
