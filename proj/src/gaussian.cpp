#include "qrc/gaussian.hpp"

#include <string>

#include "qrc/readout.hpp"
#include "qrc/rng.hpp"
#include "qrc/tasks.hpp"

namespace qrc {

void GaussianConfig::validate() const {
  if (n_osc < 2) throw DomainError("gaussian.n_osc must be at least 2");
  if (!(omega0 > 0.0)) throw DomainError("gaussian.omega0 must be positive");
  if (!(coupling_low >= 0.0 && coupling_low <= coupling_high))
    throw DomainError("gaussian couplings require 0 <= coupling_low <= coupling_high");
  if (!(dt >= 0.0)) throw DomainError("gaussian.dt must be non-negative");
  if (input_osc < 0 || input_osc >= n_osc)
    throw DomainError("gaussian.input_osc out of range");
}

CovarianceState CovarianceState::vacuum(Index n_modes) {
  return {Vector::Zero(2 * n_modes), Matrix::Identity(2 * n_modes, 2 * n_modes) / 2.0};
}

double CovarianceState::uncertainty_min_eigenvalue() const {
  const Index n = modes();
  ComplexMatrix m(2 * n, 2 * n);
  m.real() = 0.5 * (cov + cov.transpose());
  m.imag() = 0.5 * symplectic_form(n);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

CovarianceState squeezed_vacuum(double r, double phi) {
  if (!(r >= 0.0)) throw DomainError("squeezed_vacuum: r must be non-negative");
  return {Vector::Zero(2), squeezed_covariance(r, phi)};
}

SymplecticPropagator::SymplecticPropagator(Matrix s, Matrix hamiltonian, double dt)
    : s_(std::move(s)), hamiltonian_(std::move(hamiltonian)), dt_(dt) {}

double SymplecticPropagator::symplectic_error() const {
  const Matrix omega = symplectic_form(modes());
  return (s_ * omega * s_.transpose() - omega).cwiseAbs().maxCoeff();
}

Matrix draw_oscillator_couplings(const GaussianConfig& config) {
  config.validate();
  Rng rng(config.seed);
  Matrix g = Matrix::Zero(config.n_osc, config.n_osc);
  for (int i = 0; i < config.n_osc; ++i)
    for (int j = i + 1; j < config.n_osc; ++j) {
      g(i, j) = rng.uniform(config.coupling_low, config.coupling_high);
      g(j, i) = g(i, j);
    }
  return g;
}

namespace {

Matrix stiffness(double omega0, const Matrix& couplings) {
  const Index n = couplings.rows();
  Matrix k = omega0 * omega0 * Matrix::Identity(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double g = couplings(i, j);
      k(i, i) += g;
      k(j, j) += g;
      k(i, j) -= g;
      k(j, i) -= g;
    }
  return k;
}

}  // namespace

// Quadratures are measured in units of the bare oscillator, x' = sqrt(w0) x and
// p' = p / sqrt(w0), so the uncoupled ground state is the vacuum I/2 and a free
// oscillator rotates by w0 t in phase space. In these units
//   M = diag(K / w0, w0 I),  K = w0^2 I + L(g).
Matrix oscillator_hamiltonian(double omega0, const Matrix& couplings) {
  const Index n = couplings.rows();
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  m.topLeftCorner(n, n) = stiffness(omega0, couplings) / omega0;
  m.bottomRightCorner(n, n) = omega0 * Matrix::Identity(n, n);
  return m;
}

SymplecticPropagator oscillator_propagator(double omega0, const Matrix& couplings, double dt) {
  const Index n = couplings.rows();
  const Matrix k = stiffness(omega0, couplings);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(k);
  if (solver.info() != Eigen::Success)
    throw NumericalError("stiffness eigendecomposition failed");
  if (solver.eigenvalues().minCoeff() <= 0.0)
    throw ConfigError("oscillator network is not stable: stiffness matrix not positive definite");

  const Matrix& modes = solver.eigenvectors();
  const Eigen::ArrayXd freq = solver.eigenvalues().array().sqrt();
  const Eigen::ArrayXd c = (freq * dt).cos();
  const Eigen::ArrayXd s = (freq * dt).sin();

  // normal-mode solution in the original quadratures, then rescaled
  Matrix sym(2 * n, 2 * n);
  sym.topLeftCorner(n, n) = modes * c.matrix().asDiagonal() * modes.transpose();
  sym.topRightCorner(n, n) = omega0 * (modes * (s / freq).matrix().asDiagonal() * modes.transpose());
  sym.bottomLeftCorner(n, n) = -(modes * (s * freq).matrix().asDiagonal() * modes.transpose()) / omega0;
  sym.bottomRightCorner(n, n) = sym.topLeftCorner(n, n);
  return SymplecticPropagator(std::move(sym), oscillator_hamiltonian(omega0, couplings), dt);
}

SymplecticPropagator build_oscillator_network(const GaussianConfig& config) {
  config.validate();
  return oscillator_propagator(config.omega0, draw_oscillator_couplings(config), config.dt);
}

CovarianceState evolve(const SymplecticPropagator& s, const CovarianceState& state) {
  if (state.cov.rows() != s.matrix().rows())
    throw DimensionError("evolve: state and propagator dimensions differ");
  return {s.matrix() * state.mean, s.matrix() * state.cov * s.matrix().transpose()};
}

CovarianceState inject_mode(const CovarianceState& state, const CovarianceState& input,
                            Index mode) {
  if (input.modes() != 1) throw DimensionError("inject_mode: input must be single-mode");
  const Index n = state.modes();
  if (mode < 0 || mode >= n) throw DimensionError("inject_mode: mode index out of range");
  CovarianceState out = state;
  const Index x = mode;
  const Index p = mode + n;
  out.cov.row(x).setZero();
  out.cov.col(x).setZero();
  out.cov.row(p).setZero();
  out.cov.col(p).setZero();
  out.cov(x, x) = input.cov(0, 0);
  out.cov(x, p) = input.cov(0, 1);
  out.cov(p, x) = input.cov(1, 0);
  out.cov(p, p) = input.cov(1, 1);
  out.mean[x] = input.mean[0];
  out.mean[p] = input.mean[1];
  return out;
}

Vector output_features(const CovarianceState& state, Index input_osc) {
  const Index n = state.modes();
  Vector out(2 * (n - 1));
  Index k = 0;
  for (Index quadrature = 0; quadrature < 2; ++quadrature)
    for (Index mode = 0; mode < n; ++mode) {
      if (mode == input_osc) continue;
      const Index idx = quadrature * n + mode;
      out[k++] = state.cov(idx, idx);
    }
  return out;
}

Vector run_qelm_instance(const SymplecticPropagator& network, const CovarianceState& input_state,
                         Index input_osc) {
  const CovarianceState ground = CovarianceState::vacuum(network.modes());
  const CovarianceState injected = inject_mode(ground, input_state, input_osc);
  return output_features(evolve(network, injected), input_osc);
}

GaussianReservoir::GaussianReservoir(SymplecticPropagator network, Index input_osc,
                                     bool reset_between_inputs, double squeeze_scale)
    : network_(std::move(network)),
      input_osc_(input_osc),
      reset_between_inputs_(reset_between_inputs),
      squeeze_scale_(squeeze_scale) {
  if (input_osc_ < 0 || input_osc_ >= network_.modes())
    throw DimensionError("GaussianReservoir: input oscillator out of range");
  reset();
}

void GaussianReservoir::step(double s) {
  if (!(s >= 0.0 && s <= 1.0))
    throw DomainError("input value " + std::to_string(s) + " outside [0,1]");
  step_state(squeezed_vacuum(squeeze_scale_ * s, 0.0));
}

void GaussianReservoir::step_state(const CovarianceState& input) {
  if (reset_between_inputs_) state_ = CovarianceState::vacuum(network_.modes());
  state_ = evolve(network_, inject_mode(state_, input, input_osc_));
  features_ = output_features(state_, input_osc_);
}

void GaussianReservoir::set_state(const State& state) {
  if (state.modes() != network_.modes())
    throw DimensionError("GaussianReservoir::set_state: wrong number of modes");
  state_ = state;
  features_ = output_features(state_, input_osc_);
}

void GaussianReservoir::reset() { set_state(CovarianceState::vacuum(network_.modes())); }

double GaussianReservoir::distance_to(const GaussianReservoir& other) const {
  return (state_.cov - other.state_.cov).norm();
}

namespace {

FeatureMatrix squeeze_features(const SymplecticPropagator& network, Index input_osc,
                               const std::vector<SqueezeSample>& samples) {
  FeatureMatrix x(static_cast<Index>(samples.size()), 2 * (network.modes() - 1));
  for (std::size_t i = 0; i < samples.size(); ++i)
    x.row(static_cast<Index>(i)) =
        run_qelm_instance(network, squeezed_vacuum(samples[i].r, samples[i].phi), input_osc)
            .transpose();
  return x;
}

Vector labels_of(const std::vector<SqueezeSample>& samples) {
  Vector y(static_cast<Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) y[static_cast<Index>(i)] = samples[i].label;
  return y;
}

}  // namespace

double select_dt(const GaussianConfig& base, std::span<const double> candidates,
                 const DtSelectionOptions& options) {
  if (candidates.empty()) throw DomainError("select_dt: no candidate evolution times");
  if (candidates.size() == 1) return candidates.front();

  const Matrix couplings = draw_oscillator_couplings(base);
  const std::vector<double> classes = squeeze_class_values(options.n_classes, options.r_max);

  Rng rng = Rng::derive(options.seed, 0x5e1ec7);
  const auto train = draw_squeeze_samples(options.n_train, classes, options.random_phase,
                                          options.phi_max, rng);
  const auto validation = draw_squeeze_samples(options.n_validation, classes,
                                               options.random_phase, options.phi_max, rng);
  const Vector train_labels = labels_of(train);
  const Vector validation_labels = labels_of(validation);

  double best_dt = candidates.front();
  double best_accuracy = -1.0;
  for (const double dt : candidates) {
    const SymplecticPropagator network = oscillator_propagator(base.omega0, couplings, dt);
    const ClassifierModel model =
        train_classifier(squeeze_features(network, base.input_osc, train), train_labels, classes);
    const double accuracy = success_rate(
        classify(model, squeeze_features(network, base.input_osc, validation)), validation_labels);
    if (accuracy > best_accuracy) {
      best_accuracy = accuracy;
      best_dt = dt;
    }
  }
  return best_dt;
}

}  // namespace qrc
