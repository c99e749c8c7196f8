#include "qrc/spin.hpp"

#include <cmath>
#include <string>

namespace qrc {

namespace {

Index basis_mask(int n_spins, int qubit) { return Index{1} << (n_spins - 1 - qubit); }

int log2_exact(Index dim) {
  int n = 0;
  while ((Index{1} << n) < dim) ++n;
  return (Index{1} << n) == dim ? n : -1;
}

// Builds the observable vector from the diagonal of rho and the sums
// S_q = sum_{i : bit q of i is 0} rho(i, i | mask_q).
template <typename OffDiagonal>
Vector observables_from(const Vector& probabilities, int n, ObservableSet set,
                        OffDiagonal&& off_diagonal_sum) {
  const Index dim = probabilities.size();
  Vector out(observable_count(n, set));
  Matrix signs(dim, n);
  for (int q = 0; q < n; ++q) {
    const Index mask = basis_mask(n, q);
    for (Index i = 0; i < dim; ++i) signs(i, q) = (i & mask) ? -1.0 : 1.0;
  }
  out.head(n) = signs.transpose() * probabilities;
  if (set == ObservableSet::z) return out;

  for (int q = 0; q < n; ++q) {
    const Complex s = off_diagonal_sum(q);
    out[n + q] = 2.0 * s.real();
    out[2 * n + q] = -2.0 * s.imag();
  }
  if (set == ObservableSet::xyz) return out;

  Index k = 3 * n;
  for (int q = 0; q < n; ++q)
    for (int r = q + 1; r < n; ++r)
      out[k++] = (signs.col(q).array() * signs.col(r).array() * probabilities.array()).sum();
  return out;
}

}  // namespace

std::string_view to_string(Encoding e) { return e == Encoding::pure ? "pure" : "mixed"; }

std::string_view to_string(ObservableSet o) {
  switch (o) {
    case ObservableSet::z: return "Z";
    case ObservableSet::xyz: return "XYZ";
    case ObservableSet::xyz_zz: return "XYZ_ZZ";
  }
  return "?";
}

std::optional<Encoding> parse_encoding(std::string_view text) {
  if (text == "pure") return Encoding::pure;
  if (text == "mixed") return Encoding::mixed;
  return std::nullopt;
}

std::optional<ObservableSet> parse_observable_set(std::string_view text) {
  if (text == "Z") return ObservableSet::z;
  if (text == "XYZ") return ObservableSet::xyz;
  if (text == "XYZ_ZZ") return ObservableSet::xyz_zz;
  return std::nullopt;
}

void SpinConfig::validate() const {
  if (n_spins < 2) throw DomainError("spin.n_spins must be at least 2");
  if (n_spins > kMaxSpins)
    throw DomainError("spin.n_spins = " + std::to_string(n_spins) + " exceeds hard cap " +
                      std::to_string(kMaxSpins));
  if (!(dt > 0.0)) throw DomainError("spin.dt must be positive");
  if (multiplex_v < 1) throw DomainError("spin.multiplex must be at least 1");
  if (!(coupling_low <= coupling_high))
    throw DomainError("spin.coupling_low must not exceed spin.coupling_high");
  if (!std::isfinite(field_h)) throw DomainError("spin.h must be finite");
}

SpinHamiltonian build_spin_hamiltonian(const SpinConfig& config) {
  config.validate();
  Rng rng(config.seed);
  SpinHamiltonian h;
  h.field = config.field_h;
  h.couplings = Matrix::Zero(config.n_spins, config.n_spins);
  for (int i = 0; i < config.n_spins; ++i)
    for (int j = i + 1; j < config.n_spins; ++j) {
      const double value = rng.uniform(config.coupling_low, config.coupling_high);
      h.couplings(i, j) = value;
      h.couplings(j, i) = value;
    }
  return h;
}

Matrix full_hamiltonian(const SpinHamiltonian& h) {
  const int n = h.n_spins();
  const Index dim = Index{1} << n;
  Matrix out = Matrix::Zero(dim, dim);
  for (Index k = 0; k < dim; ++k) {
    double diagonal = 0.0;
    for (int q = 0; q < n; ++q) diagonal += (k & basis_mask(n, q)) ? -h.field : h.field;
    out(k, k) = diagonal;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double coupling = h.couplings(i, j);
        if (coupling == 0.0) continue;
        out(k ^ basis_mask(n, i) ^ basis_mask(n, j), k) += coupling;
      }
  }
  return out;
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols())
    throw DimensionError("density matrix must be square");
  n_ = log2_exact(m_.rows());
  if (n_ < 0 || m_.rows() == 0)
    throw DimensionError("density matrix dimension must be a power of two");
}

DensityMatrix DensityMatrix::ground(int n_qubits) {
  const Index dim = Index{1} << n_qubits;
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(0, 0) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  const Index dim = Index{1} << n_qubits;
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::from_pure(const Eigen::VectorXcd& psi) {
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix::Validity DensityMatrix::validity() const {
  Validity v;
  v.hermiticity = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  v.trace_error = std::abs(m_.trace() - Complex(1.0, 0.0));
  const ComplexMatrix symmetric = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(symmetric, Eigen::EigenvaluesOnly);
  v.min_eigenvalue = solver.eigenvalues().minCoeff();
  return v;
}

DensityMatrix random_pure_state(int n_qubits, Rng& rng) {
  const Index dim = Index{1} << n_qubits;
  Eigen::VectorXcd psi(dim);
  for (Index i = 0; i < dim; ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    psi[i] = Complex(re, im);
  }
  psi.normalize();
  return DensityMatrix::from_pure(psi);
}

double Propagator::unitarity_error() const {
  const Index dim = u_.rows();
  return (u_.adjoint() * u_ - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

std::vector<Propagator> build_propagator_powers(const SpinHamiltonian& h, double dt_sub,
                                                int count) {
  const Matrix hfull = full_hamiltonian(h);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hfull);
  if (solver.info() != Eigen::Success)
    throw NumericalError("Hamiltonian eigendecomposition failed");
  const Matrix& vectors = solver.eigenvectors();
  const Vector& energies = solver.eigenvalues();

  std::vector<Propagator> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int j = 1; j <= count; ++j) {
    const Vector phase = energies * (dt_sub * j);
    const Matrix cos_part =
        vectors * phase.array().cos().matrix().asDiagonal() * vectors.transpose();
    const Matrix sin_part =
        vectors * phase.array().sin().matrix().asDiagonal() * vectors.transpose();
    ComplexMatrix u(hfull.rows(), hfull.cols());
    u.real() = cos_part;
    u.imag() = -sin_part;
    out.emplace_back(std::move(u));
  }
  return out;
}

Propagator build_propagator(const SpinHamiltonian& h, double dt_sub) {
  if (!(dt_sub > 0.0)) throw DomainError("build_propagator: dt_sub must be positive");
  return std::move(build_propagator_powers(h, dt_sub, 1).front());
}

DensityMatrix encode_input(double s, Encoding scheme) {
  if (!(s >= 0.0 && s <= 1.0))
    throw DomainError("input value " + std::to_string(s) + " outside [0,1]");
  ComplexMatrix m(2, 2);
  if (scheme == Encoding::pure) {
    const double a = std::sqrt(1.0 - s);
    const double b = std::sqrt(s);
    m << a * a, a * b, a * b, b * b;
  } else {
    m << 1.0 - s, 0.0, 0.0, s;
  }
  return DensityMatrix(std::move(m));
}

DensityMatrix inject_input(const DensityMatrix& rho, const DensityMatrix& qubit_state) {
  if (qubit_state.qubits() != 1)
    throw DimensionError("inject_input: qubit_state must be a single-qubit state");
  if (rho.qubits() < 1) throw DimensionError("inject_input: rho has no qubits");
  return DensityMatrix(kron(qubit_state.matrix(), partial_trace_first(rho.matrix())));
}

std::vector<DensityMatrix> evolve_multiplexed(const DensityMatrix& rho, const Propagator& u,
                                              int v) {
  if (v < 1) throw DomainError("evolve_multiplexed: v must be at least 1");
  if (u.matrix().rows() != rho.dim())
    throw DimensionError("evolve_multiplexed: propagator and state dimensions differ");
  std::vector<DensityMatrix> out;
  out.reserve(static_cast<std::size_t>(v));
  ComplexMatrix current = rho.matrix();
  for (int j = 0; j < v; ++j) {
    current = u.matrix() * current * u.matrix().adjoint();
    out.emplace_back(current);
  }
  return out;
}

Index observable_count(int n_spins, ObservableSet set) {
  switch (set) {
    case ObservableSet::z: return n_spins;
    case ObservableSet::xyz: return 3 * n_spins;
    case ObservableSet::xyz_zz: return 3 * n_spins + n_spins * (n_spins - 1) / 2;
  }
  return 0;
}

Vector measure_observables(const DensityMatrix& rho, ObservableSet set) {
  const ComplexMatrix& m = rho.matrix();
  const int n = rho.qubits();
  const Vector probabilities = m.diagonal().real();
  return observables_from(probabilities, n, set, [&](int q) {
    const Index mask = basis_mask(n, q);
    Complex sum = 0.0;
    for (Index i = 0; i < m.rows(); ++i)
      if (!(i & mask)) sum += m(i, i | mask);
    return sum;
  });
}

std::vector<Index> observable_columns(int n_spins, int multiplex_v, ObservableSet subset) {
  const Index stride = observable_count(n_spins, ObservableSet::xyz_zz);
  const Index width = observable_count(n_spins, subset);
  std::vector<Index> cols;
  for (int j = 0; j < multiplex_v; ++j)
    for (Index c = 0; c < width; ++c) cols.push_back(j * stride + c);
  return cols;
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("trace_distance: dimension mismatch");
  const ComplexMatrix diff = 0.5 * ((a - b) + (a - b).adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(diff, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

SpinReservoir::SpinReservoir(const SpinConfig& config)
    : SpinReservoir(config, build_spin_hamiltonian(config)) {}

SpinReservoir::SpinReservoir(const SpinConfig& config, const SpinHamiltonian& hamiltonian)
    : config_(config), hamiltonian_(hamiltonian) {
  config_.validate();
  if (hamiltonian_.n_spins() != config_.n_spins)
    throw DimensionError("SpinReservoir: Hamiltonian size differs from n_spins");
  powers_ = build_propagator_powers(hamiltonian_, config_.dt / config_.multiplex_v,
                                    config_.multiplex_v);
  reset();
}

Index SpinReservoir::feature_count() const {
  return config_.multiplex_v * observable_count(config_.n_spins, config_.observables);
}

void SpinReservoir::reset() { set_state(DensityMatrix::ground(config_.n_spins)); }

void SpinReservoir::set_state(const State& rho) {
  if (rho.qubits() != config_.n_spins)
    throw DimensionError("SpinReservoir::set_state: wrong number of qubits");
  full_ = rho.matrix();
  terms_.clear();
  injected_.resize(0, 0);
  reduced_ = partial_trace_first(rho.matrix());
  const Vector single = measure_observables(rho, config_.observables);
  features_.resize(feature_count());
  for (int j = 0; j < config_.multiplex_v; ++j)
    features_.segment(j * single.size(), single.size()) = single;
}

DensityMatrix SpinReservoir::state() const {
  if (full_) return DensityMatrix(*full_);
  const Index dim = Index{1} << config_.n_spins;
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  for (const Term& t : terms_) rho.noalias() += t.scaled * t.embed.adjoint();
  return DensityMatrix(std::move(rho));
}

Vector SpinReservoir::measure(const std::vector<Term>& terms) const {
  const int n = config_.n_spins;
  const Index dim = Index{1} << n;
  Vector probabilities = Vector::Zero(dim);
  for (const Term& t : terms)
    probabilities += t.scaled.cwiseProduct(t.embed.conjugate()).rowwise().sum().real();
  if (config_.observables == ObservableSet::z)
    return observables_from(probabilities, n, config_.observables, [](int) { return Complex{}; });

  // column access is contiguous on the transposes
  std::vector<ComplexMatrix> scaled_t;
  std::vector<ComplexMatrix> embed_t;
  for (const Term& t : terms) {
    scaled_t.emplace_back(t.scaled.transpose());
    embed_t.emplace_back(t.embed.transpose());
  }
  return observables_from(probabilities, n, config_.observables, [&](int q) {
    const Index mask = basis_mask(n, q);
    Complex sum = 0.0;
    for (std::size_t t = 0; t < terms.size(); ++t)
      for (Index i = 0; i < dim; ++i)
        if (!(i & mask)) sum += embed_t[t].col(i | mask).dot(scaled_t[t].col(i));
    return sum;
  });
}

void SpinReservoir::step(double s) {
  if (!(s >= 0.0 && s <= 1.0))
    throw DomainError("input value " + std::to_string(s) + " outside [0,1]");
  const Index dim = Index{1} << config_.n_spins;
  const Index half = dim / 2;

  injected_ = std::move(reduced_);
  last_input_ = s;
  full_.reset();

  const Index per_snapshot = observable_count(config_.n_spins, config_.observables);
  features_.resize(feature_count());
  const double w0 = std::sqrt(1.0 - s);
  const double w1 = std::sqrt(s);

  for (int j = 0; j < config_.multiplex_v; ++j) {
    const ComplexMatrix& u = powers_[static_cast<std::size_t>(j)].matrix();
    terms_.clear();
    // W = U (psi (x) I): the pure encoding contributes one term, the mixed
    // encoding one term per populated basis state of the input qubit.
    if (config_.encoding == Encoding::pure) {
      ComplexMatrix embed = w0 * u.leftCols(half) + w1 * u.rightCols(half);
      ComplexMatrix scaled = embed * injected_;
      terms_.push_back({std::move(embed), std::move(scaled)});
    } else {
      if (w0 > 0.0) {
        ComplexMatrix embed = w0 * u.leftCols(half);
        ComplexMatrix scaled = embed * injected_;
        terms_.push_back({std::move(embed), std::move(scaled)});
      }
      if (w1 > 0.0) {
        ComplexMatrix embed = w1 * u.rightCols(half);
        ComplexMatrix scaled = embed * injected_;
        terms_.push_back({std::move(embed), std::move(scaled)});
      }
    }
    features_.segment(j * per_snapshot, per_snapshot) = measure(terms_);
  }

  reduced_ = ComplexMatrix::Zero(half, half);
  for (const Term& t : terms_) {
    reduced_.noalias() += t.scaled.topRows(half) * t.embed.topRows(half).adjoint();
    reduced_.noalias() += t.scaled.bottomRows(half) * t.embed.bottomRows(half).adjoint();
  }
}

double SpinReservoir::distance_to(const SpinReservoir& other) const {
  // After identical injections under the same unitary both states are
  // U^V (q (x) sigma) U^V^dagger with the same q, and the trace norm reduces
  // to that of the sigmas.
  const bool shared_injection = !full_ && !other.full_ &&
                                config_.encoding == other.config_.encoding &&
                                last_input_ == other.last_input_ &&
                                config_.multiplex_v == other.config_.multiplex_v &&
                                config_.dt == other.config_.dt &&
                                hamiltonian_.field == other.hamiltonian_.field &&
                                hamiltonian_.couplings == other.hamiltonian_.couplings;
  if (shared_injection) return trace_distance(injected_, other.injected_);
  return trace_distance(state().matrix(), other.state().matrix());
}

}  // namespace qrc
