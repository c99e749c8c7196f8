#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qrc/rng.hpp"
#include "qrc/types.hpp"

namespace qrc {

// Transverse-field Ising spin network
//
//   H = sum_{i<j} J_ij X_i X_j + h sum_i Z_i
//
// Qubit q (0-based) is bit (N-1-q) of a computational basis index, so qubit 0
// is the most significant bit and  A (x) B  is the ordinary Kronecker product
// with A acting on qubit 0. Qubit 0 receives the inputs.

inline constexpr int kMaxSpins = 12;

enum class Encoding { pure, mixed };
enum class ObservableSet { z, xyz, xyz_zz };

std::string_view to_string(Encoding e);
std::string_view to_string(ObservableSet o);
std::optional<Encoding> parse_encoding(std::string_view text);
std::optional<ObservableSet> parse_observable_set(std::string_view text);

struct SpinConfig {
  int n_spins = 10;
  double field_h = 10.0;
  double coupling_low = -0.5;
  double coupling_high = 0.5;
  double dt = 10.0;
  int multiplex_v = 1;
  Encoding encoding = Encoding::pure;
  ObservableSet observables = ObservableSet::xyz_zz;
  std::uint64_t seed = 0;

  /// Throws DomainError naming the first violated constraint.
  void validate() const;
};

struct SpinHamiltonian {
  Matrix couplings;  // symmetric, zero diagonal
  double field = 0.0;

  int n_spins() const { return static_cast<int>(couplings.rows()); }
};

/// Couplings J_ij (i<j) drawn in row-major order from Rng(config.seed).
SpinHamiltonian build_spin_hamiltonian(const SpinConfig& config);

/// Dense real 2^N x 2^N matrix of the Hamiltonian.
Matrix full_hamiltonian(const SpinHamiltonian& h);

/// Hermitian, unit-trace, positive semidefinite operator on N qubits.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  /// Takes ownership of `m`; throws DimensionError unless m is square with a
  /// power-of-two dimension. Physical validity is checked by `validity()`.
  explicit DensityMatrix(ComplexMatrix m);

  static DensityMatrix ground(int n_qubits);
  static DensityMatrix maximally_mixed(int n_qubits);
  static DensityMatrix from_pure(const Eigen::VectorXcd& psi);

  const ComplexMatrix& matrix() const { return m_; }
  int qubits() const { return n_; }
  Index dim() const { return m_.rows(); }

  struct Validity {
    double hermiticity;     // max |rho - rho^dagger|
    double trace_error;     // |Tr rho - 1|
    double min_eigenvalue;
  };
  Validity validity() const;

 private:
  ComplexMatrix m_;
  int n_ = 0;
};

/// Haar-distributed pure state of n qubits.
DensityMatrix random_pure_state(int n_qubits, Rng& rng);

/// Unitary U = exp(-i H dt).
class Propagator {
 public:
  explicit Propagator(ComplexMatrix u) : u_(std::move(u)) {}
  const ComplexMatrix& matrix() const { return u_; }
  /// max |U^dagger U - I|
  double unitarity_error() const;

 private:
  ComplexMatrix u_;
};

/// exp(-i H dt_sub) through the eigendecomposition of the real symmetric H.
Propagator build_propagator(const SpinHamiltonian& h, double dt_sub);

/// U^j for j = 1..count, each from the same eigendecomposition.
std::vector<Propagator> build_propagator_powers(const SpinHamiltonian& h, double dt_sub,
                                                int count);

/// Single-qubit input state: pure  sqrt(1-s)|0> + sqrt(s)|1>  or mixed
/// (1-s)|0><0| + s|1><1|. Throws DomainError for s outside [0,1].
DensityMatrix encode_input(double s, Encoding scheme);

template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                           a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Trace over qubit 0 (the most significant bit).
template <typename Derived>
auto partial_trace_first(const Eigen::MatrixBase<Derived>& rho) {
  const Index half = rho.rows() / 2;
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      rho.topLeftCorner(half, half) + rho.bottomRightCorner(half, half);
  return out;
}

/// qubit_state (x) Tr_0(rho): qubit 0 replaced, the rest untouched.
DensityMatrix inject_input(const DensityMatrix& rho, const DensityMatrix& qubit_state);

/// Snapshots U^j rho U^j^dagger, j = 1..v.
std::vector<DensityMatrix> evolve_multiplexed(const DensityMatrix& rho, const Propagator& u, int v);

Index observable_count(int n_spins, ObservableSet set);

/// Expectation values, laid out as [Z_0..Z_{N-1}, X_0..X_{N-1}, Y_0..Y_{N-1},
/// Z_iZ_j for i<j in lexicographic order]; each set is a prefix of the next.
Vector measure_observables(const DensityMatrix& rho, ObservableSet set);

/// Columns of an `xyz_zz` feature row (v snapshots concatenated) that make up
/// `subset`.
std::vector<Index> observable_columns(int n_spins, int multiplex_v, ObservableSet subset);

/// (1/2) || a - b ||_1
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// Spin-network reservoir: each step injects the input into qubit 0, then
// evolves for dt in multiplex_v equal sub-steps and records the observables
// of every sub-step.
//
// The state after a step is kept factored as rho = sum_t (W_t sigma) W_t^dagger
// with W_t = U (psi_t (x) I) of size 2^N x 2^(N-1). That avoids forming the
// full 2^N x 2^N product on every step; `state()` materializes it on demand.
class SpinReservoir {
 public:
  using State = DensityMatrix;

  explicit SpinReservoir(const SpinConfig& config);
  SpinReservoir(const SpinConfig& config, const SpinHamiltonian& hamiltonian);

  void step(double s);
  const Vector& features() const { return features_; }
  Index feature_count() const;
  State state() const;
  void set_state(const State& rho);
  /// All qubits in |0>.
  void reset();
  double distance_to(const SpinReservoir& other) const;

  const SpinConfig& config() const { return config_; }
  const SpinHamiltonian& hamiltonian() const { return hamiltonian_; }

 private:
  struct Term {
    ComplexMatrix embed;   // W_t
    ComplexMatrix scaled;  // W_t sigma
  };

  Vector measure(const std::vector<Term>& terms) const;

  SpinConfig config_;
  SpinHamiltonian hamiltonian_;
  std::vector<Propagator> powers_;  // U^1..U^V

  std::optional<ComplexMatrix> full_;  // set by reset()/set_state()
  std::vector<Term> terms_;            // valid after a step
  ComplexMatrix injected_;             // sigma used by the last step
  double last_input_ = 0.0;
  ComplexMatrix reduced_;              // Tr_0 of the current state
  Vector features_;
};

}  // namespace qrc
