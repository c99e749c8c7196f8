#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "qrc/types.hpp"

namespace qrc {

// Harmonic-oscillator network in the covariance-matrix formalism.
//
// Quadratures are ordered (x_1..x_N, p_1..p_N), hbar = 1, and the vacuum
// covariance is I/2. The network Hamiltonian is
//
//   H = sum_i (p_i^2 + omega0^2 x_i^2) / 2 + sum_{i<j} (g_ij / 2) (x_i - x_j)^2
//
// with K = omega0^2 I + L(g) the stiffness matrix and L(g) the weighted graph
// Laplacian. Quadratures are stored in units of the bare oscillator,
// x' = sqrt(omega0) x and p' = p / sqrt(omega0), so the uncoupled vacuum is
// I/2 and H = q'^T M q' / 2 with M = diag(K / omega0, omega0 I). Hamilton's
// equations read dq'/dt = Omega M q'.

struct GaussianConfig {
  int n_osc = 4;
  double omega0 = 0.25;
  double coupling_low = 0.0;
  double coupling_high = 0.2;
  double dt = 10.0;
  int input_osc = 0;  // 0-based
  std::uint64_t seed = 0;

  void validate() const;
};

/// Omega = [[0, I], [-I, 0]] for n modes.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> symplectic_form(Index n_modes) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> omega =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(2 * n_modes, 2 * n_modes);
  omega.topRightCorner(n_modes, n_modes).setIdentity();
  omega.bottomLeftCorner(n_modes, n_modes) =
      -Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(n_modes, n_modes);
  return omega;
}

/// Single-mode squeezed vacuum covariance (1/2) R(phi) diag(e^{-2r}, e^{2r}) R(phi)^T.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> squeezed_covariance(Scalar r, Scalar phi) {
  using std::cos;
  using std::exp;
  using std::sin;
  Eigen::Matrix<Scalar, 2, 2> rot;
  rot << cos(phi), -sin(phi), sin(phi), cos(phi);
  const Eigen::Matrix<Scalar, 2, 1> diag(exp(Scalar(-2) * r), exp(Scalar(2) * r));
  return Scalar(0.5) * rot * diag.asDiagonal() * rot.transpose();
}

struct CovarianceState {
  Vector mean;  // length 2N
  Matrix cov;   // 2N x 2N

  static CovarianceState vacuum(Index n_modes);
  Index modes() const { return mean.size() / 2; }

  /// Smallest eigenvalue of V + (i/2) Omega; negative means unphysical.
  double uncertainty_min_eigenvalue() const;
};

/// Squeezed vacuum with magnitude r >= 0 and ellipse rotation phi.
CovarianceState squeezed_vacuum(double r, double phi);

class SymplecticPropagator {
 public:
  SymplecticPropagator(Matrix s, Matrix hamiltonian, double dt);

  const Matrix& matrix() const { return s_; }
  const Matrix& hamiltonian() const { return hamiltonian_; }
  double dt() const { return dt_; }
  Index modes() const { return s_.rows() / 2; }

  /// max |S Omega S^T - Omega|
  double symplectic_error() const;

 private:
  Matrix s_;
  Matrix hamiltonian_;
  double dt_;
};

/// Coupling strengths g_ij (i<j) drawn in row-major order from Rng(seed).
Matrix draw_oscillator_couplings(const GaussianConfig& config);

/// M = diag(K / omega0, omega0 I) with K = omega0^2 I + L(g), in quadratures
/// scaled so that the uncoupled vacuum is I/2.
Matrix oscillator_hamiltonian(double omega0, const Matrix& couplings);

/// S = exp(Omega M dt) from the normal modes of K. Throws ConfigError if K is
/// not positive definite.
SymplecticPropagator oscillator_propagator(double omega0, const Matrix& couplings, double dt);

SymplecticPropagator build_oscillator_network(const GaussianConfig& config);

/// V -> S V S^T, mean -> S mean.
CovarianceState evolve(const SymplecticPropagator& s, const CovarianceState& state);

/// Replaces mode `mode` by the single-mode state `input`, discarding its
/// correlations with the rest of the network.
CovarianceState inject_mode(const CovarianceState& state, const CovarianceState& input,
                            Index mode);

/// Diagonal covariance entries of every mode except `input_osc`:
/// the x variances first, then the p variances.
Vector output_features(const CovarianceState& state, Index input_osc);

/// Ground state, input injected into `input_osc`, one evolution, readout.
Vector run_qelm_instance(const SymplecticPropagator& network, const CovarianceState& input_state,
                         Index input_osc = 0);

// Oscillator network driven by scalar inputs. A scalar s in [0,1] is encoded
// as a squeezed vacuum with r = squeeze_scale * s and phi = 0. With
// `reset_between_inputs` the network returns to its ground state before every
// injection (extreme learning mode).
class GaussianReservoir {
 public:
  using State = CovarianceState;

  GaussianReservoir(SymplecticPropagator network, Index input_osc, bool reset_between_inputs,
                    double squeeze_scale = 2.0);

  void step(double s);
  void step_state(const CovarianceState& input);
  const Vector& features() const { return features_; }
  Index feature_count() const { return 2 * (network_.modes() - 1); }
  State state() const { return state_; }
  void set_state(const State& state);
  void reset();
  /// Frobenius norm of the covariance difference.
  double distance_to(const GaussianReservoir& other) const;

  const SymplecticPropagator& network() const { return network_; }

 private:
  SymplecticPropagator network_;
  Index input_osc_;
  bool reset_between_inputs_;
  double squeeze_scale_;
  CovarianceState state_;
  Vector features_;
};

struct DtSelectionOptions {
  int n_classes = 3;
  bool random_phase = true;
  int n_train = 200;
  int n_validation = 100;
  double r_max = 2.0;
  double phi_max = 0.7853981633974483;
  std::uint64_t seed = 0;
};

/// Picks the evolution time whose network classifies a held-out squeezing
/// dataset best. The couplings are shared by all candidates (drawn from
/// base.seed); ties go to the earliest candidate. Throws DomainError if
/// `candidates` is empty.
double select_dt(const GaussianConfig& base, std::span<const double> candidates,
                 const DtSelectionOptions& options);

}  // namespace qrc
