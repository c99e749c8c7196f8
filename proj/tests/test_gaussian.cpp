#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "oracles.hpp"
#include "qrc/gaussian.hpp"
#include "qrc/rng.hpp"

using namespace qrc;

namespace {

GaussianConfig network_config(int n, double g_low, double g_high, double dt, std::uint64_t seed = 1) {
  GaussianConfig c;
  c.n_osc = n;
  c.coupling_low = g_low;
  c.coupling_high = g_high;
  c.dt = dt;
  c.seed = seed;
  return c;
}

// Hamilton's equations for two spring-coupled oscillators, written out in the
// original quadratures (x, p) and converted to vacuum units.
Matrix pair_generator(double omega0, double g) {
  Matrix a = Matrix::Zero(4, 4);
  a(0, 2) = a(1, 3) = 1.0;  // dx/dt = p
  a(2, 0) = -(omega0 * omega0 + g);
  a(2, 1) = g;
  a(3, 1) = -(omega0 * omega0 + g);
  a(3, 0) = g;
  const double r = std::sqrt(omega0);
  const Vector d = (Vector(4) << r, r, 1.0 / r, 1.0 / r).finished();
  return d.asDiagonal() * a * d.cwiseInverse().asDiagonal();
}

}  // namespace

TEST_CASE("squeezed vacuum covariance") {
  CHECK((squeezed_vacuum(0.0, 0.3).cov - Matrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 1e-15);
  const Matrix v = squeezed_vacuum(1.0, 0.0).cov;
  CHECK(v(0, 0) == doctest::Approx(0.5 * std::exp(-2.0)));
  CHECK(v(1, 1) == doctest::Approx(0.5 * std::exp(2.0)));
  CHECK(v.determinant() == doctest::Approx(0.25));
  CHECK(squeezed_vacuum(0.8, 0.4).uncertainty_min_eigenvalue() > -1e-12);
  CHECK(squeezed_covariance(0.5, 0.2).determinant() == doctest::Approx(0.25));
}

TEST_CASE("oscillator propagator") {
  SUBCASE("uncoupled oscillators rotate at omega0") {
    const GaussianConfig c = network_config(3, 0.0, 0.0, 7.0);
    const SymplecticPropagator s = build_oscillator_network(c);
    const double w = c.omega0;
    for (Index i = 0; i < 3; ++i) {
      CHECK(s.matrix()(i, i) == doctest::Approx(std::cos(w * 7.0)).epsilon(1e-12));
      CHECK(s.matrix()(i, 3 + i) == doctest::Approx(std::sin(w * 7.0)).epsilon(1e-12));
      CHECK(s.matrix()(3 + i, i) == doctest::Approx(-std::sin(w * 7.0)).epsilon(1e-12));
      CHECK(s.matrix()(3 + i, 3 + i) == doctest::Approx(std::cos(w * 7.0)).epsilon(1e-12));
    }
  }
  SUBCASE("dt = 0 gives the identity") {
    const SymplecticPropagator s = build_oscillator_network(network_config(4, 0.0, 0.2, 0.0));
    CHECK((s.matrix() - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("coupled pair matches a Runge-Kutta integration") {
    const GaussianConfig c = network_config(2, 0.1, 0.1, 10.0);
    const SymplecticPropagator s = build_oscillator_network(c);
    CHECK((s.matrix() - oracle::rk4_flow(pair_generator(0.25, 0.1), 10.0, 1e-4)).cwiseAbs().maxCoeff() <
          1e-6);
    const Matrix a = symplectic_form(2) * s.hamiltonian();
    CHECK((a - pair_generator(0.25, 0.1)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(s.symplectic_error() < 1e-12);
  }
  SUBCASE("random network is symplectic") {
    CHECK(build_oscillator_network(network_config(4, 0.0, 0.2, 10.0, 9)).symplectic_error() < 1e-10);
  }
  SUBCASE("negative coupling that breaks stability is rejected") {
    Matrix g = Matrix::Zero(2, 2);
    g(0, 1) = g(1, 0) = -1.0;
    CHECK_THROWS_AS(oscillator_propagator(0.25, g, 1.0), ConfigError);
    CHECK_THROWS_AS(build_oscillator_network(network_config(2, -1.0, -1.0, 1.0)), DomainError);
  }
}

TEST_CASE("covariance evolution") {
  SUBCASE("vacuum features of an uncoupled network stay at 1/2") {
    const SymplecticPropagator s = build_oscillator_network(network_config(4, 0.0, 0.0, 3.0));
    const Vector f = run_qelm_instance(s, squeezed_vacuum(0.0, 0.0));
    CHECK(f.size() == 6);
    CHECK((f.array() - 0.5).abs().maxCoeff() < 1e-14);
  }
  SUBCASE("squeezed input matches the covariance differential equation") {
    const GaussianConfig c = network_config(2, 0.1, 0.1, 5.0);
    const SymplecticPropagator s = build_oscillator_network(c);
    const CovarianceState injected = inject_mode(CovarianceState::vacuum(2), squeezed_vacuum(2.0, 0.0), 0);
    const Matrix reference = oracle::rk4_covariance(pair_generator(0.25, 0.1), injected.cov, 5.0, 1e-4);
    CHECK((evolve(s, injected).cov - reference).cwiseAbs().maxCoeff() < 1e-6);
  }
  SUBCASE("injection discards correlations with the input mode") {
    CovarianceState st = CovarianceState::vacuum(3);
    st.cov(0, 1) = st.cov(1, 0) = 0.2;
    st.cov(0, 4) = st.cov(4, 0) = 0.1;
    const CovarianceState out = inject_mode(st, squeezed_vacuum(0.5, 0.1), 0);
    CHECK(out.cov.row(0).segment(1, 2).isZero(0.0));
    CHECK(out.cov(0, 4) == 0.0);
    CHECK(out.cov(1, 0) == 0.0);
    CHECK_THROWS_AS(inject_mode(st, squeezed_vacuum(0.5, 0.1), 3), DimensionError);
  }
}

TEST_CASE("GaussianReservoir invariants over a long run") {
  GaussianReservoir r(build_oscillator_network(network_config(4, 0.0, 0.2, 10.0, 5)), 0, false);
  Rng rng(5);
  double worst = 0.0;
  double asym = 0.0;
  for (int k = 0; k < 1000; ++k) {
    r.step(rng.uniform());
    worst = std::min(worst, r.state().uncertainty_min_eigenvalue());
    asym = std::max(asym, (r.state().cov - r.state().cov.transpose()).cwiseAbs().maxCoeff());
  }
  CHECK(worst > -1e-9);
  CHECK(asym < 1e-9);
  CHECK(r.features().size() == 6);
}

TEST_CASE("select_dt") {
  const GaussianConfig base = network_config(4, 0.0, 0.2, 10.0, 17);
  DtSelectionOptions opts;
  opts.seed = 17;
  const std::array<double, 4> candidates{1.0, 5.0, 10.0, 20.0};
  const double chosen = select_dt(base, candidates, opts);
  CHECK(std::find(candidates.begin(), candidates.end(), chosen) != candidates.end());
  CHECK(select_dt(base, candidates, opts) == chosen);
  const std::array<double, 1> single{3.0};
  CHECK(select_dt(base, single, opts) == 3.0);
  CHECK_THROWS_AS(select_dt(base, std::span<const double>(), opts), DomainError);
}
