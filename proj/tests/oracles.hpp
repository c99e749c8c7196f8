#pragma once

// Reference computations for the tests. Each one takes a different route
// from the library code it checks: explicit operator matrices, series
// expansions, fixed-step integrators and index-by-index loops.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

inline CMatrix pauli(char which) {
  CMatrix p(2, 2);
  switch (which) {
    case 'X': p << 0, 1, 1, 0; break;
    case 'Y': p << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 'Z': p << 1, 0, 0, -1; break;
    default: p = CMatrix::Identity(2, 2);
  }
  return p;
}

inline CMatrix kron_product(const CMatrix& a, const CMatrix& b) {
  CMatrix out = CMatrix::Zero(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Operator acting as `ops[q]` on qubit q (identity where ops[q] == 'I').
inline CMatrix pauli_string(const std::vector<char>& ops) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (char c : ops) out = kron_product(out, pauli(c));
  return out;
}

inline CMatrix single_site(int n, int q, char which) {
  std::vector<char> ops(static_cast<std::size_t>(n), 'I');
  ops[static_cast<std::size_t>(q)] = which;
  return pauli_string(ops);
}

inline CMatrix ising_hamiltonian(const RMatrix& couplings, double field) {
  const int n = static_cast<int>(couplings.rows());
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMatrix h = CMatrix::Zero(dim, dim);
  for (int i = 0; i < n; ++i) {
    h += field * single_site(n, i, 'Z');
    for (int j = i + 1; j < n; ++j)
      h += couplings(i, j) * single_site(n, i, 'X') * single_site(n, j, 'X');
  }
  return h;
}

/// exp(-i H t) by its Taylor series.
inline CMatrix taylor_propagator(const CMatrix& h, double t, int terms = 40) {
  const Eigen::Index dim = h.rows();
  CMatrix sum = CMatrix::Identity(dim, dim);
  CMatrix term = CMatrix::Identity(dim, dim);
  for (int k = 1; k < terms; ++k) {
    term = term * (Complex(0, -t) * h) / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

/// Tr over the first qubit by explicit index loops.
inline CMatrix trace_first_qubit(const CMatrix& rho) {
  const Eigen::Index half = rho.rows() / 2;
  CMatrix out = CMatrix::Zero(half, half);
  for (Eigen::Index a = 0; a < 2; ++a)
    for (Eigen::Index i = 0; i < half; ++i)
      for (Eigen::Index j = 0; j < half; ++j) out(i, j) += rho(a * half + i, a * half + j);
  return out;
}

/// Tr over every qubit except the first.
inline CMatrix trace_rest(const CMatrix& rho) {
  const Eigen::Index half = rho.rows() / 2;
  CMatrix out = CMatrix::Zero(2, 2);
  for (Eigen::Index a = 0; a < 2; ++a)
    for (Eigen::Index b = 0; b < 2; ++b)
      for (Eigen::Index i = 0; i < half; ++i) out(a, b) += rho(a * half + i, b * half + i);
  return out;
}

/// Fourth-order Runge-Kutta for dq/dt = A q, applied to each basis vector.
inline RMatrix rk4_flow(const RMatrix& a, double t, double step) {
  const Eigen::Index n = a.rows();
  const int steps = static_cast<int>(std::llround(t / step));
  const double h = t / steps;
  RMatrix q = RMatrix::Identity(n, n);
  for (int s = 0; s < steps; ++s) {
    const RMatrix k1 = a * q;
    const RMatrix k2 = a * (q + 0.5 * h * k1);
    const RMatrix k3 = a * (q + 0.5 * h * k2);
    const RMatrix k4 = a * (q + h * k3);
    q += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return q;
}

/// Fourth-order Runge-Kutta for the covariance equation dV/dt = A V + V A^T.
inline RMatrix rk4_covariance(const RMatrix& a, RMatrix v, double t, double step) {
  const int steps = static_cast<int>(std::llround(t / step));
  const double h = t / steps;
  const auto f = [&](const RMatrix& x) -> RMatrix { return a * x + x * a.transpose(); };
  for (int s = 0; s < steps; ++s) {
    const RMatrix k1 = f(v);
    const RMatrix k2 = f(v + 0.5 * h * k1);
    const RMatrix k3 = f(v + 0.5 * h * k2);
    const RMatrix k4 = f(v + h * k3);
    v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return v;
}

}  // namespace oracle
