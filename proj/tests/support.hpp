#pragma once

#include <cmath>
#include <random>

#include <doctest.h>

#include "thermoqfi/hamiltonian.hpp"
#include "thermoqfi/linops.hpp"

namespace testing {

using namespace thermoqfi;

inline Matrix random_complex(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = Complex(n(rng), n(rng));
  }
  return m;
}

inline HermOp random_hermitian(const Dims& dims, std::mt19937_64& rng, double scale = 1.0) {
  const Matrix a = random_complex(product(dims), rng);
  return hermitian_part(scale * a, dims);
}

/// Full-rank density matrix from a Ginibre matrix.
inline HermOp random_density(const Dims& dims, std::mt19937_64& rng) {
  const Matrix a = random_complex(product(dims), rng);
  Matrix r = a * a.adjoint();
  r /= r.trace().real();
  return hermitian_part(r, dims);
}

/// Haar-random unitary from the QR of a Ginibre matrix.
inline Matrix random_unitary(int d, std::mt19937_64& rng) {
  const Matrix a = random_complex(d, rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (int k = 0; k < d; ++k) q.col(k) *= std::polar(1.0, std::arg(r(k, k)));
  return q;
}

inline Eigen::VectorXcd ket(std::initializer_list<Complex> amps) {
  Eigen::VectorXcd v(static_cast<int>(amps.size()));
  int i = 0;
  for (Complex a : amps) v(i++) = a;
  return v;
}

inline HermOp bell_phi_plus() {
  return HermOp::projector(ket({1.0, 0.0, 0.0, 1.0}), {2, 2});
}

inline double max_diff(const HermOp& a, const HermOp& b) { return max_norm(a.matrix() - b.matrix()); }

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing
