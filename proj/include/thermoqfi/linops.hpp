#pragma once

// Dense complex Hermitian operators on tensor-product spaces.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace thermoqfi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<int>;

inline constexpr double kHermiticityTolerance = 1e-10;
inline constexpr double kEigenvalueFloor = 1e-14;
inline constexpr double kDegeneracyTolerance = 1e-9;

/// Hermitian operator together with the dimensions of its tensor factors.
///
/// The constructor checks that the dimensions multiply to the matrix size and
/// that max|M - M^dagger| <= 1e-10 * max|M|. The stored matrix is the exact
/// Hermitian part of the input, so downstream eigensolvers see a Hermitian
/// matrix bit for bit.
class HermOp {
 public:
  HermOp() = default;
  HermOp(Matrix data, Dims dims);
  explicit HermOp(Matrix data);

  static HermOp zero(const Dims& dims);
  static HermOp identity(const Dims& dims);
  static HermOp diagonal(const RealVector& values, const Dims& dims);
  /// Rank-1 projector |v><v| (v is normalized internally).
  static HermOp projector(const Eigen::VectorXcd& v, const Dims& dims);

  const Matrix& matrix() const { return data_; }
  const Dims& dims() const { return dims_; }
  int dim() const { return static_cast<int>(data_.rows()); }
  int subsystems() const { return static_cast<int>(dims_.size()); }

  double trace() const { return data_.trace().real(); }
  /// Re Tr[this * other]; both Hermitian so the product trace is real.
  double trace_product(const HermOp& other) const;

  HermOp& operator+=(const HermOp& other);
  HermOp& operator-=(const HermOp& other);
  HermOp& operator*=(double s);

  friend HermOp operator+(HermOp a, const HermOp& b) { return a += b; }
  friend HermOp operator-(HermOp a, const HermOp& b) { return a -= b; }
  friend HermOp operator*(double s, HermOp a) { return a *= s; }
  friend HermOp operator*(HermOp a, double s) { return a *= s; }
  friend HermOp operator/(HermOp a, double s) { return a *= 1.0 / s; }

 private:
  struct Unchecked {};
  HermOp(Matrix data, Dims dims, Unchecked);
  friend HermOp hermitian_part(const Matrix& m, const Dims& dims);

  Matrix data_;
  Dims dims_;
};

/// (M + M^dagger)/2 without the Hermiticity check.
HermOp hermitian_part(const Matrix& m, const Dims& dims);

/// U M U^dagger.
HermOp conjugate(const HermOp& m, const Matrix& u);

Matrix commutator(const HermOp& a, const HermOp& b);

double max_norm(const Matrix& m);
double frobenius_norm(const Matrix& m);

int product(const Dims& dims);

struct EigDecomp {
  RealVector values;  // ascending
  Matrix vectors;     // columns are eigenvectors
};

EigDecomp eig(const HermOp& m);
HermOp reconstruct(const EigDecomp& e, const Dims& dims);

HermOp tensor_product(const HermOp& a, const HermOp& b);
HermOp tensor_product(std::span<const HermOp> factors);

/// Operator acting as `local` on factor `subsystem` and identity elsewhere.
HermOp embed_local(const HermOp& local, int subsystem, const Dims& dims);

/// Trace out every factor not listed in `keep`. `keep` must be a nonempty
/// strict subset of the factor indices; the result's factors follow the
/// order of `keep` after sorting.
HermOp partial_trace(const HermOp& m, std::vector<int> keep);

/// Reorder tensor factors: factor i of the result is factor perm[i] of m.
HermOp permute_subsystems(const HermOp& m, std::span<const int> perm);

/// <v|_k M |v>_k as an operator on the remaining factors (k removed from dims).
HermOp contract_subsystem(const HermOp& m, int subsystem, const Eigen::VectorXcd& v);

/// V f(Lambda) V^dagger. Throws DomainError if f is not finite on the spectrum.
HermOp matrix_function(const HermOp& m, const std::function<double(double)>& f);

/// Principal log; every eigenvalue must exceed kEigenvalueFloor.
HermOp matrix_log(const HermOp& m);

/// Square root of a PSD operator; eigenvalues in [-1e-12, 0) are clamped.
HermOp matrix_sqrt(const HermOp& m);

/// d/de exp(scale * (h + e*dh)) at e = 0 (Daleckii-Krein divided differences).
HermOp exp_directional_derivative(const HermOp& h, const HermOp& dh, double scale);

/// Divided differences (exp(s a_j) - exp(s a_k)) / (a_j - a_k) with the
/// confluent limit where |a_j - a_k| < 1e-9 (1 + spectral radius).
Eigen::MatrixXd exp_divided_differences(const RealVector& values, double scale);

}  // namespace thermoqfi
