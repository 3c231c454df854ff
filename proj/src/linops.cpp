#include "thermoqfi/linops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "thermoqfi/errors.hpp"

namespace thermoqfi {

namespace {

void check_dims(const Matrix& m, const Dims& dims) {
  if (m.rows() != m.cols()) {
    throw ArgumentError("HermOp: matrix is not square");
  }
  if (dims.empty()) {
    throw ArgumentError("HermOp: empty dimension list");
  }
  for (int d : dims) {
    if (d < 1) throw ArgumentError("HermOp: subsystem dimension must be positive");
  }
  if (product(dims) != m.rows()) {
    throw ArgumentError("HermOp: product of dims (" + std::to_string(product(dims)) +
                        ") differs from matrix dimension (" + std::to_string(m.rows()) + ")");
  }
}

std::vector<int> strides_of(const Dims& dims) {
  std::vector<int> strides(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) {
    strides[k] = strides[k + 1] * dims[k + 1];
  }
  return strides;
}

}  // namespace

int product(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

double max_norm(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double frobenius_norm(const Matrix& m) { return m.norm(); }

HermOp::HermOp(Matrix data, Dims dims) : data_(std::move(data)), dims_(std::move(dims)) {
  check_dims(data_, dims_);
  const double scale = max_norm(data_);
  const double asym = max_norm(data_ - data_.adjoint());
  if (asym > kHermiticityTolerance * scale) {
    throw ArgumentError("HermOp: matrix is not Hermitian (asymmetry " + std::to_string(asym) + ")");
  }
  Matrix sym = 0.5 * (data_ + data_.adjoint());
  data_ = std::move(sym);
}

HermOp::HermOp(Matrix data) : HermOp(data, Dims{static_cast<int>(data.rows())}) {}

HermOp::HermOp(Matrix data, Dims dims, Unchecked) : data_(std::move(data)), dims_(std::move(dims)) {}

HermOp HermOp::zero(const Dims& dims) {
  const int d = product(dims);
  return HermOp(Matrix::Zero(d, d), dims, Unchecked{});
}

HermOp HermOp::identity(const Dims& dims) {
  const int d = product(dims);
  return HermOp(Matrix::Identity(d, d), dims, Unchecked{});
}

HermOp HermOp::diagonal(const RealVector& values, const Dims& dims) {
  check_dims(Matrix::Zero(values.size(), values.size()), dims);
  return HermOp(values.cast<Complex>().asDiagonal().toDenseMatrix(), dims, Unchecked{});
}

HermOp HermOp::projector(const Eigen::VectorXcd& v, const Dims& dims) {
  const double n = v.norm();
  if (n == 0.0) throw ArgumentError("HermOp::projector: zero vector");
  const Eigen::VectorXcd u = v / n;
  Matrix p = u * u.adjoint();
  check_dims(p, dims);
  return hermitian_part(p, dims);
}

double HermOp::trace_product(const HermOp& other) const {
  // Tr[A B] = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return (data_.array() * other.data_.conjugate().array()).sum().real();
}

HermOp& HermOp::operator+=(const HermOp& other) {
  if (other.dim() != dim()) throw ArgumentError("HermOp: dimension mismatch in +");
  data_ += other.data_;
  return *this;
}

HermOp& HermOp::operator-=(const HermOp& other) {
  if (other.dim() != dim()) throw ArgumentError("HermOp: dimension mismatch in -");
  data_ -= other.data_;
  return *this;
}

HermOp& HermOp::operator*=(double s) {
  data_ *= s;
  return *this;
}

HermOp hermitian_part(const Matrix& m, const Dims& dims) {
  check_dims(m, dims);
  return HermOp(Matrix(0.5 * (m + m.adjoint())), dims, HermOp::Unchecked{});
}

HermOp conjugate(const HermOp& m, const Matrix& u) {
  return hermitian_part(u * m.matrix() * u.adjoint(), m.dims());
}

Matrix commutator(const HermOp& a, const HermOp& b) {
  return a.matrix() * b.matrix() - b.matrix() * a.matrix();
}

EigDecomp eig(const HermOp& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig: Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

HermOp reconstruct(const EigDecomp& e, const Dims& dims) {
  return hermitian_part(e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint(), dims);
}

HermOp tensor_product(const HermOp& a, const HermOp& b) {
  const Matrix& x = a.matrix();
  const Matrix& y = b.matrix();
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return hermitian_part(out, dims);
}

HermOp tensor_product(std::span<const HermOp> factors) {
  if (factors.empty()) throw ArgumentError("tensor_product: no factors");
  HermOp out = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) out = tensor_product(out, factors[k]);
  return out;
}

HermOp embed_local(const HermOp& local, int subsystem, const Dims& dims) {
  if (subsystem < 0 || subsystem >= static_cast<int>(dims.size())) {
    throw ArgumentError("embed_local: subsystem index out of range");
  }
  if (local.dim() != dims[subsystem]) {
    throw ArgumentError("embed_local: operator dimension differs from subsystem dimension");
  }
  std::vector<HermOp> factors;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k) {
    factors.push_back(k == subsystem ? HermOp(local.matrix(), Dims{dims[k]}) : HermOp::identity({dims[k]}));
  }
  return tensor_product(factors);
}

HermOp partial_trace(const HermOp& m, std::vector<int> keep) {
  const Dims& dims = m.dims();
  const int n = static_cast<int>(dims.size());
  std::sort(keep.begin(), keep.end());
  if (keep.empty() || static_cast<int>(keep.size()) >= n ||
      std::adjacent_find(keep.begin(), keep.end()) != keep.end() || keep.front() < 0 || keep.back() >= n) {
    throw ArgumentError("partial_trace: keep must be a nonempty strict subset of subsystem indices");
  }
  std::vector<bool> kept(n, false);
  for (int k : keep) kept[k] = true;

  Dims out_dims;
  for (int k : keep) out_dims.push_back(dims[k]);
  const auto strides = strides_of(dims);

  const int d = m.dim();
  std::vector<int> kept_index(d), traced_index(d);
  for (int i = 0; i < d; ++i) {
    int ki = 0, ti = 0;
    for (int k = 0; k < n; ++k) {
      const int digit = (i / strides[k]) % dims[k];
      if (kept[k]) {
        ki = ki * dims[k] + digit;
      } else {
        ti = ti * dims[k] + digit;
      }
    }
    kept_index[i] = ki;
    traced_index[i] = ti;
  }

  const int dk = product(out_dims);
  Matrix out = Matrix::Zero(dk, dk);
  const Matrix& a = m.matrix();
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      if (traced_index[i] == traced_index[j]) out(kept_index[i], kept_index[j]) += a(i, j);
    }
  }
  return hermitian_part(out, out_dims);
}

HermOp permute_subsystems(const HermOp& m, std::span<const int> perm) {
  const Dims& dims = m.dims();
  const int n = static_cast<int>(dims.size());
  if (static_cast<int>(perm.size()) != n) throw ArgumentError("permute_subsystems: wrong permutation length");
  std::vector<int> seen(n, 0);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p]++) throw ArgumentError("permute_subsystems: not a permutation");
  }
  Dims out_dims(n);
  for (int k = 0; k < n; ++k) out_dims[k] = dims[perm[k]];
  const auto in_strides = strides_of(dims);
  const auto out_strides = strides_of(out_dims);

  const int d = m.dim();
  std::vector<int> map(d);  // out index -> in index
  for (int o = 0; o < d; ++o) {
    int in = 0;
    for (int k = 0; k < n; ++k) {
      const int digit = (o / out_strides[k]) % out_dims[k];
      in += digit * in_strides[perm[k]];
    }
    map[o] = in;
  }
  Matrix out(d, d);
  const Matrix& a = m.matrix();
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) out(i, j) = a(map[i], map[j]);
  }
  return hermitian_part(out, out_dims);
}

HermOp contract_subsystem(const HermOp& m, int subsystem, const Eigen::VectorXcd& v) {
  const Dims& dims = m.dims();
  const int n = static_cast<int>(dims.size());
  if (n < 2) throw ArgumentError("contract_subsystem: need at least two subsystems");
  if (subsystem < 0 || subsystem >= n) throw ArgumentError("contract_subsystem: subsystem index out of range");
  if (v.size() != dims[subsystem]) throw ArgumentError("contract_subsystem: vector dimension mismatch");

  Dims rest;
  for (int k = 0; k < n; ++k) {
    if (k != subsystem) rest.push_back(dims[k]);
  }
  const auto strides = strides_of(dims);
  const int d = m.dim();
  std::vector<int> local(d), other(d);
  for (int i = 0; i < d; ++i) {
    int r = 0;
    for (int k = 0; k < n; ++k) {
      const int digit = (i / strides[k]) % dims[k];
      if (k == subsystem) {
        local[i] = digit;
      } else {
        r = r * dims[k] + digit;
      }
    }
    other[i] = r;
  }
  const int dr = product(rest);
  Matrix out = Matrix::Zero(dr, dr);
  const Matrix& a = m.matrix();
  for (int j = 0; j < d; ++j) {
    const Complex vj = v(local[j]);
    if (vj == Complex(0.0)) continue;
    for (int i = 0; i < d; ++i) {
      out(other[i], other[j]) += std::conj(v(local[i])) * a(i, j) * vj;
    }
  }
  return hermitian_part(out, rest);
}

HermOp matrix_function(const HermOp& m, const std::function<double(double)>& f) {
  const EigDecomp e = eig(m);
  RealVector fv(e.values.size());
  for (Eigen::Index k = 0; k < e.values.size(); ++k) {
    fv(k) = f(e.values(k));
    if (!std::isfinite(fv(k))) {
      throw DomainError("matrix_function: function undefined at eigenvalue " + std::to_string(e.values(k)));
    }
  }
  return reconstruct({fv, e.vectors}, m.dims());
}

HermOp matrix_log(const HermOp& m) {
  return matrix_function(m, [](double x) {
    if (x <= kEigenvalueFloor) return std::numeric_limits<double>::quiet_NaN();
    return std::log(x);
  });
}

HermOp matrix_sqrt(const HermOp& m) {
  return matrix_function(m, [](double x) {
    if (x < -1e-12) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(std::max(x, 0.0));
  });
}

Eigen::MatrixXd exp_divided_differences(const RealVector& values, double scale) {
  const Eigen::Index d = values.size();
  const double radius = d == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
  const double tol = kDegeneracyTolerance * (1.0 + radius);
  Eigen::MatrixXd out(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double gap = values(j) - values(k);
      if (std::abs(gap) < tol) {
        out(j, k) = scale * std::exp(scale * 0.5 * (values(j) + values(k)));
      } else {
        out(j, k) = std::exp(scale * values(k)) * std::expm1(scale * gap) / gap;
      }
    }
  }
  return out;
}

HermOp exp_directional_derivative(const HermOp& h, const HermOp& dh, double scale) {
  if (h.dim() != dh.dim()) throw ArgumentError("exp_directional_derivative: dimension mismatch");
  const EigDecomp e = eig(h);
  const Matrix rotated = e.vectors.adjoint() * dh.matrix() * e.vectors;
  const Eigen::MatrixXd weights = exp_divided_differences(e.values, scale);
  const Matrix inner = rotated.cwiseProduct(weights.cast<Complex>());
  return hermitian_part(e.vectors * inner * e.vectors.adjoint(), h.dims());
}

}  // namespace thermoqfi
