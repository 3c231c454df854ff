#include "thermoqfi/metrology.hpp"

#include <algorithm>
#include <cmath>

#include "thermoqfi/errors.hpp"
#include "thermoqfi/thermal.hpp"

namespace thermoqfi {

namespace {

using LongComplex = std::complex<long double>;
using LongMatrix = Eigen::Matrix<LongComplex, Eigen::Dynamic, Eigen::Dynamic>;
using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

constexpr double kOutcomeFloor = 1e-12;
constexpr double kSldPairFloor = 1e-12;
constexpr double kTraceTolerance = 1e-9;
constexpr double kPsdTolerance = 1e-9;
constexpr double kSldDegeneracy = 1e-8;
constexpr double kStateDegeneracy = 1e-12;
constexpr double kVanishingSld = 1e-10;
constexpr std::size_t kMaxCandidates = 8;

LongMatrix to_long(const HermOp& m) {
  LongMatrix out = m.matrix().cast<LongComplex>();
  const LongComplex tr = out.trace();
  return out / tr.real();
}

LongMatrix long_sqrt_psd(const LongMatrix& m) {
  Eigen::SelfAdjointEigenSolver<LongMatrix> solver(m);
  if (solver.info() != Eigen::Success) throw NumericalError("fidelity: eigensolver failed");
  LongVector values = solver.eigenvalues();
  if (values.minCoeff() < -static_cast<long double>(kPsdTolerance)) {
    throw DomainError("fidelity: argument is not positive semidefinite");
  }
  for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = std::sqrt(std::max(values(i), 0.0L));
  const LongMatrix& v = solver.eigenvectors();
  return v * values.cast<LongComplex>().asDiagonal() * v.adjoint();
}

long double fidelity_long(const HermOp& rho, const HermOp& sigma) {
  if (rho.dim() != sigma.dim()) throw ArgumentError("fidelity: dimension mismatch");
  const LongMatrix root = long_sqrt_psd(to_long(rho));
  LongMatrix inner = root * to_long(sigma) * root;
  inner = (0.5L * (inner + inner.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<LongMatrix> solver(inner, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("fidelity: eigensolver failed");
  long double acc = 0.0L;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    acc += std::sqrt(std::max(solver.eigenvalues()(i), 0.0L));
  }
  return acc * acc;
}

void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-8) {
      v *= std::conj(v(i)) / mag;
      return;
    }
  }
}

// Groups of consecutive (ascending) values closer than tol.
std::vector<std::pair<int, int>> clusters(const RealVector& values, double tol) {
  std::vector<std::pair<int, int>> out;
  int start = 0;
  for (int i = 1; i <= values.size(); ++i) {
    if (i == values.size() || values(i) - values(i - 1) > tol) {
      out.emplace_back(start, i - start);
      start = i;
    }
  }
  return out;
}

bool same_basis(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) return false;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    bool found = false;
    for (Eigen::Index k = 0; k < b.cols() && !found; ++k) {
      found = std::abs(a.col(j).dot(b.col(k))) > 1.0 - 1e-10;
    }
    if (!found) return false;
  }
  return true;
}

void add_candidate(std::vector<MeasurementBasis>& out, Matrix vectors, int subsystem) {
  for (const auto& c : out) {
    if (same_basis(c.vectors, vectors)) return;
  }
  if (out.size() < kMaxCandidates) out.push_back({std::move(vectors), subsystem});
}

}  // namespace

StateJet StateFamily::jet(double xi) const {
  if (derivative) return {state(xi), derivative(xi)};
  const double h = 1e-3 * (1.0 + std::abs(xi));
  auto stencil = [&](double s) {
    Matrix m = (-state(xi + 2.0 * s).matrix() + 8.0 * state(xi + s).matrix() - 8.0 * state(xi - s).matrix() +
                state(xi - 2.0 * s).matrix()) /
               (12.0 * s);
    return m;
  };
  const HermOp rho = state(xi);
  const Matrix d = (16.0 * stencil(0.5 * h) - stencil(h)) / 15.0;
  return {rho, hermitian_part(d, rho.dims())};
}

StateFamily thermal_lambda_family(const HamiltonianFamily& fam, double t) {
  if (!(t > 0.0)) throw ArgumentError("temperature must be positive");
  StateFamily f;
  f.state = [fam, t](double lambda) { return gibbs(fam.build(lambda), t).rho(); };
  f.derivative = [fam, t](double lambda) {
    return gibbs_parameter_derivative(gibbs(fam.build(lambda), t), fam.generator(lambda));
  };
  return f;
}

StateFamily thermal_temperature_family(const HermOp& h) {
  StateFamily f;
  f.state = [h](double t) { return gibbs(h, t).rho(); };
  f.derivative = [h](double t) { return gibbs_temperature_derivative(gibbs(h, t)); };
  return f;
}

StateJet reduce(const StateJet& jet, std::vector<int> keep) {
  if (static_cast<int>(keep.size()) == jet.rho.subsystems()) return jet;
  return {partial_trace(jet.rho, keep), partial_trace(jet.drho, keep)};
}

std::string to_string(QfiMethod m) {
  switch (m) {
    case QfiMethod::sld: return "sld";
    case QfiMethod::fidelity_fd: return "fidelity_fd";
    case QfiMethod::thermometry_exact: return "thermometry_exact";
    case QfiMethod::kubo_mori: return "kubo_mori";
  }
  return "unknown";
}

std::vector<HermOp> MeasurementBasis::projectors() const {
  std::vector<HermOp> out;
  const int d = static_cast<int>(vectors.rows());
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) out.push_back(HermOp::projector(vectors.col(j), {d}));
  return out;
}

MeasurementBasis MeasurementBasis::computational(int d, int subsystem) {
  return {Matrix::Identity(d, d), subsystem};
}

double uhlmann_fidelity(const HermOp& rho, const HermOp& sigma) {
  return static_cast<double>(std::clamp(fidelity_long(rho, sigma), 0.0L, 1.0L));
}

QfiResult qfi_sld(const HermOp& rho, const HermOp& drho) {
  if (rho.dim() != drho.dim()) throw ArgumentError("qfi_sld: dimension mismatch");
  if (std::abs(drho.trace()) > kTraceTolerance) throw ArgumentError("qfi_sld: derivative is not traceless");
  const EigDecomp e = eig(rho);
  const Matrix dt = e.vectors.adjoint() * drho.matrix() * e.vectors;
  const Eigen::Index d = dt.rows();
  double acc = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double s = e.values(j) + e.values(k);
      if (s < kSldPairFloor) continue;
      acc += std::norm(dt(j, k)) / s;
    }
  }
  return {2.0 * acc, QfiMethod::sld, frobenius_norm(drho.matrix())};
}

QfiResult qfi_fidelity_fd(const std::function<HermOp(double)>& family, double xi0, double step) {
  const double h = step > 0.0 ? step : 1e-3 * (1.0 + std::abs(xi0));
  const HermOp rho0 = family(xi0);
  auto curvature = [&](double s) {
    const long double up = fidelity_long(rho0, family(xi0 + s));
    const long double down = fidelity_long(rho0, family(xi0 - s));
    return ((up - 1.0L) + (down - 1.0L)) / (static_cast<long double>(s) * s);
  };
  const long double d0 = curvature(h);
  const long double d1 = curvature(0.5 * h);
  const long double d2 = curvature(0.25 * h);
  const long double r0 = (4.0L * d1 - d0) / 3.0L;
  const long double r1 = (4.0L * d2 - d1) / 3.0L;
  const long double r = (16.0L * r1 - r0) / 15.0L;
  double value = static_cast<double>(-2.0L * r);
  if (value < 0.0 && value >= -1e-8) value = 0.0;
  const Matrix diff = (family(xi0 + h).matrix() - family(xi0 - h).matrix()) / (2.0 * h);
  return {value, QfiMethod::fidelity_fd, frobenius_norm(diff)};
}

QfiResult qfi_thermometry(const HermOp& h, double t) {
  if (!(t > 0.0)) throw ArgumentError("qfi_thermometry: temperature must be positive");
  const GibbsState g = gibbs(h, t);
  const double var = std::max(g.energy_variance(), 0.0);
  return {var / (t * t * t * t), QfiMethod::thermometry_exact, frobenius_norm(gibbs_temperature_derivative(g).matrix())};
}

QfiResult qfi_kubo_mori(const HermOp& rho, const HermOp& drho) {
  const EigDecomp e = eig(rho);
  const Matrix dt = e.vectors.adjoint() * drho.matrix() * e.vectors;
  const RealVector& p = e.values;
  double acc = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p(k) < kEigenvalueFloor) continue;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      if (p(j) < kEigenvalueFloor) continue;
      const double r = (p(j) - p(k)) / p(k);
      const double w = std::abs(r) > 1e-8 ? std::log1p(r) / (p(j) - p(k)) : (1.0 - 0.5 * r) / p(k);
      acc += std::norm(dt(j, k)) * w;
    }
  }
  return {acc, QfiMethod::kubo_mori, frobenius_norm(drho.matrix())};
}

double classical_fisher(std::span<const HermOp> projectors, const StateJet& jet) {
  double acc = 0.0;
  for (const HermOp& pi : projectors) {
    if (pi.dim() != jet.rho.dim()) throw ArgumentError("classical_fisher: projector dimension mismatch");
    const double p = pi.trace_product(jet.rho);
    if (p < kOutcomeFloor) continue;
    const double dp = pi.trace_product(jet.drho);
    acc += dp * dp / p;
  }
  return acc;
}

double classical_fisher(const MeasurementBasis& basis, const StateJet& jet) {
  const int n = jet.rho.subsystems();
  if (basis.subsystem < 0 || basis.subsystem >= n) throw ArgumentError("classical_fisher: subsystem out of range");
  const StateJet local = n == 1 ? jet : reduce(jet, {basis.subsystem});
  if (basis.vectors.rows() != local.rho.dim()) throw ArgumentError("classical_fisher: basis dimension mismatch");
  double acc = 0.0;
  for (Eigen::Index j = 0; j < basis.vectors.cols(); ++j) {
    const auto v = basis.vectors.col(j);
    const double p = v.dot(local.rho.matrix() * v).real();
    if (p < kOutcomeFloor) continue;
    const double dp = v.dot(local.drho.matrix() * v).real();
    acc += dp * dp / p;
  }
  return acc;
}

double classical_fisher(const MeasurementBasis& basis, const StateFamily& family, double xi0) {
  return classical_fisher(basis, family.jet(xi0));
}

Matrix canonical_resolution(const Matrix& subspace) {
  const Eigen::Index d = subspace.rows();
  const Eigen::Index m = subspace.cols();
  Matrix out(d, m);
  Eigen::Index found = 0;
  for (Eigen::Index i = 0; i < d && found < m; ++i) {
    Eigen::VectorXcd w = subspace * subspace.row(i).adjoint();
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < found; ++k) w -= out.col(k) * out.col(k).dot(w);
    }
    const double norm = w.norm();
    if (norm < 1e-6) continue;
    w /= norm;
    fix_phase(w);
    out.col(found++) = w;
  }
  if (found < m) throw NumericalError("canonical_resolution: subspace basis is rank deficient");
  return out;
}

Matrix canonical_eigenbasis(const HermOp& h, double tolerance) {
  const EigDecomp e = eig(h);
  Matrix v = e.vectors;
  const double radius = e.values.size() ? e.values.cwiseAbs().maxCoeff() : 0.0;
  for (auto [start, len] : clusters(e.values, tolerance * (1.0 + radius))) {
    if (len > 1) {
      v.middleCols(start, len) = canonical_resolution(v.middleCols(start, len));
    } else {
      fix_phase(v.col(start));
    }
  }
  return v;
}

std::vector<HermOp> energy_eigenbasis(const HermOp& h) {
  const Matrix v = canonical_eigenbasis(h);
  std::vector<HermOp> out;
  for (Eigen::Index j = 0; j < v.cols(); ++j) out.push_back(HermOp::projector(v.col(j), h.dims()));
  return out;
}

LocalBasisResult optimal_local_basis(const StateJet& local, int subsystem) {
  const HermOp& rho = local.rho;
  const EigDecomp e = eig(rho);
  if (e.values.maxCoeff() < kEigenvalueFloor) throw DomainError("optimal_local_basis: state has no support");
  const RealVector& p = e.values;
  const Eigen::Index d = p.size();
  const Matrix dt = e.vectors.adjoint() * local.drho.matrix() * e.vectors;

  Matrix sld = Matrix::Zero(d, d);
  double qfi = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double s = p(j) + p(k);
      if (s < kSldPairFloor) continue;
      sld(j, k) = 2.0 * dt(j, k) / s;
      qfi += 2.0 * std::norm(dt(j, k)) / s;
    }
  }

  LocalBasisResult result;
  result.local_qfi = qfi;
  if (max_norm(sld) <= kVanishingSld) {
    result.any_basis_optimal = true;
    result.degenerate_sld = true;
    result.candidates.push_back({canonical_eigenbasis(rho, kStateDegeneracy), subsystem});
    return result;
  }

  const EigDecomp le = eig(hermitian_part(sld, {static_cast<int>(d)}));
  const Matrix u = e.vectors * le.vectors;
  const double radius = le.values.cwiseAbs().maxCoeff();
  const auto groups = clusters(le.values, kSldDegeneracy * (1.0 + radius));

  Matrix by_state = u;
  Matrix by_canonical = u;
  for (auto [start, len] : groups) {
    if (len == 1) {
      fix_phase(by_state.col(start));
      fix_phase(by_canonical.col(start));
      continue;
    }
    result.degenerate_sld = true;
    const Matrix sub = u.middleCols(start, len);
    const Matrix projected = sub.adjoint() * rho.matrix() * sub;
    const HermOp inner = hermitian_part(projected, {static_cast<int>(len)});
    by_state.middleCols(start, len) = sub * canonical_eigenbasis(inner, kStateDegeneracy);
    by_canonical.middleCols(start, len) = canonical_resolution(sub);
  }
  add_candidate(result.candidates, by_state, subsystem);
  add_candidate(result.candidates, by_canonical, subsystem);
  return result;
}

LocalBasisResult optimal_local_basis(const StateFamily& local, double xi0, int subsystem) {
  return optimal_local_basis(local.jet(xi0), subsystem);
}

}  // namespace thermoqfi
