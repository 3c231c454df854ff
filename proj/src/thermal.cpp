#include "thermoqfi/thermal.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "thermoqfi/errors.hpp"
#include "thermoqfi/numdiff.hpp"

namespace thermoqfi {

namespace {

void require_positive_temperature(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ArgumentError("temperature must be positive and finite");
}

// (1+e) ln(1+e) - e, accurate for small |e|.
double deficit_kernel(double e) {
  if (e <= -1.0) return 1.0;
  if (std::abs(e) < 0.1) {
    // sum_{n>=2} (-1)^n e^n / (n (n-1))
    double sum = 0.0;
    double power = e * e;
    for (int n = 2; n < 40; ++n) {
      const double term = power / (n * (n - 1.0));
      sum += (n % 2 == 0) ? term : -term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
      power *= e;
    }
    return sum;
  }
  return (1.0 + e) * std::log1p(e) - e;
}

}  // namespace

GibbsState gibbs(const HermOp& h, double t) {
  require_positive_temperature(t);
  GibbsState g;
  g.hamiltonian_ = h;
  g.temperature_ = t;
  g.eig_ = eig(h);
  const RealVector& e = g.eig_.values;
  const Eigen::Index d = e.size();

  // Shift by the ground energy so every Boltzmann weight is <= 1.
  const double e0 = e.minCoeff();
  RealVector x(d), w(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    x(k) = -(e(k) - e0) / t;
    w(k) = std::exp(x(k));
  }
  const double z = w.sum();
  g.log_z_ = -e0 / t + std::log(z);
  g.populations_ = w / z;

  // p_k - 1/d = (1/(d Z)) sum_l w_l expm1(x_k - x_l)
  g.centred_.resize(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    double acc = 0.0;
    for (Eigen::Index l = 0; l < d; ++l) {
      const double gap = x(k) - x(l);
      acc += std::abs(gap) < 0.5 ? w(l) * std::expm1(gap) : w(k) - w(l);
    }
    g.centred_(k) = acc / (static_cast<double>(d) * z);
  }

  const Matrix& v = g.eig_.vectors;
  Matrix rho = v * g.centred_.cast<Complex>().asDiagonal() * v.adjoint();
  rho.diagonal().array() += 1.0 / static_cast<double>(d);
  g.rho_ = hermitian_part(rho, h.dims());
  return g;
}

double GibbsState::mean_energy() const { return populations_.dot(eig_.values); }

double GibbsState::energy_variance() const {
  const double mean = mean_energy();
  return populations_.dot((eig_.values.array() - mean).square().matrix());
}

double GibbsState::expectation(const HermOp& op) const { return rho_.trace_product(op); }

double GibbsState::variance(const HermOp& op) const {
  const Matrix rotated = eig_.vectors.adjoint() * op.matrix() * eig_.vectors;
  const double mean = populations_.dot(rotated.diagonal().real());
  const Matrix sq = rotated * rotated;
  return populations_.dot(sq.diagonal().real()) - mean * mean;
}

double GibbsState::entropy_deficit() const {
  const double d = static_cast<double>(centred_.size());
  double acc = 0.0;
  for (Eigen::Index k = 0; k < centred_.size(); ++k) {
    const double p = populations_(k);
    acc += p < kEigenvalueFloor ? 1.0 : deficit_kernel(d * centred_(k));
  }
  return acc / d;
}

double GibbsState::entropy() const {
  return std::log(static_cast<double>(centred_.size())) - entropy_deficit();
}

HermOp gibbs_parameter_derivative(const GibbsState& g, const HermOp& generator) {
  const EigDecomp& e = g.hamiltonian_eig();
  const RealVector& p = g.populations();
  const double t = g.temperature();
  const Eigen::Index d = p.size();
  const Matrix rotated = e.vectors.adjoint() * generator.matrix() * e.vectors;
  const double mean_g = p.dot(rotated.diagonal().real());

  const double radius = e.values.cwiseAbs().maxCoeff();
  const double tol = kDegeneracyTolerance * (1.0 + radius);
  Matrix inner(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double gap = e.values(j) - e.values(k);
      double weight;
      if (std::abs(gap) < tol) {
        weight = -std::sqrt(p(j) * p(k)) / t;
      } else {
        weight = p(k) * std::expm1(-gap / t) / gap;  // (p_j - p_k) / (E_j - E_k)
      }
      inner(j, k) = rotated(j, k) * weight;
    }
    inner(k, k) += p(k) * mean_g / t;
  }
  return hermitian_part(e.vectors * inner * e.vectors.adjoint(), g.rho().dims());
}

HermOp gibbs_temperature_derivative(const GibbsState& g) {
  const EigDecomp& e = g.hamiltonian_eig();
  const RealVector& p = g.populations();
  const double t = g.temperature();
  const double mean = g.mean_energy();
  const RealVector dp = (p.array() * (e.values.array() - mean) / (t * t)).matrix();
  return hermitian_part(e.vectors * dp.cast<Complex>().asDiagonal() * e.vectors.adjoint(), g.rho().dims());
}

double entropy_deficit_from_spectrum(std::span<const double> eigenvalues) {
  const double d = static_cast<double>(eigenvalues.size());
  double acc = 0.0;
  for (double p : eigenvalues) {
    acc += p < kEigenvalueFloor ? 1.0 : deficit_kernel(d * p - 1.0);
  }
  return acc / d;
}

double entropy_deficit(const HermOp& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("entropy: eigensolver failed");
  const RealVector& v = solver.eigenvalues();
  return entropy_deficit_from_spectrum(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

double entropy(const HermOp& rho) {
  const double s = std::log(static_cast<double>(rho.dim())) - entropy_deficit(rho);
  return std::max(s, 0.0);
}

double free_energy(const GibbsState& g) { return -g.temperature() * g.log_partition(); }

double heat_capacity(const HermOp& h, double t) {
  require_positive_temperature(t);
  const GibbsState g = gibbs(h, t);
  return std::max(g.energy_variance(), 0.0) / (t * t);
}

double mean_generator(const HamiltonianFamily& fam, double lambda, double t) {
  require_positive_temperature(t);
  return gibbs(fam.build(lambda), t).expectation(fam.generator(lambda));
}

Susceptibility susceptibility(const HamiltonianFamily& fam, double lambda, double t) {
  require_positive_temperature(t);
  Susceptibility chi;
  chi.finite_difference =
      -numdiff::first([&](double l) { return mean_generator(fam, l, t); }, lambda, numdiff::parameter_step(lambda));
  const GibbsState g = gibbs(fam.build(lambda), t);
  chi.fluctuation = g.variance(fam.generator(lambda)) / t - g.expectation(fam.second_generator(lambda));
  return chi;
}

}  // namespace thermoqfi
