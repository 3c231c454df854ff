#include "thermoqfi/series.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "thermoqfi/errors.hpp"

namespace thermoqfi {

namespace {

constexpr double kMaxCondition = 1e10;
constexpr double kLimitResidual = 1e-3;

struct RawFit {
  Eigen::VectorXd coefficients;  // in the T^{-n} basis
  double condition = 0.0;
};

RawFit solve(std::span<const Sample> samples, const std::vector<int>& powers, double t_ref) {
  const int rows = static_cast<int>(samples.size());
  const int cols = static_cast<int>(powers.size());
  const int lead = *std::min_element(powers.begin(), powers.end());
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd b(rows);
  for (int i = 0; i < rows; ++i) {
    const double u = t_ref / samples[i].t;
    const double w = std::pow(u, -lead);
    for (int j = 0; j < cols; ++j) a(i, j) = w * std::pow(u, powers[j]);
    b(i) = w * samples[i].value;
  }
  const Eigen::VectorXd norms = a.colwise().norm();
  for (int j = 0; j < cols; ++j) a.col(j) /= norms(j);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  RawFit out;
  out.condition = sv(cols - 1) > 0.0 ? sv(0) / sv(cols - 1) : INFINITY;
  if (!(out.condition <= kMaxCondition)) {
    throw NumericalError("fit_inverse_powers: design matrix condition number " + std::to_string(out.condition));
  }
  const Eigen::VectorXd x = svd.solve(b);
  out.coefficients.resize(cols);
  for (int j = 0; j < cols; ++j) out.coefficients(j) = x(j) / norms(j) * std::pow(t_ref, powers[j]);
  return out;
}

}  // namespace

double InverseSeries::evaluate(double t) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < powers.size(); ++i) acc += coefficients[i] * std::pow(t, -powers[i]);
  return acc;
}

double InverseSeries::coefficient(int n) const {
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (powers[i] == n) return coefficients[i];
  }
  return 0.0;
}

InverseSeries InverseSeries::derivative() const {
  InverseSeries out;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (powers[i] == 0) continue;
    out.powers.push_back(powers[i] + 1);
    out.coefficients.push_back(-powers[i] * coefficients[i]);
  }
  return out;
}

InverseSeries InverseSeries::times_t() const {
  InverseSeries out = *this;
  for (int& n : out.powers) n -= 1;
  return out;
}

InverseSeries InverseSeries::scaled(double s) const {
  InverseSeries out = *this;
  for (double& c : out.coefficients) c *= s;
  return out;
}

SeriesFit fit_inverse_powers(std::span<const Sample> samples, const std::vector<int>& powers) {
  if (powers.empty()) throw ArgumentError("fit_inverse_powers: empty power list");
  if (samples.size() < powers.size() + 2) throw ArgumentError("fit_inverse_powers: need at least #powers + 2 samples");
  std::vector<double> ts;
  for (const Sample& s : samples) {
    if (!(s.t > 0.0)) throw ArgumentError("fit_inverse_powers: temperatures must be positive");
    ts.push_back(s.t);
  }
  std::vector<double> sorted = ts;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ArgumentError("fit_inverse_powers: temperatures must be distinct");
  }
  const double t_ref = sorted.front();

  const RawFit full = solve(samples, powers, t_ref);
  SeriesFit fit;
  fit.series.powers = powers;
  fit.series.coefficients.assign(full.coefficients.data(), full.coefficients.data() + full.coefficients.size());
  fit.condition = full.condition;
  fit.grid = ts;

  double scale = 0.0;
  for (const Sample& s : samples) scale = std::max(scale, std::abs(s.value));
  for (const Sample& s : samples) {
    const double denom = std::max(std::abs(s.value), 1e-12 * scale);
    if (denom > 0.0) fit.residual = std::max(fit.residual, std::abs(s.value - fit.evaluate(s.t)) / denom);
  }

  fit.sensitivity.assign(powers.size(), 0.0);
  if (samples.size() > powers.size() + 2) {
    std::vector<Sample> loo;
    for (std::size_t skip = 0; skip < samples.size(); ++skip) {
      loo.clear();
      for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i != skip) loo.push_back(samples[i]);
      }
      const RawFit partial = solve(loo, powers, t_ref);
      for (std::size_t j = 0; j < powers.size(); ++j) {
        fit.sensitivity[j] = std::max(fit.sensitivity[j], std::abs(partial.coefficients(j) - full.coefficients(j)));
      }
    }
  }
  return fit;
}

ScaledLimit scaled_limit(std::span<const Sample> samples, int power) {
  if (samples.size() < 4) throw ArgumentError("scaled_limit: need at least 4 samples");
  const bool increasing = samples[1].t > samples[0].t;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if ((samples[i].t > samples[i - 1].t) != increasing || samples[i].t == samples[i - 1].t) {
      throw ArgumentError("scaled_limit: temperature grid must be strictly monotone");
    }
  }
  const int n = static_cast<int>(samples.size());
  double t_ref = samples.front().t;
  for (const Sample& s : samples) t_ref = std::min(t_ref, s.t);

  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd g(n);
  for (int i = 0; i < n; ++i) {
    const double u = t_ref / samples[i].t;
    a(i, 0) = 1.0;
    a(i, 1) = u;
    a(i, 2) = u * u;
    g(i) = std::pow(samples[i].t, power) * samples[i].value;
  }
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(g);
  ScaledLimit out;
  out.limit = x(0);
  out.rate = x(1) * t_ref;
  const double scale = g.cwiseAbs().maxCoeff();
  out.residual = scale > 0.0 ? (a * x - g).cwiseAbs().maxCoeff() / scale : 0.0;
  if (out.residual > kLimitResidual) {
    throw DiagnosticError("scaled_limit: sequence does not settle (relative residual " +
                          std::to_string(out.residual) + ")");
  }
  return out;
}

std::vector<double> geometric_grid(double tmin, double tmax, int count) {
  if (!(tmin > 0.0) || !(tmax > tmin) || count < 2) throw ArgumentError("geometric_grid: need 0 < tmin < tmax, count >= 2");
  std::vector<double> out(count);
  const double ratio = std::log(tmax / tmin) / (count - 1);
  for (int i = 0; i < count; ++i) out[i] = tmin * std::exp(ratio * i);
  out.back() = tmax;
  return out;
}

}  // namespace thermoqfi
