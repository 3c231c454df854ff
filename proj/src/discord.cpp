#include "thermoqfi/discord.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "thermoqfi/errors.hpp"
#include "thermoqfi/locc.hpp"
#include "thermoqfi/thermal.hpp"

namespace thermoqfi {

namespace {

constexpr double kOutcomeFloor = 1e-12;
constexpr double kClampSlack = 1e-9;
constexpr double kGradientStep = 1e-5;
constexpr double kStallTolerance = 1e-10;
constexpr int kStallIterations = 3;
constexpr int kMaxMeasuredDim = 4;

// sum_j p_j (ln d_B - S(rho_{B|j})) for the basis given by the columns of u.
double averaged_deficit(const HermOp& rho, int measured, const Matrix& u) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    const HermOp branch = contract_subsystem(rho, measured, u.col(j));
    const double p = branch.trace();
    if (p < kOutcomeFloor) continue;
    acc += p * entropy_deficit(branch / p);
  }
  return acc;
}

double clamp_small_negative(double v) { return (v < 0.0 && v >= -kClampSlack) ? 0.0 : v; }

std::vector<std::pair<int, int>> degenerate_blocks(const RealVector& values, double tol) {
  std::vector<std::pair<int, int>> out;
  int start = 0;
  for (int i = 1; i <= values.size(); ++i) {
    if (i == values.size() || values(i) - values(i - 1) > tol) {
      if (i - start > 1) out.emplace_back(start, i - start);
      start = i;
    }
  }
  return out;
}

// Generalized Gell-Mann matrices of U(m) embedded at offset `start` of a d x d space.
void append_generators(std::vector<Matrix>& out, int d, int start, int m) {
  const Complex i1(0.0, 1.0);
  for (int j = 0; j < m; ++j) {
    for (int k = j + 1; k < m; ++k) {
      Matrix s = Matrix::Zero(d, d);
      s(start + j, start + k) = 1.0;
      s(start + k, start + j) = 1.0;
      out.push_back(s);
      Matrix a = Matrix::Zero(d, d);
      a(start + j, start + k) = -i1;
      a(start + k, start + j) = i1;
      out.push_back(a);
    }
  }
  for (int l = 1; l < m; ++l) {
    Matrix g = Matrix::Zero(d, d);
    const double c = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j) g(start + j, start + j) = c;
    g(start + l, start + l) = -c * l;
    out.push_back(g);
  }
}

Matrix exp_i(const Matrix& k) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(k);
  const Eigen::VectorXcd phases = (Complex(0.0, 1.0) * solver.eigenvalues().cast<Complex>()).array().exp();
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

Matrix haar_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) z(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

struct Minimum {
  double value = 0.0;
  Matrix basis;
  int evaluations = 0;
};

// Minimize -averaged_deficit over U = v0 exp(i sum theta_a G_a) with BFGS,
// central-difference gradients and Armijo backtracking.
Minimum minimize_from(const HermOp& rho, int measured, const Matrix& v0, const std::vector<Matrix>& generators,
                      int max_iterations) {
  const std::size_t n = generators.size();
  Minimum out;
  auto unitary = [&](const Eigen::VectorXd& theta) {
    Matrix k = Matrix::Zero(v0.rows(), v0.cols());
    for (std::size_t a = 0; a < n; ++a) k += theta(static_cast<Eigen::Index>(a)) * generators[a];
    return Matrix(v0 * exp_i(k));
  };
  auto f = [&](const Eigen::VectorXd& theta) {
    ++out.evaluations;
    return -averaged_deficit(rho, measured, unitary(theta));
  };
  auto gradient = [&](const Eigen::VectorXd& theta) {
    Eigen::VectorXd g(n);
    for (std::size_t a = 0; a < n; ++a) {
      Eigen::VectorXd up = theta, down = theta;
      up(a) += kGradientStep;
      down(a) -= kGradientStep;
      g(a) = (f(up) - f(down)) / (2.0 * kGradientStep);
    }
    return g;
  };

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  double fx = f(x);
  if (n == 0) {
    out.value = fx;
    out.basis = v0;
    return out;
  }
  Eigen::VectorXd g = gradient(x);
  Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(n, n);
  int stall = 0;
  for (int it = 0; it < max_iterations && stall < kStallIterations; ++it) {
    Eigen::VectorXd dir = -inv_hessian * g;
    double slope = g.dot(dir);
    if (slope >= 0.0) {
      inv_hessian.setIdentity();
      dir = -g;
      slope = -g.squaredNorm();
    }
    if (slope == 0.0) break;
    double step = 1.0;
    Eigen::VectorXd x_new = x + dir;
    double f_new = f(x_new);
    while (f_new > fx + 1e-4 * step * slope && step > 1e-12) {
      step *= 0.5;
      x_new = x + step * dir;
      f_new = f(x_new);
    }
    if (!(f_new < fx)) {
      ++stall;
      inv_hessian.setIdentity();
      continue;
    }
    stall = (fx - f_new < kStallTolerance * std::abs(fx)) ? stall + 1 : 0;
    const Eigen::VectorXd g_new = gradient(x_new);
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-300) {
      const Eigen::VectorXd hy = inv_hessian * y;
      inv_hessian += ((sy + y.dot(hy)) / (sy * sy)) * (s * s.transpose()) - (hy * s.transpose() + s * hy.transpose()) / sy;
    }
    x = x_new;
    fx = f_new;
    g = g_new;
  }
  out.value = fx;
  out.basis = unitary(x);
  return out;
}

struct MultiStart {
  Minimum best;
  OptimizerReport report;
};

MultiStart multistart(const HermOp& rho, int measured, const std::vector<Matrix>& starts,
                      const std::vector<Matrix>& generators, int max_iterations) {
  std::vector<Minimum> results;
  results.reserve(starts.size());
  for (const Matrix& v0 : starts) results.push_back(minimize_from(rho, measured, v0, generators, max_iterations));

  MultiStart out;
  out.report.restarts = static_cast<int>(results.size());
  std::vector<double> values;
  for (const Minimum& m : results) {
    out.report.evaluations += m.evaluations;
    values.push_back(m.value);
  }
  const auto best = std::min_element(values.begin(), values.end()) - values.begin();
  out.best = results[best];
  std::sort(values.begin(), values.end());
  out.report.best = values.front();
  out.report.worst = values.back();
  const double tol = 1e-9 * (1.0 + std::abs(values.front()));
  const auto second = std::find_if(values.begin(), values.end(), [&](double v) { return v > values.front() + tol; });
  out.report.gap = second == values.end() ? 0.0 : *second - values.front();
  return out;
}

double deficit_offset(const HermOp& rho, int measured) {
  return entropy_deficit(rho) - entropy_deficit(partial_trace(rho, {measured}));
}

void check_measured(const HermOp& rho, int measured) {
  if (rho.subsystems() < 2) throw ArgumentError("discord: need at least two subsystems");
  if (measured < 0 || measured >= rho.subsystems()) throw ArgumentError("discord: measured subsystem out of range");
}

}  // namespace

std::string to_string(DegeneracyPolicy p) { return p == DegeneracyPolicy::minimize ? "minimize" : "canonical"; }

std::string to_string(DiscordVariant v) {
  switch (v) {
    case DiscordVariant::full: return "full";
    case DiscordVariant::diagonal: return "diagonal";
    case DiscordVariant::local_metrology: return "local_metrology";
  }
  return "unknown";
}

DegeneracyPolicy parse_degeneracy_policy(const std::string& s) {
  if (s == "minimize") return DegeneracyPolicy::minimize;
  if (s == "canonical") return DegeneracyPolicy::canonical;
  throw ArgumentError("unknown degeneracy policy: " + s);
}

double conditional_entropy(const HermOp& rho, const MeasurementBasis& basis) {
  double acc = 0.0;
  for (const Outcome& o : measure_subsystem(rho, basis).outcomes) acc += o.probability * entropy(o.state);
  return acc;
}

double discord_for_basis(const HermOp& rho, const MeasurementBasis& basis) {
  check_measured(rho, basis.subsystem);
  if (basis.vectors.rows() != rho.dims()[basis.subsystem]) throw ArgumentError("discord: basis dimension mismatch");
  return clamp_small_negative(deficit_offset(rho, basis.subsystem) -
                              averaged_deficit(rho, basis.subsystem, basis.vectors));
}

DiscordResult quantum_discord(const HermOp& rho, const DiscordOptions& options) {
  check_measured(rho, options.measured);
  const int d = rho.dims()[options.measured];
  if (d > kMaxMeasuredDim) throw ResourceError("quantum_discord: measured subsystem dimension exceeds 4");

  std::vector<Matrix> starts;
  starts.push_back(canonical_eigenbasis(partial_trace(rho, {options.measured})));
  for (const Matrix& w : options.warm_starts) {
    if (w.rows() == d && w.cols() == d) starts.push_back(w);
  }
  std::mt19937_64 rng(options.seed);
  for (int r = 0; r < std::max(options.restarts, 24); ++r) starts.push_back(haar_unitary(d, rng));

  std::vector<Matrix> generators;
  append_generators(generators, d, 0, d);
  const MultiStart ms = multistart(rho, options.measured, starts, generators, options.max_iterations);

  DiscordResult result;
  result.variant = DiscordVariant::full;
  result.basis = {ms.best.basis, options.measured};
  result.report = ms.report;
  result.value = std::max(0.0, clamp_small_negative(deficit_offset(rho, options.measured) + ms.best.value));
  return result;
}

DiscordResult diagonal_discord(const HermOp& rho, const DiscordOptions& options) {
  check_measured(rho, options.measured);
  const HermOp rho_a = partial_trace(rho, {options.measured});
  const EigDecomp e = eig(rho_a);
  const Matrix canonical = canonical_eigenbasis(rho_a);
  const double radius = e.values.cwiseAbs().maxCoeff();
  const auto blocks = degenerate_blocks(e.values, kDegeneracyTolerance * (1.0 + radius));

  DiscordResult result;
  result.variant = DiscordVariant::diagonal;
  result.basis = {canonical, options.measured};
  result.canonical_value = discord_for_basis(rho, result.basis);
  result.value = result.canonical_value;
  if (blocks.empty() || options.policy == DegeneracyPolicy::canonical) return result;

  const int d = rho_a.dim();
  std::vector<Matrix> generators;
  for (auto [start, len] : blocks) append_generators(generators, d, start, len);
  std::vector<Matrix> starts{canonical};
  std::mt19937_64 rng(options.seed);
  for (int r = 0; r < std::max(options.restarts, 24); ++r) {
    Matrix block_u = Matrix::Identity(d, d);
    for (auto [start, len] : blocks) block_u.block(start, start, len, len) = haar_unitary(len, rng);
    starts.push_back(canonical * block_u);
  }
  const MultiStart ms = multistart(rho, options.measured, starts, generators, options.max_iterations);
  result.report = ms.report;
  const double minimized = clamp_small_negative(deficit_offset(rho, options.measured) + ms.best.value);
  if (minimized < result.value) {
    result.value = std::max(0.0, minimized);
    result.basis = {ms.best.basis, options.measured};
  }
  return result;
}

DiscordResult discord_for_local_metrology(const StateJet& jet, const DiscordOptions& options) {
  check_measured(jet.rho, options.measured);
  const LocalBasisResult lb = optimal_local_basis(reduce(jet, {options.measured}), options.measured);

  if (lb.any_basis_optimal && options.policy == DegeneracyPolicy::minimize) {
    DiscordOptions full = options;
    for (const auto& c : lb.candidates) full.warm_starts.push_back(c.vectors);
    DiscordResult result = quantum_discord(jet.rho, full);
    result.variant = DiscordVariant::local_metrology;
    result.fallback = true;
    result.canonical_value = discord_for_basis(jet.rho, lb.candidates.front());
    return result;
  }

  DiscordResult result;
  result.variant = DiscordVariant::local_metrology;
  result.possible_upper_bound = lb.degenerate_sld;
  result.value = std::numeric_limits<double>::infinity();
  for (const MeasurementBasis& basis : lb.candidates) {
    const double v = discord_for_basis(jet.rho, basis);
    if (v < result.value) {
      result.value = v;
      result.basis = basis;
    }
  }
  result.canonical_value = discord_for_basis(jet.rho, lb.candidates.front());
  result.report.restarts = static_cast<int>(lb.candidates.size());
  return result;
}

DiscordResult discord_for_local_metrology(const StateFamily& family, double xi0, const DiscordOptions& options) {
  return discord_for_local_metrology(family.jet(xi0), options);
}

namespace {

double chain_from(const StateJet& jet, const std::vector<int>& remaining, const std::vector<int>& order,
                  std::size_t step, const DiscordOptions& options) {
  if (remaining.size() < 2) return 0.0;
  const int pos =
      static_cast<int>(std::find(remaining.begin(), remaining.end(), order[step]) - remaining.begin());
  DiscordOptions opts = options;
  opts.measured = pos;
  const DiscordResult r = discord_for_local_metrology(jet, opts);
  std::vector<int> rest = remaining;
  rest.erase(rest.begin() + pos);
  double acc = r.value;
  if (rest.size() < 2) return acc;
  for (const BranchJet& b : measure_jet(jet, r.basis)) {
    acc += b.probability * chain_from(b.jet, rest, order, step + 1, options);
  }
  return acc;
}

}  // namespace

double chain_discord(const StateJet& jet, const std::vector<int>& order, const DiscordOptions& options) {
  const int n = jet.rho.subsystems();
  std::vector<int> sorted = order, identity(n);
  std::sort(sorted.begin(), sorted.end());
  for (int k = 0; k < n; ++k) identity[k] = k;
  if (sorted != identity) throw ArgumentError("chain_discord: order must be a permutation of 0..N-1");
  return chain_from(jet, identity, order, 0, options);
}

}  // namespace thermoqfi
