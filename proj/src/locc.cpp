#include "thermoqfi/locc.hpp"

#include <algorithm>
#include <numeric>

#include "thermoqfi/errors.hpp"

namespace thermoqfi {

namespace {

constexpr double kOutcomeFloor = 1e-12;
constexpr double kLossSlack = 1e-8;
constexpr int kMaxParties = 5;

void check_basis(const HermOp& rho, const MeasurementBasis& basis) {
  if (rho.subsystems() < 2) throw ArgumentError("measurement needs at least two subsystems");
  if (basis.subsystem < 0 || basis.subsystem >= rho.subsystems()) {
    throw ArgumentError("measurement subsystem out of range");
  }
  if (basis.vectors.rows() != rho.dims()[basis.subsystem]) throw ArgumentError("basis dimension mismatch");
}

struct Subtree {
  std::vector<double> steps;
  double sum() const { return std::accumulate(steps.begin(), steps.end(), 0.0); }
};

struct GreedyContext {
  const std::vector<int>& order;
  const GreedyOptions& options;
  std::vector<MeasurementBasis> fixed;  // per step, without feed-forward
};

Subtree greedy_subtree(const StateJet& jet, const std::vector<int>& remaining, std::size_t step,
                       const GreedyContext& ctx) {
  if (remaining.size() == 1) return {{qfi_sld(jet).value}};
  const int target = ctx.order[step];
  const int pos = static_cast<int>(std::find(remaining.begin(), remaining.end(), target) - remaining.begin());
  const StateJet local = reduce(jet, {pos});

  std::vector<MeasurementBasis> candidates;
  double local_f = 0.0;
  if (ctx.options.feed_forward) {
    LocalBasisResult lb = optimal_local_basis(local, pos);
    candidates = std::move(lb.candidates);
    local_f = lb.local_qfi;
  } else {
    MeasurementBasis b = ctx.fixed[step];
    b.subsystem = 0;
    local_f = classical_fisher(b, local);
    b.subsystem = pos;
    candidates.push_back(std::move(b));
  }

  std::vector<int> rest = remaining;
  rest.erase(rest.begin() + pos);

  Subtree best;
  double best_sum = -1.0;
  for (const MeasurementBasis& basis : candidates) {
    std::vector<double> acc(rest.size(), 0.0);
    for (const BranchJet& b : measure_jet(jet, basis)) {
      const Subtree sub = greedy_subtree(b.jet, rest, step + 1, ctx);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += b.probability * sub.steps[i];
    }
    const double s = std::accumulate(acc.begin(), acc.end(), 0.0);
    if (s > best_sum) {
      best_sum = s;
      best.steps = std::move(acc);
    }
  }
  best.steps.insert(best.steps.begin(), local_f);
  return best;
}

}  // namespace

ConditionalEnsemble measure_subsystem(const HermOp& rho, const MeasurementBasis& basis) {
  check_basis(rho, basis);
  ConditionalEnsemble out;
  out.basis = basis;
  for (int j = 0; j < basis.size(); ++j) {
    HermOp branch = contract_subsystem(rho, basis.subsystem, basis.vectors.col(j));
    const double p = branch.trace();
    if (p < kOutcomeFloor) {
      out.dropped_mass += std::max(p, 0.0);
      continue;
    }
    out.outcomes.push_back({j, p, branch / p});
  }
  const double kept = 1.0 - out.dropped_mass;
  if (out.dropped_mass > 0.0) {
    for (Outcome& o : out.outcomes) o.probability /= kept;
  }
  return out;
}

std::vector<BranchJet> measure_jet(const StateJet& jet, const MeasurementBasis& basis) {
  check_basis(jet.rho, basis);
  std::vector<BranchJet> out;
  for (int j = 0; j < basis.size(); ++j) {
    const auto v = basis.vectors.col(j);
    const HermOp r = contract_subsystem(jet.rho, basis.subsystem, v);
    const double p = r.trace();
    if (p < kOutcomeFloor) continue;
    const HermOp dr = contract_subsystem(jet.drho, basis.subsystem, v);
    const double dp = dr.trace();
    const HermOp cond = r / p;
    out.push_back({j, p, dp, {cond, (dr - dp * cond) / p}});
  }
  return out;
}

LoccResult locc_qfi_bipartite(const StateJet& jet, int measured) {
  if (jet.rho.subsystems() < 2) throw ArgumentError("locc_qfi_bipartite: need at least two subsystems");
  LoccResult result;
  result.f_ab = qfi_sld(jet).value;
  const StateJet local = reduce(jet, {measured});
  const LocalBasisResult lb = optimal_local_basis(local, measured);
  result.f_a = lb.local_qfi;
  result.candidates = static_cast<int>(lb.candidates.size());

  double best = -1.0;
  for (const MeasurementBasis& basis : lb.candidates) {
    double conditional = 0.0;
    for (const BranchJet& b : measure_jet(jet, basis)) conditional += b.probability * qfi_sld(b.jet).value;
    if (result.f_a + conditional > best) {
      best = result.f_a + conditional;
      result.f_b_given_a = conditional;
      result.basis_used = basis;
    }
  }
  result.f_a_classical = classical_fisher(MeasurementBasis{result.basis_used.vectors, 0}, local);
  result.f_locc = result.f_a + result.f_b_given_a;
  result.delta_f = result.f_ab - result.f_locc;
  if (result.delta_f < 0.0 && result.delta_f >= -kLossSlack) result.delta_f = 0.0;
  return result;
}

LoccResult locc_qfi_bipartite(const StateFamily& family, double xi0, int measured) {
  return locc_qfi_bipartite(family.jet(xi0), measured);
}

double precision_loss(const StateJet& jet, int measured) { return locc_qfi_bipartite(jet, measured).delta_f; }

double precision_loss(const StateFamily& family, double xi0, int measured) {
  return precision_loss(family.jet(xi0), measured);
}

GreedyResult greedy_multipartite(const StateJet& jet, const std::vector<int>& order, const GreedyOptions& options) {
  const int n = jet.rho.subsystems();
  if (n > kMaxParties) throw ResourceError("greedy_multipartite: at most 5 subsystems are supported");
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  if (sorted != identity) throw ArgumentError("greedy_multipartite: order must be a permutation of 0..N-1");

  std::size_t histories = 1;
  for (int k = 0; k + 1 < n; ++k) {
    histories *= static_cast<std::size_t>(jet.rho.dims()[order[k]]);
    if (histories > options.max_histories) throw ResourceError("greedy_multipartite: too many outcome histories");
  }

  GreedyContext ctx{order, options, {}};
  if (!options.feed_forward) {
    for (int k = 0; k + 1 < n; ++k) {
      ctx.fixed.push_back(optimal_local_basis(reduce(jet, {order[k]}), order[k]).candidates.front());
    }
  }

  GreedyResult result;
  result.histories = histories;
  result.step_qfi = greedy_subtree(jet, identity, 0, ctx).steps;
  result.total = std::accumulate(result.step_qfi.begin(), result.step_qfi.end(), 0.0);
  result.f_full = qfi_sld(jet).value;
  result.delta_f = result.f_full - result.total;
  if (result.delta_f < 0.0 && result.delta_f >= -kLossSlack) result.delta_f = 0.0;
  return result;
}

}  // namespace thermoqfi
