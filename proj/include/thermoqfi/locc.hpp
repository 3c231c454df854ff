#pragma once

// Greedy local measurement protocol and the precision loss it incurs.

#include <cstddef>
#include <vector>

#include "thermoqfi/metrology.hpp"

namespace thermoqfi {

struct Outcome {
  int index = 0;
  double probability = 0.0;
  HermOp state;  // conditional state of the unmeasured factors
};

struct ConditionalEnsemble {
  std::vector<Outcome> outcomes;
  MeasurementBasis basis;
  double dropped_mass = 0.0;  // total probability of outcomes below 1e-12
};

/// Project basis.subsystem onto each basis vector; the remaining factors keep
/// their order. Outcomes with p < 1e-12 are dropped and the rest renormalized.
ConditionalEnsemble measure_subsystem(const HermOp& rho, const MeasurementBasis& basis);

/// Conditional state and its derivative for one outcome, basis held fixed.
struct BranchJet {
  int index = 0;
  double probability = 0.0;
  double dprobability = 0.0;
  StateJet jet;
};

std::vector<BranchJet> measure_jet(const StateJet& jet, const MeasurementBasis& basis);

struct LoccResult {
  double f_ab = 0.0;
  double f_a = 0.0;              // local QFI of the measured factor
  double f_a_classical = 0.0;    // classical Fisher information of basis_used
  double f_b_given_a = 0.0;
  double f_locc = 0.0;
  double delta_f = 0.0;
  MeasurementBasis basis_used;
  int candidates = 0;
};

/// F_{A->B} = F_A + sum_j p_j F_{B|j}, measuring factor `measured` of the jet.
/// Among the optimal local bases the one with the largest F_{A->B} is used.
LoccResult locc_qfi_bipartite(const StateJet& jet, int measured = 0);
LoccResult locc_qfi_bipartite(const StateFamily& family, double xi0, int measured = 0);

/// F_AB - F_{A->B}; values in [-1e-8, 0) are clamped to 0.
double precision_loss(const StateJet& jet, int measured = 0);
double precision_loss(const StateFamily& family, double xi0, int measured = 0);

struct GreedyOptions {
  bool feed_forward = true;        // false: one basis per step from the marginal family
  std::size_t max_histories = 10000;
};

struct GreedyResult {
  std::vector<double> step_qfi;  // averaged F_{sigma_k | sigma_{1:k-1}}
  double total = 0.0;
  double f_full = 0.0;
  double delta_f = 0.0;
  std::size_t histories = 0;
};

/// Sequential measurement of the factors in `order` (a permutation of 0..N-1),
/// N <= 5. Throws ResourceError if the outcome tree exceeds max_histories.
GreedyResult greedy_multipartite(const StateJet& jet, const std::vector<int>& order, const GreedyOptions& options = {});

}  // namespace thermoqfi
