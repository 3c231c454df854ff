#pragma once

// Quantum discord, diagonal discord and discord for local metrology (nats).

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "thermoqfi/metrology.hpp"

namespace thermoqfi {

/// How a degenerate reduced state (or a vanishing SLD) picks its basis.
///  minimize:  optimize the conditional entropy inside the degenerate space.
///  canonical: use the canonical resolution (computational-basis projection).
enum class DegeneracyPolicy { minimize, canonical };

enum class DiscordVariant { full, diagonal, local_metrology };

std::string to_string(DegeneracyPolicy p);
std::string to_string(DiscordVariant v);
DegeneracyPolicy parse_degeneracy_policy(const std::string& s);

struct OptimizerReport {
  int restarts = 0;
  int evaluations = 0;
  double best = 0.0;   // best objective (minus averaged conditional deficit)
  double worst = 0.0;  // worst converged restart
  double gap = 0.0;    // second-best distinct minimum minus best
};

struct DiscordOptions {
  std::uint64_t seed = 42;
  int restarts = 24;
  int max_iterations = 500;
  DegeneracyPolicy policy = DegeneracyPolicy::minimize;
  int measured = 0;                 // factor playing the role of A
  std::vector<Matrix> warm_starts;  // extra starting bases for the full minimizer
};

struct DiscordResult {
  double value = 0.0;
  MeasurementBasis basis;
  DiscordVariant variant = DiscordVariant::full;
  OptimizerReport report;
  double canonical_value = std::numeric_limits<double>::quiet_NaN();
  bool fallback = false;              // local metrology fell back to the full minimum
  bool possible_upper_bound = false;  // optimal bases form a continuum, only a sample was searched
};

/// sum_j p_j S(rho_{B|j}); outcomes below 1e-12 contribute nothing.
double conditional_entropy(const HermOp& rho, const MeasurementBasis& basis);

/// -S_AB + S_A + S_{B|basis}, evaluated through entropy deficits.
double discord_for_basis(const HermOp& rho, const MeasurementBasis& basis);

/// Multistart BFGS over U(d_A) with d_A <= 4 (ResourceError otherwise).
DiscordResult quantum_discord(const HermOp& rho, const DiscordOptions& options = {});

/// Discord in the eigenbasis of rho_A, degeneracies handled by the policy.
DiscordResult diagonal_discord(const HermOp& rho, const DiscordOptions& options = {});

/// Discord minimized over the local bases that saturate the local QFI.
DiscordResult discord_for_local_metrology(const StateJet& jet, const DiscordOptions& options = {});
DiscordResult discord_for_local_metrology(const StateFamily& family, double xi0, const DiscordOptions& options = {});

/// Sum over the measurement chain of outcome-averaged local-metrology
/// discords sigma_k -> sigma_{k+1:N}, conditioned on earlier outcomes.
double chain_discord(const StateJet& jet, const std::vector<int>& order, const DiscordOptions& options = {});

}  // namespace thermoqfi
