#pragma once

// Gibbs states and equilibrium thermodynamics (k_B = 1).

#include <span>

#include "thermoqfi/hamiltonian.hpp"
#include "thermoqfi/linops.hpp"

namespace thermoqfi {

/// rho = exp(-H/T)/Z, immutable after construction.
///
/// Populations are kept both raw (p_k) and centred (p_k - 1/d). The density
/// matrix is assembled as I/d + V diag(p - 1/d) V^dagger so its deviation
/// from the maximally mixed state keeps full relative precision at high T.
class GibbsState {
 public:
  const HermOp& rho() const { return rho_; }
  const HermOp& hamiltonian() const { return hamiltonian_; }
  const EigDecomp& hamiltonian_eig() const { return eig_; }
  double temperature() const { return temperature_; }
  double log_partition() const { return log_z_; }
  const RealVector& populations() const { return populations_; }
  const RealVector& centred_populations() const { return centred_; }

  double mean_energy() const;
  double energy_variance() const;
  double expectation(const HermOp& op) const;
  double variance(const HermOp& op) const;
  /// ln d - S computed from the centred populations.
  double entropy_deficit() const;
  double entropy() const;

 private:
  friend GibbsState gibbs(const HermOp& h, double t);
  HermOp rho_;
  HermOp hamiltonian_;
  EigDecomp eig_;
  double temperature_ = 0.0;
  double log_z_ = 0.0;
  RealVector populations_;
  RealVector centred_;
};

GibbsState gibbs(const HermOp& h, double t);

/// d rho / d lambda for H(lambda) with generator G at fixed T.
HermOp gibbs_parameter_derivative(const GibbsState& g, const HermOp& generator);
/// d rho / dT at fixed H.
HermOp gibbs_temperature_derivative(const GibbsState& g);

/// Von Neumann entropy in nats (0 ln 0 = 0).
double entropy(const HermOp& rho);

/// ln d - S(rho) = S(rho || I/d). Evaluated term by term as
/// ((1+e) ln(1+e) - e)/d with e = d p - 1, which has no cancellation against
/// ln d; differences of deficits near the maximally mixed state stay accurate.
double entropy_deficit(const HermOp& rho);
double entropy_deficit_from_spectrum(std::span<const double> eigenvalues);

double free_energy(const GibbsState& g);

/// C = (<H^2> - <H>^2) / T^2.
double heat_capacity(const HermOp& h, double t);

/// <G_lambda> = Tr[G_lambda rho_lambda].
double mean_generator(const HamiltonianFamily& fam, double lambda, double t);

struct Susceptibility {
  double finite_difference = 0.0;  // -d<G>/dlambda
  double fluctuation = 0.0;        // var(G)/T - <dG/dlambda>
  double value() const { return finite_difference; }
};

Susceptibility susceptibility(const HamiltonianFamily& fam, double lambda, double t);

}  // namespace thermoqfi
