#pragma once

// Fidelity, quantum and classical Fisher information, optimal local bases.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "thermoqfi/hamiltonian.hpp"
#include "thermoqfi/linops.hpp"

namespace thermoqfi {

/// A state together with its derivative in the estimated parameter.
struct StateJet {
  HermOp rho;
  HermOp drho;
};

/// xi -> rho(xi), optionally with an analytic derivative.
struct StateFamily {
  std::function<HermOp(double)> state;
  std::function<HermOp(double)> derivative;  // empty: five-point difference

  StateJet jet(double xi) const;
};

/// rho(lambda) = exp(-H(lambda)/T)/Z at fixed T.
StateFamily thermal_lambda_family(const HamiltonianFamily& fam, double t);
/// rho(T) = exp(-H/T)/Z for fixed H.
StateFamily thermal_temperature_family(const HermOp& h);

/// Reduce both members of the jet to the factors in `keep`.
StateJet reduce(const StateJet& jet, std::vector<int> keep);

enum class QfiMethod { sld, fidelity_fd, thermometry_exact, kubo_mori };
std::string to_string(QfiMethod m);

struct QfiResult {
  double value = 0.0;
  QfiMethod method = QfiMethod::sld;
  double drho_norm = 0.0;
};

/// Orthonormal basis (columns of `vectors`) of one tensor factor.
struct MeasurementBasis {
  Matrix vectors;
  int subsystem = 0;

  int size() const { return static_cast<int>(vectors.cols()); }
  /// Local rank-1 projectors |v_j><v_j| on the measured factor.
  std::vector<HermOp> projectors() const;
  static MeasurementBasis computational(int d, int subsystem = 0);
};

/// (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, evaluated in long double with
/// both traces normalized so 1 - F keeps its leading digits.
double uhlmann_fidelity(const HermOp& rho, const HermOp& sigma);

/// 2 sum |<j|drho|k>|^2 / (p_j + p_k) over pairs with p_j + p_k >= 1e-12.
QfiResult qfi_sld(const HermOp& rho, const HermOp& drho);
inline QfiResult qfi_sld(const StateJet& jet) { return qfi_sld(jet.rho, jet.drho); }

/// -2 d^2/de^2 F[rho(xi0), rho(xi0 + e)] by central differences with two
/// Richardson levels. step <= 0 selects 1e-3 (1 + |xi0|).
QfiResult qfi_fidelity_fd(const std::function<HermOp(double)>& family, double xi0, double step = 0.0);

/// C(T)/T^2 = var(H)/T^4.
QfiResult qfi_thermometry(const HermOp& h, double t);

/// Tr[drho d(ln rho)], the Kubo-Mori (Bogoliubov) metric. Diagnostic only.
QfiResult qfi_kubo_mori(const HermOp& rho, const HermOp& drho);

/// sum_j (dp_j)^2 / p_j for full-space projectors, outcomes below 1e-12 skipped.
double classical_fisher(std::span<const HermOp> projectors, const StateJet& jet);
/// Local projective measurement on basis.subsystem of a multipartite state.
double classical_fisher(const MeasurementBasis& basis, const StateJet& jet);
double classical_fisher(const MeasurementBasis& basis, const StateFamily& family, double xi0);

/// Deterministic orthonormal basis of span(columns of `subspace`): computational
/// basis vectors are projected in index order, Gram-Schmidt orthonormalized and
/// phase-fixed so the first significant component is real positive.
Matrix canonical_resolution(const Matrix& subspace);

/// Eigenvectors of h with degenerate eigenspaces canonically resolved.
Matrix canonical_eigenbasis(const HermOp& h, double tolerance = kDegeneracyTolerance);

/// Rank-1 projectors onto the canonical energy eigenbasis of h.
std::vector<HermOp> energy_eigenbasis(const HermOp& h);

struct LocalBasisResult {
  std::vector<MeasurementBasis> candidates;  // at most 8, deduplicated
  double local_qfi = 0.0;
  bool any_basis_optimal = false;  // SLD vanishes: every basis is optimal
  bool degenerate_sld = false;     // optimal bases form a continuum
};

/// Eigenbases of the SLD of the local family. Degenerate SLD eigenspaces are
/// resolved by diagonalizing rho within them (and canonically if rho is
/// degenerate there too); the directly canonical resolution is a second
/// candidate. Throws DomainError if every eigenvalue of rho is below the floor.
LocalBasisResult optimal_local_basis(const StateJet& local, int subsystem = 0);
LocalBasisResult optimal_local_basis(const StateFamily& local, double xi0, int subsystem = 0);

}  // namespace thermoqfi
