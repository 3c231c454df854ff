#pragma once

// Model documents: {"model", "params", "estimate", "xi0"}.

#include <map>
#include <optional>
#include <string>

#include "thermoqfi/hamiltonian.hpp"
#include "thermoqfi/metrology.hpp"

namespace thermoqfi {

/// A Hamiltonian family plus the parameter being estimated.
///
/// For thermometry (estimate "T") the estimated parameter is the temperature
/// and `hamiltonian` is fixed; otherwise states are Gibbs states of
/// family.build(xi) at the evaluation temperature.
struct Model {
  std::string kind;      // heisenberg2 | heisenberg_chain | product | custom
  std::string estimate;  // T | J | B | custom
  std::map<std::string, double> params;
  HamiltonianFamily family;
  HermOp hamiltonian;
  double xi0 = 0.0;
  std::string document;  // normalized JSON the model was built from

  bool thermometry() const { return estimate == "T"; }
  bool linear() const { return thermometry() || family.linear; }
  int subsystems() const { return hamiltonian.subsystems(); }
  /// Value of the estimated parameter at temperature t.
  double xi(double t) const { return thermometry() ? t : xi0; }

  HermOp hamiltonian_at(double xi) const;
  /// Gibbs state at (t, xi); for thermometry xi is the temperature and t is ignored.
  HermOp state(double t, double xi) const;
  StateJet jet(double t, double xi) const;
  StateJet jet(double t) const { return jet(t, xi(t)); }
};

/// Parse a model document. Unknown models or estimates raise ArgumentError.
/// Missing params fall back to jx=0.3, jy=0.4, jz=0.2, b1=b2=0, J=0.8, B=0.6.
Model parse_model(const std::string& json_text);
Model load_model(const std::string& path);

/// Two-qubit Heisenberg model with default parameters.
Model default_model(const std::string& estimate);

/// Apply a command-line override of the estimate and/or evaluation point.
Model with_overrides(const Model& m, const std::optional<std::string>& estimate, const std::optional<double>& xi0);

}  // namespace thermoqfi
