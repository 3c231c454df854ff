#pragma once

// Parametrized Hamiltonian families H(lambda) with generators dH/dlambda.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thermoqfi/linops.hpp"

namespace thermoqfi {

namespace pauli {
// X=[[0,1],[1,0]], Y=[[0,-i],[i,0]], Z=[[1,0],[0,-1]].
HermOp x();
HermOp y();
HermOp z();
HermOp identity();
/// Tensor product of single-qubit Paulis, e.g. "XIZ"; the first letter is qubit 0.
HermOp string(std::string_view letters);
}  // namespace pauli

/// H = (b1/2) Z_A + (b2/2) Z_B + (jx/2) X_A X_B + (jy/2) Y_A Y_B + (jz/2) Z_A Z_B.
HermOp heisenberg_two_qubit(double b1, double b2, double jx, double jy, double jz);

struct HamiltonianFamily {
  std::string label;
  std::function<HermOp(double)> build;
  std::function<HermOp(double)> generator;         // dH/dlambda
  std::function<HermOp(double)> second_generator;  // d^2H/dlambda^2
  bool linear = false;                             // second_generator is exactly zero
};

/// Central difference of build at lambda with step 1e-5 (1 + |lambda|).
HermOp finite_difference_generator(const std::function<HermOp(double)>& build, double lambda);
HermOp finite_difference_second_generator(const std::function<HermOp(double)>& build, double lambda);

/// jx = jy = J is the parameter; generator (XX + YY)/2.
HamiltonianFamily family_coupling_J(double b1, double b2, double jz);

/// b1 = b2 = B is the parameter; generator (Z_A + Z_B)/2. This is the
/// lambda H_A + lambda H_B + H_AB single-body coupling form.
HamiltonianFamily family_field_B(double jx, double jy, double jz);

struct FamilyTerm {
  HermOp op;
  std::function<double(double)> coefficient;
  std::function<double(double)> derivative;         // optional
  std::function<double(double)> second_derivative;  // optional
  bool linear = false;  // coefficient is affine in lambda; requires derivative
};

/// H(lambda) = sum_i c_i(lambda) T_i. Uses analytic c_i' / c_i'' where given
/// and central differences otherwise.
HamiltonianFamily family_custom(std::vector<FamilyTerm> terms, std::string label = "lambda");

/// Coefficient c0 + c1 lambda + c2 lambda^2 with analytic derivatives.
FamilyTerm polynomial_term(HermOp op, double c0, double c1, double c2 = 0.0);

/// Open chain of n qubits: sum_k (b/2) Z_k + sum_bonds (jx XX + jy YY + jz ZZ)/2.
HermOp heisenberg_chain(int n, double b, double jx, double jy, double jz);

}  // namespace thermoqfi
