#include "thermoqfi/hamiltonian.hpp"

#include <cmath>

#include "thermoqfi/errors.hpp"

namespace thermoqfi {

namespace pauli {

HermOp x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return HermOp(m);
}

HermOp y() {
  Matrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return HermOp(m);
}

HermOp z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return HermOp(m);
}

HermOp identity() { return HermOp::identity({2}); }

HermOp string(std::string_view letters) {
  if (letters.empty()) throw ArgumentError("pauli::string: empty string");
  std::vector<HermOp> factors;
  for (char c : letters) {
    switch (c) {
      case 'I': factors.push_back(identity()); break;
      case 'X': factors.push_back(x()); break;
      case 'Y': factors.push_back(y()); break;
      case 'Z': factors.push_back(z()); break;
      default: throw ArgumentError(std::string("pauli::string: unknown letter '") + c + "'");
    }
  }
  return tensor_product(factors);
}

}  // namespace pauli

HermOp heisenberg_two_qubit(double b1, double b2, double jx, double jy, double jz) {
  return 0.5 * b1 * pauli::string("ZI") + 0.5 * b2 * pauli::string("IZ") + 0.5 * jx * pauli::string("XX") +
         0.5 * jy * pauli::string("YY") + 0.5 * jz * pauli::string("ZZ");
}

HermOp heisenberg_chain(int n, double b, double jx, double jy, double jz) {
  if (n < 1) throw ArgumentError("heisenberg_chain: need at least one site");
  auto site_string = [n](int i, char a, int j, char c) {
    std::string s(n, 'I');
    s[i] = a;
    if (j >= 0) s[j] = c;
    return pauli::string(s);
  };
  HermOp h = HermOp::zero(Dims(n, 2));
  for (int k = 0; k < n; ++k) h += 0.5 * b * site_string(k, 'Z', -1, 'I');
  for (int k = 0; k + 1 < n; ++k) {
    h += 0.5 * jx * site_string(k, 'X', k + 1, 'X');
    h += 0.5 * jy * site_string(k, 'Y', k + 1, 'Y');
    h += 0.5 * jz * site_string(k, 'Z', k + 1, 'Z');
  }
  return h;
}

HermOp finite_difference_generator(const std::function<HermOp(double)>& build, double lambda) {
  const double h = 1e-5 * (1.0 + std::abs(lambda));
  return (build(lambda + h) - build(lambda - h)) / (2.0 * h);
}

HermOp finite_difference_second_generator(const std::function<HermOp(double)>& build, double lambda) {
  const double h = 1e-3 * (1.0 + std::abs(lambda));
  return (build(lambda + h) - 2.0 * build(lambda) + build(lambda - h)) / (h * h);
}

HamiltonianFamily family_coupling_J(double b1, double b2, double jz) {
  HamiltonianFamily f;
  f.label = "J";
  f.build = [=](double j) { return heisenberg_two_qubit(b1, b2, j, j, jz); };
  const HermOp g = 0.5 * (pauli::string("XX") + pauli::string("YY"));
  f.generator = [g](double) { return g; };
  f.second_generator = [](double) { return HermOp::zero({2, 2}); };
  f.linear = true;
  return f;
}

HamiltonianFamily family_field_B(double jx, double jy, double jz) {
  HamiltonianFamily f;
  f.label = "B";
  f.build = [=](double b) { return heisenberg_two_qubit(b, b, jx, jy, jz); };
  const HermOp g = 0.5 * (pauli::string("ZI") + pauli::string("IZ"));
  f.generator = [g](double) { return g; };
  f.second_generator = [](double) { return HermOp::zero({2, 2}); };
  f.linear = true;
  return f;
}

FamilyTerm polynomial_term(HermOp op, double c0, double c1, double c2) {
  FamilyTerm t;
  t.op = std::move(op);
  t.coefficient = [=](double l) { return c0 + c1 * l + c2 * l * l; };
  t.derivative = [=](double l) { return c1 + 2.0 * c2 * l; };
  t.second_derivative = [=](double) { return 2.0 * c2; };
  t.linear = c2 == 0.0;
  return t;
}

HamiltonianFamily family_custom(std::vector<FamilyTerm> terms, std::string label) {
  if (terms.empty()) throw ArgumentError("family_custom: no terms");
  const Dims dims = terms.front().op.dims();
  bool linear = true;
  for (const auto& t : terms) {
    if (t.op.dims() != dims) throw ArgumentError("family_custom: terms have different dimensions");
    if (!t.coefficient) throw ArgumentError("family_custom: term without coefficient function");
    linear = linear && t.linear && t.derivative;
  }

  HamiltonianFamily f;
  f.label = std::move(label);
  f.linear = linear;
  f.build = [terms, dims](double l) {
    HermOp h = HermOp::zero(dims);
    for (const auto& t : terms) h += t.coefficient(l) * t.op;
    return h;
  };
  f.generator = [terms, dims](double l) {
    HermOp g = HermOp::zero(dims);
    for (const auto& t : terms) {
      if (t.derivative) {
        g += t.derivative(l) * t.op;
      } else {
        const double h = 1e-5 * (1.0 + std::abs(l));
        g += ((t.coefficient(l + h) - t.coefficient(l - h)) / (2.0 * h)) * t.op;
      }
    }
    return g;
  };
  f.second_generator = [terms, dims, linear](double l) {
    HermOp g = HermOp::zero(dims);
    if (linear) return g;
    for (const auto& t : terms) {
      if (t.linear) continue;
      if (t.second_derivative) {
        g += t.second_derivative(l) * t.op;
      } else {
        const double h = 1e-3 * (1.0 + std::abs(l));
        g += ((t.coefficient(l + h) - 2.0 * t.coefficient(l) + t.coefficient(l - h)) / (h * h)) * t.op;
      }
    }
    return g;
  };
  return f;
}

}  // namespace thermoqfi
