#include <doctest.h>

#include "support.hpp"
#include "thermoqfi/errors.hpp"
#include "thermoqfi/metrology.hpp"
#include "thermoqfi/thermal.hpp"

using namespace thermoqfi;
using testing::max_diff;
using testing::rel_diff;

namespace {

const HermOp kHeisenberg = heisenberg_two_qubit(0, 0, 0.3, 0.4, 0.2);

StateJet qubit_line(double lambda) {
  RealVector p(2), dp(2);
  p << (1 + lambda) / 2, (1 - lambda) / 2;
  dp << 0.5, -0.5;
  return {HermOp::diagonal(p, {2}), HermOp::diagonal(dp, {2})};
}

double infinite_t_variance(const HermOp& g) {
  const double d = g.dim();
  const double mean = g.trace() / d;
  return g.trace_product(g) / d - mean * mean;
}

}  // namespace

TEST_SUITE("metrology") {

TEST_CASE("Uhlmann fidelity") {
  std::mt19937_64 rng(11);
  const HermOp rho = testing::random_density({2, 2}, rng);
  const HermOp sigma = testing::random_density({2, 2}, rng);
  CHECK(uhlmann_fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(uhlmann_fidelity(rho, sigma) - uhlmann_fidelity(sigma, rho)) < 1e-9);
  CHECK(uhlmann_fidelity(rho, sigma) < 1.0);

  const HermOp up = HermOp::projector(testing::ket({1.0, 0.0}), {2});
  const HermOp down = HermOp::projector(testing::ket({0.0, 1.0}), {2});
  CHECK(uhlmann_fidelity(up, down) < 1e-14);

  RealVector p(2);
  p << 0.7, 0.3;
  const double expected = std::pow(std::sqrt(0.35) + std::sqrt(0.15), 2);
  CHECK(uhlmann_fidelity(HermOp::diagonal(p, {2}), HermOp::identity({2}) / 2.0) ==
        doctest::Approx(expected).epsilon(1e-14));

  RealVector bad(2);
  bad << 1.1, -0.1;
  CHECK_THROWS_AS(uhlmann_fidelity(HermOp::diagonal(bad, {2}), up), DomainError);
  CHECK_THROWS_AS(uhlmann_fidelity(up, rho), ArgumentError);
}

TEST_CASE("SLD quantum Fisher information") {
  CHECK(qfi_sld(HermOp::identity({2}) / 2.0, HermOp::zero({2})).value == 0.0);
  CHECK(qfi_sld(qubit_line(0.0)).value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(qfi_sld(qubit_line(0.5)).value == doctest::Approx(1.0 / (1 - 0.25)).epsilon(1e-14));
  CHECK(qfi_sld(qubit_line(0.0)).method == QfiMethod::sld);

  // Pure-state limit: 4 Var(G) for a rotation generated by G.
  const Eigen::VectorXcd plus = testing::ket({M_SQRT1_2, M_SQRT1_2});
  const HermOp psi = HermOp::projector(plus, {2});
  const HermOp drho = hermitian_part(Complex(0, -0.5) * (pauli::z().matrix() * psi.matrix() - psi.matrix() * pauli::z().matrix()), {2});
  CHECK(qfi_sld(psi, drho).value == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(qfi_sld(HermOp::identity({2}) / 2.0, HermOp::identity({2})), ArgumentError);
  CHECK_THROWS_AS(qfi_sld(HermOp::identity({2}) / 2.0, HermOp::zero({4})), ArgumentError);
}

TEST_CASE("thermometry QFI") {
  CHECK(qfi_thermometry(HermOp::zero({2}), 1.0).value == 0.0);
  const double sech = 1.0 / std::cosh(0.5);
  const double closed = 0.25 * sech * sech;
  CHECK(closed == doctest::Approx(0.196611).epsilon(1e-6));
  CHECK(qfi_thermometry(0.5 * pauli::z(), 1.0).value == doctest::Approx(closed).epsilon(1e-14));
  CHECK(qfi_thermometry(0.5 * pauli::z(), 1.0).method == QfiMethod::thermometry_exact);
  CHECK(qfi_sld(thermal_temperature_family(0.5 * pauli::z()).jet(1.0)).value == doctest::Approx(closed).epsilon(1e-8));
  CHECK_THROWS_AS(qfi_thermometry(pauli::z(), 0.0), ArgumentError);
  for (double t : {1.0, 10.0}) {
    const double c = heat_capacity(kHeisenberg, t) / (t * t);
    CHECK(rel_diff(qfi_thermometry(kHeisenberg, t).value, c) < 1e-14);
  }
}

TEST_CASE("fidelity-curvature QFI") {
  CHECK(std::abs(qfi_fidelity_fd([](double) { return HermOp::identity({2}) / 2.0; }, 0.3).value) < 1e-10);

  const HamiltonianFamily j = family_coupling_J(0, 0, 0.2);
  const StateFamily fam = thermal_lambda_family(j, 5.0);
  const QfiResult fd = qfi_fidelity_fd(fam.state, 0.5);
  CHECK(fd.method == QfiMethod::fidelity_fd);
  CHECK(rel_diff(fd.value, qfi_sld(fam.jet(0.5)).value) < 1e-4);

  const StateFamily therm = thermal_temperature_family(kHeisenberg);
  CHECK(rel_diff(qfi_fidelity_fd(therm.state, 10.0).value, qfi_thermometry(kHeisenberg, 10.0).value) < 1e-5);
}

TEST_CASE("cross-method agreement on random linear families") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    HamiltonianFamily fam;
    const HermOp h0 = testing::random_hermitian({2, 2}, rng);
    const HermOp g = testing::random_hermitian({2, 2}, rng);
    const double t = trial % 2 == 0 ? 3.0 : 10.0;
    fam.build = [=](double l) { return h0 + l * g; };
    fam.generator = [=](double) { return g; };
    const StateFamily sf = thermal_lambda_family(fam, t);
    const double sld = qfi_sld(sf.jet(0.2)).value;
    const double fd = qfi_fidelity_fd(sf.state, 0.2).value;
    CHECK(rel_diff(fd, sld) <= 1e-4);

    // Partial trace cannot increase the QFI.
    const StateJet jet = sf.jet(0.2);
    CHECK(qfi_sld(reduce(jet, {0})).value <= sld + 1e-8);
    CHECK(qfi_sld(reduce(jet, {1})).value <= sld + 1e-8);
  }
}

TEST_CASE("high-temperature QFI approaches the infinite-temperature variance") {
  for (const HamiltonianFamily& fam : {family_coupling_J(0, 0, 0.2), family_field_B(0.3, 0.4, 0.2)}) {
    const double var = infinite_t_variance(fam.generator(0.6));
    double bound = 0.0;
    for (double t = 10.0; t <= 100.0; t *= 1.25) {
      const double gap = std::abs(qfi_sld(thermal_lambda_family(fam, t).jet(0.6)).value * t * t - var);
      if (t == 10.0) bound = gap * t;
      CHECK(gap * t <= 1.25 * bound + 1e-9);
    }
  }
}

TEST_CASE("classical Fisher information") {
  const StateFamily therm = thermal_temperature_family(kHeisenberg);
  const StateJet jet = therm.jet(2.0);
  const std::vector<HermOp> trivial{HermOp::identity({2, 2})};
  CHECK(std::abs(classical_fisher(trivial, jet)) < 1e-30);

  const auto energy = energy_eigenbasis(kHeisenberg);
  CHECK(rel_diff(classical_fisher(energy, jet), qfi_thermometry(kHeisenberg, 2.0).value) < 1e-5);

  const HamiltonianFamily j = family_coupling_J(0, 0, 0.2);
  const StateJet jj = thermal_lambda_family(j, 10.0).jet(0.8);
  CHECK(classical_fisher(energy_eigenbasis(j.build(0.8)), jj) >= (1.0 - 1e-4) * qfi_sld(jj).value);

  SUBCASE("never exceeds the QFI") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
      const HermOp h = testing::random_hermitian({2, 2}, rng);
      const StateJet r = thermal_temperature_family(h).jet(0.8);
      const double q = qfi_sld(r).value;
      MeasurementBasis b{testing::random_unitary(2, rng), trial % 2};
      CHECK(classical_fisher(b, r) <= q * (1.0 + 1e-6));
      const Matrix u = testing::random_unitary(4, rng);
      std::vector<HermOp> povm;
      for (int k = 0; k < 4; ++k) povm.push_back(HermOp::projector(u.col(k), {2, 2}));
      CHECK(classical_fisher(povm, r) <= q * (1.0 + 1e-6));
    }
  }

  SUBCASE("analytic jet and family overloads agree") {
    const MeasurementBasis b = MeasurementBasis::computational(2, 1);
    CHECK(rel_diff(classical_fisher(b, therm, 2.0), classical_fisher(b, jet)) < 1e-8);
  }

  CHECK_THROWS_AS(classical_fisher(MeasurementBasis::computational(2, 2), jet), ArgumentError);
  CHECK_THROWS_AS(classical_fisher(MeasurementBasis::computational(3, 0), jet), ArgumentError);
  const std::vector<HermOp> wrong{HermOp::identity({2})};
  CHECK_THROWS_AS(classical_fisher(wrong, jet), ArgumentError);
}

TEST_CASE("measurement bases") {
  const MeasurementBasis b = MeasurementBasis::computational(3, 1);
  CHECK(b.size() == 3);
  CHECK(b.subsystem == 1);
  HermOp sum = HermOp::zero({3});
  const auto proj = b.projectors();
  for (std::size_t j = 0; j < proj.size(); ++j) {
    sum += proj[j];
    for (std::size_t k = 0; k < proj.size(); ++k) {
      const Matrix pp = proj[j].matrix() * proj[k].matrix();
      CHECK(max_norm(pp - (j == k ? proj[j].matrix() : Matrix::Zero(3, 3))) < 1e-10);
    }
  }
  CHECK(max_diff(sum, HermOp::identity({3})) < 1e-10);

  SUBCASE("canonical resolution is deterministic") {
    std::mt19937_64 rng(14);
    Matrix span(3, 2);
    span << 1, 0, 0, 1, 0, 0;
    const Matrix rotated = span * testing::random_unitary(2, rng);
    const Matrix c = canonical_resolution(rotated);
    CHECK(max_norm(c - span) < 1e-12);

    Matrix diag(2, 1);
    diag << Complex(0, 1), Complex(0, 1);
    const Matrix d = canonical_resolution(diag);
    CHECK(std::abs(d(0, 0) - M_SQRT1_2) < 1e-15);
    CHECK(std::abs(d(1, 0) - M_SQRT1_2) < 1e-15);
  }
}

TEST_CASE("optimal local bases") {
  SUBCASE("diagonal qubit family gives the computational basis") {
    const LocalBasisResult r = optimal_local_basis(thermal_temperature_family(0.5 * pauli::z()), 1.0);
    REQUIRE(!r.candidates.empty());
    // Up to ordering and phases: one unit-modulus entry per column.
    const Matrix& v = r.candidates.front().vectors;
    for (Eigen::Index c = 0; c < 2; ++c) {
      CHECK(v.col(c).cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(v.col(c).cwiseAbs().minCoeff() < 1e-12);
    }
    CHECK_FALSE(r.any_basis_optimal);
  }

  SUBCASE("Heisenberg thermometry reduces to the eigenbasis of rho_A") {
    const StateJet jet = thermal_temperature_family(heisenberg_two_qubit(0.4, 0.1, 0.3, 0.4, 0.2)).jet(3.0);
    const StateJet local = reduce(jet, {0});
    const LocalBasisResult r = optimal_local_basis(local, 0);
    const Matrix rho_a = local.rho.matrix();
    for (const MeasurementBasis& b : r.candidates) {
      const Matrix in_basis = b.vectors.adjoint() * rho_a * b.vectors;
      CHECK(std::abs(in_basis(0, 1)) < 1e-12);
      CHECK(rel_diff(classical_fisher(b, local), r.local_qfi) <= 1e-4);
    }
  }

  SUBCASE("random families: every candidate saturates the local QFI") {
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 10; ++trial) {
      const HermOp h0 = testing::random_hermitian({2, 2}, rng);
      const HermOp g = testing::random_hermitian({2, 2}, rng);
      HamiltonianFamily fam;
      fam.build = [=](double l) { return h0 + l * g; };
      fam.generator = [=](double) { return g; };
      const StateJet local = reduce(thermal_lambda_family(fam, 2.0).jet(0.1), {trial % 2});
      const LocalBasisResult r = optimal_local_basis(local, trial % 2);
      CHECK(r.candidates.size() <= 8);
      CHECK(rel_diff(r.local_qfi, qfi_sld(local).value) < 1e-12);
      for (MeasurementBasis b : r.candidates) {
        CHECK(b.subsystem == trial % 2);
        b.subsystem = 0;
        CHECK(rel_diff(classical_fisher(b, local), r.local_qfi) <= 1e-4);
      }
    }
  }

  SUBCASE("vanishing derivative: any basis is optimal") {
    const StateJet flat{HermOp::identity({2}) / 2.0, HermOp::zero({2})};
    const LocalBasisResult r = optimal_local_basis(flat, 0);
    CHECK(r.any_basis_optimal);
    CHECK(r.local_qfi == 0.0);
    CHECK(r.candidates.size() == 1);
  }

  SUBCASE("degenerate SLD on a qutrit yields several candidates") {
    // L = diag(0.2, -0.2, -0.2): outcomes 1 and 2 carry the same score.
    RealVector p(3);
    p << 0.5, 0.25, 0.25;
    Matrix d = Matrix::Zero(3, 3);
    d(0, 0) = 0.1;
    d(1, 1) = -0.05;
    d(2, 2) = -0.05;
    const StateJet jet{HermOp::diagonal(p, {3}), HermOp(d, {3})};
    const LocalBasisResult r = optimal_local_basis(jet, 0);
    CHECK(r.degenerate_sld);
    CHECK(r.candidates.size() >= 1);
    for (const MeasurementBasis& b : r.candidates) CHECK(rel_diff(classical_fisher(b, jet), r.local_qfi) < 1e-10);
  }

  CHECK_THROWS_AS(optimal_local_basis(StateJet{HermOp::zero({2}), HermOp::zero({2})}, 0), DomainError);
}

}
