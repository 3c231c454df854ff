#include <doctest.h>

#include "support.hpp"
#include "thermoqfi/errors.hpp"
#include "thermoqfi/numdiff.hpp"
#include "thermoqfi/thermal.hpp"

using namespace thermoqfi;
using testing::max_diff;
using testing::rel_diff;

namespace {

const HermOp kHeisenberg = heisenberg_two_qubit(0, 0, 0.3, 0.4, 0.2);

double entropy_at(const HamiltonianFamily& fam, double lambda, double t) {
  return gibbs(fam.build(lambda), t).entropy();
}

std::vector<HamiltonianFamily> example_families() {
  return {family_coupling_J(0.0, 0.0, 0.2), family_coupling_J(0.3, -0.2, 0.5), family_field_B(0.3, 0.4, 0.2)};
}

}  // namespace

TEST_SUITE("thermal") {

TEST_CASE("Gibbs state basics") {
  const GibbsState flat = gibbs(HermOp::zero({2, 3}), 1.7);
  CHECK(max_diff(flat.rho(), HermOp::identity({2, 3}) / 6.0) < 1e-16);
  CHECK(flat.log_partition() == doctest::Approx(std::log(6.0)).epsilon(1e-15));

  const double b = 1.0, t = 2.0;
  const GibbsState q = gibbs(0.5 * b * pauli::z(), t);
  const double z = 2.0 * std::cosh(b / (2 * t));
  CHECK(q.rho().matrix()(0, 0).real() == doctest::Approx(std::exp(-b / (2 * t)) / z).epsilon(1e-15));
  CHECK(q.rho().matrix()(1, 1).real() == doctest::Approx(std::exp(b / (2 * t)) / z).epsilon(1e-15));
  CHECK(q.log_partition() == doctest::Approx(std::log(z)).epsilon(1e-15));

  const GibbsState hot = gibbs(kHeisenberg, 1e8);
  CHECK(frobenius_norm(hot.rho().matrix() - Matrix::Identity(4, 4) / 4.0) <= 1e-7);

  CHECK_THROWS_AS(gibbs(kHeisenberg, 0.0), ArgumentError);
  CHECK_THROWS_AS(gibbs(kHeisenberg, -1.0), ArgumentError);
  CHECK_THROWS_AS(gibbs(kHeisenberg, INFINITY), ArgumentError);
}

TEST_CASE("Gibbs state invariants at low and high temperature") {
  std::mt19937_64 rng(7);
  for (double t : {0.01, 0.3, 5.0, 1e4}) {
    const HermOp h = testing::random_hermitian({2, 2}, rng);
    const GibbsState g = gibbs(h, t);
    CHECK(std::abs(g.rho().trace() - 1.0) < 1e-12);
    CHECK(eig(g.rho()).values(0) >= -1e-12);
    CHECK(frobenius_norm(commutator(g.rho(), h)) <= 1e-10);
    const HermOp direct = matrix_function(h, [&](double e) { return std::exp(-(e - g.hamiltonian_eig().values(0)) / t); });
    CHECK(max_diff(g.rho(), direct / direct.trace()) < 1e-10);
  }
  // Large spectral spread does not overflow.
  const GibbsState cold = gibbs(1e4 * pauli::z(), 1.0);
  CHECK(cold.rho().matrix()(1, 1).real() == doctest::Approx(1.0));
}

TEST_CASE("entropy") {
  CHECK(entropy(testing::bell_phi_plus()) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(entropy(HermOp::identity({3}) / 3.0) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  RealVector p(2);
  p << 0.9, 0.1;
  CHECK(entropy(HermOp::diagonal(p, {2})) == doctest::Approx(0.325083).epsilon(1e-6));

  const double spectrum[] = {0.5 + 1e-7, 0.5 - 1e-7};
  // ln 2 - S = 2e-14 to leading order; no cancellation against ln 2.
  CHECK(entropy_deficit_from_spectrum(spectrum) == doctest::Approx(2e-14).epsilon(1e-8));

  SUBCASE("nondecreasing in temperature") {
    double prev = -1.0;
    for (double t = 0.1; t < 50.0; t *= 1.3) {
      const double s = gibbs(kHeisenberg, t).entropy();
      CHECK(s >= prev - 1e-14);
      CHECK(s <= std::log(4.0) + 1e-15);
      prev = s;
    }
  }
}

TEST_CASE("free energy") {
  CHECK(free_energy(gibbs(HermOp::zero({2, 2}), 3.0)) == doctest::Approx(-3.0 * std::log(4.0)).epsilon(1e-15));
  const double b = 0.8, t = 1.5;
  CHECK(free_energy(gibbs(0.5 * b * pauli::z(), t)) ==
        doctest::Approx(-t * std::log(2.0 * std::cosh(b / (2 * t)))).epsilon(1e-14));
  const double dadt =
      numdiff::first([](double tt) { return free_energy(gibbs(kHeisenberg, tt)); }, 5.0, numdiff::temperature_step(5.0));
  CHECK(std::abs(-dadt - gibbs(kHeisenberg, 5.0).entropy()) < 1e-6);
}

TEST_CASE("heat capacity") {
  CHECK(heat_capacity(HermOp::zero({2}), 1.0) == 0.0);
  const double sech = 1.0 / std::cosh(0.5);
  CHECK(heat_capacity(0.5 * pauli::z(), 1.0) == doctest::Approx(0.25 * sech * sech).epsilon(1e-14));
  CHECK_THROWS_AS(heat_capacity(pauli::z(), 0.0), ArgumentError);
  for (double t : {0.2, 1.0, 5.0, 40.0}) {
    const double c = heat_capacity(kHeisenberg, t);
    CHECK(c >= 0.0);
    const double tds =
        t * numdiff::first([](double tt) { return gibbs(kHeisenberg, tt).entropy(); }, t, numdiff::temperature_step(t));
    CHECK(rel_diff(tds, c) < 1e-5);
  }
}

TEST_CASE("mean generator") {
  const HamiltonianFamily flat = family_field_B(0, 0, 0);
  for (double t : {0.5, 2.0}) {
    CHECK(mean_generator(flat, 0.7, t) == doctest::Approx(-std::tanh(0.7 / (2 * t))).epsilon(1e-14));
  }
  CHECK(std::abs(mean_generator(family_coupling_J(0, 0, 0.2), 0.8, 1e9)) < 1e-9);

  const HamiltonianFamily fam = family_coupling_J(0, 0, 0.2);
  const double t = 3.0;
  const double dlnz = numdiff::first([&](double j) { return gibbs(fam.build(j), t).log_partition(); }, 0.5,
                                     numdiff::parameter_step(0.5));
  CHECK(std::abs(mean_generator(fam, 0.5, t) + t * dlnz) < 1e-6);
}

TEST_CASE("susceptibility") {
  SUBCASE("commuting linear family: fluctuation form is exact") {
    const HamiltonianFamily fam = family_coupling_J(0.2, 0.2, 0.3);
    const Susceptibility chi = susceptibility(fam, 0.5, 2.0);
    CHECK(rel_diff(chi.finite_difference, chi.fluctuation) < 1e-8);
    CHECK(chi.value() == chi.finite_difference);
  }
  SUBCASE("infinite-temperature variance") {
    const HamiltonianFamily fam = family_coupling_J(0, 0, 0.2);
    CHECK(susceptibility(fam, 0.5, 10.0).value() * 10.0 == doctest::Approx(0.5).epsilon(0.02));
    CHECK(susceptibility(fam, 0.5, 1e4).value() * 1e4 == doctest::Approx(0.5).epsilon(1e-4));
  }
  SUBCASE("temperature derivative equals the entropy curvature") {
    for (const HamiltonianFamily& fam : example_families()) {
      const double t = 20.0, l = 0.6;
      const double dchi = numdiff::first([&](double tt) { return susceptibility(fam, l, tt).value(); }, t,
                                         numdiff::temperature_step(t));
      const double d2s =
          numdiff::second([&](double x) { return entropy_at(fam, x, t); }, l, numdiff::parameter_step(l));
      CHECK(rel_diff(dchi, d2s) < 1e-4);
    }
  }
}

TEST_CASE("entropy relation between <G> and S") {
  for (const HamiltonianFamily& fam : example_families()) {
    for (double t : {2.0, 5.0, 20.0}) {
      const double l = 0.6;
      const double dg = numdiff::first([&](double tt) { return mean_generator(fam, l, tt); }, t,
                                       numdiff::temperature_step(t));
      const double ds =
          numdiff::first([&](double x) { return entropy_at(fam, x, t); }, l, numdiff::parameter_step(l));
      CHECK(std::abs(dg + ds) <= 1e-4 * std::abs(ds));
    }
  }
}

TEST_CASE("analytic state derivatives") {
  std::mt19937_64 rng(8);
  const HermOp h0 = testing::random_hermitian({2, 2}, rng);
  const HermOp g = testing::random_hermitian({2, 2}, rng);
  const double t = 1.3;
  auto rho = [&](double l) { return gibbs(h0 + l * g, t).rho().matrix(); };
  const double h = 1e-4;
  const Matrix fd = (-rho(2 * h) + 8.0 * rho(h) - 8.0 * rho(-h) + rho(-2 * h)) / (12.0 * h);
  CHECK(max_norm(gibbs_parameter_derivative(gibbs(h0, t), g).matrix() - fd) < 1e-9);

  auto rho_t = [&](double tt) { return gibbs(h0, tt).rho().matrix(); };
  const Matrix fdt = (-rho_t(t + 2 * h) + 8.0 * rho_t(t + h) - 8.0 * rho_t(t - h) + rho_t(t - 2 * h)) / (12.0 * h);
  CHECK(max_norm(gibbs_temperature_derivative(gibbs(h0, t)).matrix() - fdt) < 1e-9);

  // A degenerate spectrum exercises the confluent divided differences.
  const GibbsState deg = gibbs(heisenberg_two_qubit(0, 0, 1, 1, 1), t);
  CHECK(std::abs(gibbs_parameter_derivative(deg, g).trace()) < 1e-14);
}

}
