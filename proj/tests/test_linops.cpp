#include <doctest.h>

#include "support.hpp"
#include "thermoqfi/errors.hpp"

using namespace thermoqfi;
using testing::max_diff;

TEST_SUITE("linops") {

TEST_CASE("HermOp construction checks shape, dims and hermiticity") {
  CHECK_THROWS_AS(HermOp(Matrix::Zero(2, 3)), ArgumentError);
  CHECK_THROWS_AS(HermOp(Matrix::Zero(4, 4), Dims{2, 3}), ArgumentError);
  CHECK_THROWS_AS(HermOp(Matrix::Zero(4, 4), Dims{}), ArgumentError);
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(HermOp{m}, ArgumentError);
  m(1, 0) = 1.0 + 1e-13;
  const HermOp h(m);
  CHECK(h.matrix() == h.matrix().adjoint());
  CHECK_THROWS_AS(HermOp::projector(Eigen::VectorXcd::Zero(2), {2}), ArgumentError);
}

TEST_CASE("tensor products follow the Kronecker convention") {
  const HermOp i4 = tensor_product(pauli::identity(), pauli::identity());
  CHECK(max_diff(i4, HermOp::identity({2, 2})) == 0.0);
  CHECK(i4.dims() == Dims{2, 2});

  const HermOp zz = tensor_product(pauli::z(), pauli::z());
  RealVector diag(4);
  diag << 1, -1, -1, 1;
  CHECK(max_diff(zz, HermOp::diagonal(diag, {2, 2})) == 0.0);

  const HermOp xx = tensor_product(pauli::x(), pauli::x());
  const Eigen::VectorXcd out = xx.matrix() * testing::ket({1.0, 0.0, 0.0, 0.0});
  CHECK(std::abs(out(3) - 1.0) < 1e-15);
  CHECK(out.head(3).norm() < 1e-15);

  CHECK(max_diff(pauli::string("XZ"), tensor_product(pauli::x(), pauli::z())) == 0.0);
}

TEST_CASE("partial trace") {
  std::mt19937_64 rng(1);
  const HermOp a = testing::random_density({2}, rng);
  const HermOp b = 0.7 * testing::random_density({3}, rng);
  const HermOp ab = tensor_product(a, b);
  CHECK(max_diff(partial_trace(ab, {0}), 0.7 * a) < 1e-14);
  CHECK(max_diff(partial_trace(ab, {1}), b) < 1e-14);

  CHECK(max_diff(partial_trace(testing::bell_phi_plus(), {0}), 0.5 * HermOp::identity({2})) < 1e-15);
  CHECK(max_diff(partial_trace(HermOp::identity({2, 2}) / 4.0, {1}), 0.5 * HermOp::identity({2})) < 1e-15);

  SUBCASE("trace is preserved for every kept factor") {
    const HermOp r = testing::random_density({2, 3, 2}, rng);
    for (int k = 0; k < 3; ++k) {
      const HermOp red = partial_trace(r, {k});
      CHECK(red.dims() == Dims{r.dims()[k]});
      CHECK(std::abs(red.trace() - r.trace()) < 1e-12);
    }
    CHECK(partial_trace(r, {2, 0}).dims() == Dims{2, 2});
  }

  SUBCASE("invalid index sets") {
    const HermOp r = HermOp::identity({2, 2});
    CHECK_THROWS_AS(partial_trace(r, {}), ArgumentError);
    CHECK_THROWS_AS(partial_trace(r, {0, 1}), ArgumentError);
    CHECK_THROWS_AS(partial_trace(r, {2}), ArgumentError);
    CHECK_THROWS_AS(partial_trace(r, {0, 0}), ArgumentError);
  }
}

TEST_CASE("subsystem permutation and contraction") {
  std::mt19937_64 rng(2);
  const HermOp a = testing::random_density({2}, rng);
  const HermOp b = testing::random_density({3}, rng);
  const int swap[] = {1, 0};
  CHECK(max_diff(permute_subsystems(tensor_product(a, b), swap), tensor_product(b, a)) < 1e-15);
  const int bad[] = {0, 0};
  CHECK_THROWS_AS(permute_subsystems(tensor_product(a, b), bad), ArgumentError);

  const Eigen::VectorXcd v = testing::ket({1.0, 0.0});
  const HermOp c = contract_subsystem(tensor_product(a, b), 0, v);
  CHECK(max_diff(c, a.matrix()(0, 0).real() * b) < 1e-15);
  CHECK_THROWS_AS(contract_subsystem(a, 0, v), ArgumentError);
  CHECK_THROWS_AS(contract_subsystem(tensor_product(a, b), 1, v), ArgumentError);

  const HermOp z1 = embed_local(pauli::z(), 1, {2, 2});
  CHECK(max_diff(z1, pauli::string("IZ")) == 0.0);
  CHECK_THROWS_AS(embed_local(pauli::z(), 2, {2, 2}), ArgumentError);
}

TEST_CASE("eigendecomposition") {
  std::mt19937_64 rng(3);
  const HermOp m = testing::random_hermitian({2, 3}, rng);
  const EigDecomp e = eig(m);
  for (int k = 1; k < e.values.size(); ++k) CHECK(e.values(k) >= e.values(k - 1));
  const Matrix id = Matrix::Identity(6, 6);
  CHECK(max_norm(e.vectors.adjoint() * e.vectors - id) < 1e-10);
  const HermOp back = reconstruct(e, m.dims());
  CHECK(frobenius_norm(back.matrix() - m.matrix()) <= 1e-9 * (1.0 + frobenius_norm(m.matrix())));
  CHECK((eig(back).values - e.values).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("spectral functions") {
  CHECK(max_diff(matrix_function(HermOp::zero({3}), [](double x) { return std::exp(x); }), HermOp::identity({3})) <
        1e-15);

  RealVector d(2);
  d << std::exp(1.0), std::exp(2.0);
  RealVector expected(2);
  expected << 1.0, 2.0;
  CHECK(max_diff(matrix_log(HermOp::diagonal(d, {2})), HermOp::diagonal(expected, {2})) < 1e-14);

  std::mt19937_64 rng(4);
  const HermOp rho = testing::random_density({4}, rng);
  const HermOp s = matrix_sqrt(rho);
  CHECK(max_norm(s.matrix() * s.matrix() - rho.matrix()) < 1e-10);

  const HermOp m = testing::random_hermitian({4}, rng);
  CHECK(max_diff(matrix_function(m, [](double x) { return x; }), m) < 1e-10);

  RealVector singular(2);
  singular << 1.0, 0.0;
  CHECK_THROWS_AS(matrix_log(HermOp::diagonal(singular, {2})), DomainError);
  CHECK_THROWS_AS(matrix_function(pauli::z(), [](double x) { return 1.0 / (x + 1.0); }), DomainError);
}

TEST_CASE("derivative of the matrix exponential") {
  std::mt19937_64 rng(5);
  const HermOp h = testing::random_hermitian({4}, rng);
  const HermOp dh = testing::random_hermitian({4}, rng);
  const double s = -0.7;

  CHECK(max_norm(exp_directional_derivative(h, HermOp::zero({4}), s).matrix()) == 0.0);

  SUBCASE("commuting direction") {
    const HermOp e = matrix_function(h, [&](double x) { return std::exp(s * x); });
    const HermOp got = exp_directional_derivative(h, h, s);
    CHECK(max_norm(got.matrix() - s * h.matrix() * e.matrix()) < 1e-12);
  }

  SUBCASE("matches a Richardson-extrapolated central difference") {
    auto expm = [&](double eps) { return matrix_function(h + eps * dh, [&](double x) { return std::exp(s * x); }).matrix(); };
    auto central = [&](double eps) -> Matrix { return (expm(eps) - expm(-eps)) / (2.0 * eps); };
    const Matrix fd = (4.0 * central(0.5e-5) - central(1e-5)) / 3.0;
    const Matrix an = exp_directional_derivative(h, dh, s).matrix();
    CHECK(max_norm(an - fd) <= 1e-7 * max_norm(an));
  }

  SUBCASE("linear in the direction") {
    const HermOp dh2 = testing::random_hermitian({4}, rng);
    const HermOp lhs = exp_directional_derivative(h, 2.0 * dh + (-0.5) * dh2, s);
    const HermOp rhs = 2.0 * exp_directional_derivative(h, dh, s) + (-0.5) * exp_directional_derivative(h, dh2, s);
    CHECK(max_diff(lhs, rhs) < 1e-10);
  }

  SUBCASE("degenerate spectrum uses the confluent limit") {
    RealVector v(3);
    v << 1.0, 1.0, 2.0;
    const Eigen::MatrixXd dd = exp_divided_differences(v, s);
    CHECK(dd(0, 1) == doctest::Approx(s * std::exp(s)).epsilon(1e-14));
    CHECK(dd(0, 2) == doctest::Approx((std::exp(s) - std::exp(2 * s)) / (1.0 - 2.0)).epsilon(1e-14));
  }

  CHECK_THROWS_AS(exp_directional_derivative(h, HermOp::zero({2}), s), ArgumentError);
}

}
