#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "contextlab/hilbert.hpp"
#include "contextlab/random.hpp"
#include "contextlab/scenario.hpp"

using namespace contextlab;
using Catch::Matchers::WithinAbs;

namespace {

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("tensor_product matches the index formula") {
  std::mt19937_64 rng(7);
  const auto a = random_complex_matrix(2, 3, rng);
  const auto b = random_complex_matrix(4, 2, rng);
  const auto k = tensor_product(a, b);
  REQUIRE(k.rows() == 8);
  REQUIRE(k.cols() == 6);
  for (Eigen::Index i = 0; i < 8; ++i) {
    for (Eigen::Index j = 0; j < 6; ++j) {
      CHECK(std::abs(k(i, j) - a(i / 4, j / 2) * b(i % 4, j % 2)) < 1e-15);
    }
  }
  CHECK(max_abs_diff(tensor_product(identity(2), identity(4)), identity(8)) == 0.0);
}

TEST_CASE("projector_from_vector") {
  const auto p = projector_from_vector(StateVector::basis(8, 0));
  CHECK(p(0, 0) == Complex(1, 0));
  CHECK(p.cwiseAbs().sum() == 1.0);

  const auto v = StateVector::from_real({1, 1, 0, 0, 1, 1, 0, 0}, 0.5);
  const auto pv = projector_from_vector(v);
  for (Eigen::Index i : {0, 1, 4, 5}) {
    for (Eigen::Index j : {0, 1, 4, 5}) CHECK_THAT(pv(i, j).real(), WithinAbs(0.25, 1e-15));
  }

  CHECK_THROWS_AS(projector_from_vector(StateVector::from_real({1, 1})), NormalizationError);
}

TEST_CASE("projectors of the scenario vectors are rank-one projectors") {
  for (const auto& s : {kcbs_twin_scenario(), c4_scenario()}) {
    for (const auto& p : s.projectors()) {
      CHECK(max_abs_diff(p * p, p) < 1e-12);
      CHECK(hermiticity_error(p) < 1e-12);
      CHECK_THAT(p.trace().real(), WithinAbs(1.0, 1e-12));
    }
  }
}

TEST_CASE("rotation_unitary") {
  CHECK(max_abs_diff(rotation_unitary(0.0), identity(2)) < 1e-15);
  CHECK(max_abs_diff(rotation_unitary(std::numbers::pi), mat2(0, -1, 1, 0)) < 1e-15);
  const double h = std::sqrt(0.5);
  CHECK(max_abs_diff(rotation_unitary(std::numbers::pi / 2), mat2(h, -h, h, h)) < 1e-15);
}

TEST_CASE("embed_rotation") {
  CHECK(max_abs_diff(embed_rotation(0.0, 0, 3), identity(8)) < 1e-15);

  const auto flipped = StateVector::basis(8, 0).evolved(embed_rotation(std::numbers::pi, 0, 3));
  CHECK(std::abs(flipped[4] - Complex(1, 0)) < 1e-15);

  const auto phi = StateVector::basis(4, 3).evolved(embed_rotation(std::numbers::pi, 0, 2));
  CHECK(std::abs(phi[1] - Complex(-1, 0)) < 1e-15);
  CHECK(std::abs(phi[3]) < 1e-15);

  CHECK_THROWS_AS(embed_rotation(0.1, 3, 3), IndexError);
}

TEST_CASE("embedded rotations are unitary for arbitrary angles") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    const auto u = embed_rotation(angle(rng), static_cast<std::size_t>(trial) % n, n);
    CHECK(max_abs_diff(u.adjoint() * u, identity(std::size_t{1} << n)) < 1e-12);
  }
}

TEST_CASE("expectation values") {
  const auto z = mat2(1, 0, 0, -1);
  CHECK(expectation(DensityOperator::pure(StateVector::basis(2, 0)), z) == 1.0);

  const auto s = kcbs_twin_scenario();
  const auto psi = DensityOperator::pure(StateVector::basis(8, 0));
  CHECK_THAT(expectation(psi, s.projectors()[0]), WithinAbs(0.25, 1e-15));
  CHECK_THAT(expectation(DensityOperator::maximally_mixed(8), s.projectors()[0]), WithinAbs(0.125, 1e-15));

  CHECK_THROWS_AS(expectation(psi, mat2(0, 1, 0, 0)), DimensionError);
  ComplexMatrix non_herm = identity(8);
  non_herm(0, 1) = 1.0;
  CHECK_THROWS_AS(expectation(psi, non_herm), HermiticityError);
}

TEST_CASE("expectation is linear in the observable") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> coef;
  for (int trial = 0; trial < 50; ++trial) {
    const auto rho = random_density_operator(8, rng);
    const auto a = random_hermitian(8, rng);
    const auto b = random_hermitian(8, rng);
    const double x = coef(rng), y = coef(rng);
    const double lhs = expectation(rho, x * a + y * b);
    CHECK_THAT(lhs, WithinAbs(x * expectation(rho, a) + y * expectation(rho, b), 1e-10));
  }
}

TEST_CASE("density operator validation") {
  CHECK_THROWS_AS(DensityOperator(identity(4)), NormalizationError);
  ComplexMatrix m = identity(2) / 2.0;
  m(0, 1) = 0.3;
  CHECK_THROWS_AS(DensityOperator(m), HermiticityError);
  CHECK_THROWS_AS(DensityOperator(mat2(1.5, 0, 0, -0.5)), Error);
  CHECK_THROWS_AS(DensityOperator(ComplexMatrix(2, 3)), DimensionError);
  CHECK_NOTHROW(DensityOperator::maximally_mixed(4));
}

TEST_CASE("fidelity") {
  const auto zero = DensityOperator::pure(StateVector::basis(2, 0));
  const auto one = DensityOperator::pure(StateVector::basis(2, 1));
  const auto mixed = DensityOperator::maximally_mixed(2);
  CHECK_THAT(fidelity(zero, zero), WithinAbs(1.0, 1e-15));
  CHECK_THAT(fidelity(zero, one), WithinAbs(0.0, 1e-15));
  CHECK_THAT(fidelity(zero, mixed), WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
  CHECK_THROWS_AS(fidelity(zero, DensityOperator::maximally_mixed(4)), DimensionError);
}

TEST_CASE("fidelity is symmetric and bounded") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_density_operator(4, rng);
    const auto b = random_density_operator(4, rng);
    const double f = fidelity(a, b);
    CHECK_THAT(f, WithinAbs(fidelity(b, a), 1e-12));
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK_THAT(fidelity(a, a), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("pure state fidelity equals squared overlap") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = random_pure_state(8, rng);
    const auto v = random_pure_state(8, rng);
    const double expected = std::norm(u.inner(v));
    CHECK_THAT(fidelity(DensityOperator::pure(u), DensityOperator::pure(v)), WithinAbs(expected, 1e-12));
  }
}

TEST_CASE("evolution preserves density operator validity") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rho = random_density_operator(8, rng);
    const auto out = rho.evolved(embed_rotation(angle(rng), static_cast<std::size_t>(trial % 3), 3));
    CHECK_THAT(out.purity(), WithinAbs(rho.purity(), 1e-12));
  }
}

TEST_CASE("qubit_count") {
  CHECK(qubit_count(1) == 0);
  CHECK(qubit_count(8) == 3);
  CHECK_THROWS_AS(qubit_count(6), DimensionError);
  CHECK_THROWS_AS(qubit_count(0), DimensionError);
}
