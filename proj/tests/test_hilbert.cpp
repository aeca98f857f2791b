#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "qflab/hilbert.hpp"

using namespace qflab;
using namespace qflab::hilbert;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

TEST_CASE("inner product") {
  CHECK(std::abs(inner_product(qubit_up(), qubit_plus()) - Complex(kInvSqrt2)) < 1e-12);
  CHECK(std::abs(inner_product(qubit_up(), qubit_up()) - Complex(1.0)) < 1e-12);

  auto omegas = pbr_product_states();
  auto chis = pbr_basis_states();
  CHECK(std::abs(inner_product(omegas[0], chis[0])) < 1e-12);

  CHECK_THROWS_AS(inner_product(qubit_up(), omegas[0]), DimensionError);
}

TEST_CASE("inner product is conjugate-linear in the first argument") {
  StateVector a({Complex(0.0, 1.0), Complex(0.0, 0.0)});  // i|0>
  StateVector b = qubit_up();
  CHECK(std::abs(inner_product(a, b) - Complex(0.0, -1.0)) < 1e-12);
  CHECK(std::abs(inner_product(b, a) - Complex(0.0, 1.0)) < 1e-12);
}

TEST_CASE("tensor product ordering and identities") {
  StateVector uu = tensor(qubit_up(), qubit_up());
  CHECK(uu.dim() == 4);
  CHECK(std::abs(uu[0] - Complex(1.0)) < 1e-12);
  for (std::size_t i = 1; i < 4; ++i) CHECK(std::abs(uu[i]) < 1e-12);

  StateVector unit1(std::vector<Complex>{Complex(1.0)});
  StateVector x = qubit_plus();
  StateVector same = tensor(x, unit1);
  for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(same[i] - x[i]) < 1e-12);

  StateVector pm = tensor(qubit_plus(), qubit_minus());
  CHECK(std::abs(pm[0] - Complex(0.5)) < 1e-12);
  CHECK(std::abs(pm[1] - Complex(-0.5)) < 1e-12);
  CHECK(std::abs(pm[2] - Complex(0.5)) < 1e-12);
  CHECK(std::abs(pm[3] - Complex(-0.5)) < 1e-12);
}

TEST_CASE("tensor is associative up to reindexing") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    StateVector a = testing::random_state(rng, 2);
    StateVector b = testing::random_state(rng, 3);
    StateVector c = testing::random_state(rng, 2);
    StateVector lhs = tensor(tensor(a, b), c);
    StateVector rhs = tensor(a, tensor(b, c));
    for (std::size_t k = 0; k < lhs.dim(); ++k) CHECK(std::abs(lhs[k] - rhs[k]) < 1e-12);
  }
}

TEST_CASE("born probabilities") {
  DensityOperator up = DensityOperator::pure(qubit_up());
  Effect up_proj(projector(qubit_up()), "up");
  CHECK(born_probability(up, up_proj) == doctest::Approx(1.0).epsilon(1e-12));

  auto omegas = pbr_product_states();
  auto chis = pbr_basis_states();
  Effect chi1(projector(chis[0]), "chi1");
  CHECK(born_probability(DensityOperator::pure(omegas[0]), chi1) < 1e-12);
  CHECK(born_probability(DensityOperator::pure(omegas[3]), chi1) ==
        doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(born_probability(up, chi1), DimensionError);
}

TEST_CASE("born probabilities sum to one over a measurement") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t dim = 2 + (trial % 3);
    Measurement m = testing::random_projective_measurement(rng, dim, "k");
    DensityOperator rho = DensityOperator::pure(testing::random_state(rng, dim));
    double total = 0.0;
    for (const Effect& e : m.effects()) total += born_probability(rho, e);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("born agrees with squared overlap for pure states") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    StateVector psi = testing::random_state(rng, 4);
    StateVector phi = testing::random_state(rng, 4);
    double via_trace =
        born_probability(DensityOperator::pure(psi), Effect(projector(phi), "e"));
    double via_overlap = std::norm(inner_product(phi, psi));
    CHECK(std::abs(via_trace - via_overlap) < 1e-10);
  }
}

TEST_CASE("pbr product states") {
  auto omegas = pbr_product_states();
  REQUIRE(omegas.size() == 4);
  StateVector uu = tensor(qubit_up(), qubit_up());
  CHECK(equal_up_to_phase(omegas[0], uu));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(omegas[3][i] - Complex(0.5)) < 1e-12);
    CHECK(omegas[i].is_normalized());
  }
}

TEST_CASE("pbr measurement antidistinguishes the product states") {
  auto omegas = pbr_product_states();
  auto chis = pbr_basis_states();
  Measurement m = pbr_measurement();
  REQUIRE(m.outcome_count() == 4);

  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(std::abs(inner_product(omegas[k], chis[k])) < 1e-12);
  }

  // The four states are an orthonormal basis: Gram matrix is the identity and
  // the projectors resolve it.
  ComplexMatrix sum(4);
  for (std::size_t i = 0; i < 4; ++i) {
    sum = sum + m.effect(i).matrix;
    for (std::size_t j = 0; j < 4; ++j) {
      Complex want = i == j ? Complex(1.0) : Complex(0.0);
      CHECK(std::abs(inner_product(chis[i], chis[j]) - want) < 1e-12);
    }
  }
  CHECK(sum.max_abs_diff(ComplexMatrix::identity(4)) < 1e-12);
}

TEST_CASE("apply_unitary") {
  CHECK(equal_up_to_phase(apply_unitary(ComplexMatrix::identity(2), qubit_plus()),
                          qubit_plus()));
  CHECK(equal_up_to_phase(apply_unitary(pauli_x(), qubit_up()), qubit_down()));

  ComplexMatrix not_unitary(2);
  not_unitary.at(0, 0) = 2.0;
  not_unitary.at(1, 1) = 1.0;
  CHECK_THROWS_AS(apply_unitary(not_unitary, qubit_up()), ValidationError);
  CHECK_THROWS_AS(apply_unitary(ComplexMatrix::identity(4), qubit_up()), DimensionError);

  // Norm preservation on random states.
  std::mt19937_64 rng(5);
  std::vector<StateVector> basis = testing::random_basis(rng, 3);
  ComplexMatrix u(3);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t r = 0; r < 3; ++r) u.at(r, c) = basis[c][r];
  }
  for (int i = 0; i < 20; ++i) {
    StateVector s = testing::random_state(rng, 3);
    CHECK(std::abs(apply_unitary(u, s).norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("measurement unitary realizes the entangling account") {
  Complex c1(0.6, 0.0);
  Complex c2(0.0, 0.8);
  StateVector plus = qubit_plus();
  StateVector minus = qubit_minus();

  std::vector<Complex> sys_amp(2);
  for (std::size_t i = 0; i < 2; ++i) sys_amp[i] = c1 * plus[i] + c2 * minus[i];
  StateVector joint = tensor(StateVector(sys_amp), StateVector::basis(2, 0));

  ComplexMatrix u = measurement_unitary({plus, minus}, 2, 0, {0, 1});
  StateVector evolved = apply_unitary(u, joint);

  std::vector<Complex> want_amp(4, Complex(0.0));
  StateVector t1 = tensor(plus, StateVector::basis(2, 0));
  StateVector t2 = tensor(minus, StateVector::basis(2, 1));
  for (std::size_t i = 0; i < 4; ++i) want_amp[i] = c1 * t1[i] + c2 * t2[i];
  CHECK(equal_up_to_phase(evolved, StateVector(want_amp)));
}

TEST_CASE("measurement unitary with a record-free pointer state") {
  // Pointer space {idle, rec0, rec1}: outcome k moves |idle> to |rec_k>.
  StateVector plus = qubit_plus();
  StateVector minus = qubit_minus();
  ComplexMatrix u = measurement_unitary({plus, minus}, 3, 0, {1, 2});
  StateVector idle = StateVector::basis(3, 0);
  CHECK(equal_up_to_phase(apply_unitary(u, tensor(plus, idle)),
                          tensor(plus, StateVector::basis(3, 1))));
  CHECK(equal_up_to_phase(apply_unitary(u, tensor(minus, idle)),
                          tensor(minus, StateVector::basis(3, 2))));

  CHECK_THROWS_AS(measurement_unitary({plus, minus}, 3, 5, {1, 2}), DimensionError);
  CHECK_THROWS_AS(measurement_unitary({plus, minus}, 3, 0, {1}), ValidationError);
}

TEST_CASE("validation catches malformed operators") {
  ComplexMatrix half(2);
  half.at(0, 0) = 0.5;
  CHECK_THROWS_AS(DensityOperator{half}, ValidationError);  // trace 1/2

  ComplexMatrix overweight(2);
  overweight.at(0, 0) = 1.5;
  overweight.at(1, 1) = 0.5;
  CHECK_THROWS_AS(Effect(overweight, "e"), ValidationError);  // eigenvalue 1.5

  // Effects that do not resolve the identity.
  std::vector<Effect> incomplete;
  incomplete.emplace_back(projector(qubit_up()), "up");
  CHECK_THROWS_AS(Measurement{incomplete}, ValidationError);
}

TEST_CASE("observable from spectral data") {
  Observable o({1.0, -1.0}, {qubit_plus(), qubit_minus()});
  // Reconstructs sigma_x.
  CHECK(o.matrix().max_abs_diff(pauli_x()) < 1e-12);

  CHECK_THROWS_AS(Observable({1.0, -1.0}, {qubit_plus(), qubit_plus()}), ValidationError);
  CHECK_THROWS_AS(Observable({1.0}, {qubit_plus()}), ValidationError);

  Measurement m = o.to_measurement({"plus", "minus"});
  CHECK(m.outcome_labels() == std::vector<std::string>{"plus", "minus"});
}

TEST_CASE("hermitian eigenvalues on a known matrix") {
  // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
  ComplexMatrix m(2);
  m.at(0, 0) = 2.0;
  m.at(0, 1) = Complex(0.0, 1.0);
  m.at(1, 0) = Complex(0.0, -1.0);
  m.at(1, 1) = 2.0;
  auto vals = hermitian_eigenvalues(m);
  CHECK(vals[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(vals[1] == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("inner product basics on random normalized states") {
  std::mt19937_64 rng(97);
  for (int i = 0; i < 100; ++i) {
    StateVector a = testing::random_state(rng, 4);
    StateVector b = testing::random_state(rng, 4);
    CHECK(std::abs(inner_product(a, a).imag()) < 1e-12);
    CHECK(std::abs(inner_product(a, b)) <= 1.0 + 1e-12);
  }
}
