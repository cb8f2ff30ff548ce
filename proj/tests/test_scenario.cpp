// Copyright 2026 The einsdrop authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "einsdrop/linalg.hpp"
#include "einsdrop/qubit_env.hpp"
#include "einsdrop/scenario.hpp"
#include "oracles.hpp"

using namespace einsdrop;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

UnitaryOperator identity_unitary(Index d) {
  return UnitaryOperator(ComplexMatrix::Identity(d, d));
}

Projector identity_projector(Index d) {
  return Projector(ComplexMatrix::Identity(d, d));
}

Projector zero_projector(Index d) { return Projector(ComplexMatrix::Zero(d, d)); }

Projector ket0_projector() {
  ComplexMatrix p = ComplexMatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  return Projector(std::move(p));
}

EavesdropScenario haar_scenario(Index d, Index antenna_rank, RngStream& rng) {
  const UnitaryOperator u0 = haar_random_unitary(d, rng);
  const UnitaryOperator u1 = haar_random_unitary(d, rng);
  const UnitaryOperator basis = haar_random_unitary(d, rng);
  ComplexMatrix p = basis.matrix().leftCols(antenna_rank) *
                    basis.matrix().leftCols(antenna_rank).adjoint();
  return EavesdropScenario(u0, u1, Projector(std::move(p)));
}

// Antenna projecting on the positive eigenspace of |v0><v0| - |v1><v1|.
// It attains the optimal two-state discrimination value.
Projector optimal_antenna(const UnitaryOperator& u0, const UnitaryOperator& u1) {
  const Index d = u0.dim();
  const ComplexVector v0 = u0.matrix().col(0);
  const ComplexVector v1 = u1.matrix().col(0);
  const ComplexMatrix diff = v0 * v0.adjoint() - v1 * v1.adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(diff);
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  for (Index i = 0; i < d; ++i)
    if (es.eigenvalues()(i) > 0.0)
      p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return Projector(std::move(p));
}

}  // namespace

TEST_CASE("premeasurement correlates the apparatus with the system") {
  const ComplexMatrix usa = build_usa().matrix();

  ComplexVector plus_zero = ComplexVector::Zero(4);
  plus_zero(0) = kInvSqrt2;  // |00>
  plus_zero(2) = kInvSqrt2;  // |10>
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = kInvSqrt2;
  bell(3) = kInvSqrt2;
  CHECK(max_abs(usa * plus_zero - bell) < 1e-15);

  ComplexVector zero_zero = ComplexVector::Zero(4);
  zero_zero(0) = 1.0;
  CHECK(max_abs(usa * zero_zero - zero_zero) == 0.0);

  CHECK(max_abs(usa * usa - ComplexMatrix::Identity(4, 4)) == 0.0);
}

TEST_CASE("apparatus-environment coupling has the conditional block structure") {
  CHECK(max_abs(build_uae(identity_unitary(3), identity_unitary(3)).matrix() -
                ComplexMatrix::Identity(6, 6)) == 0.0);

  const UnitaryOperator cnot =
      build_uae(identity_unitary(2), UnitaryOperator(pauli_x()));
  ComplexMatrix expected = ComplexMatrix::Identity(4, 4);
  expected(2, 2) = expected(3, 3) = 0.0;
  expected(2, 3) = expected(3, 2) = 1.0;
  CHECK(max_abs(cnot.matrix() - expected) == 0.0);

  RngStream rng(5);
  const UnitaryOperator u0 = haar_random_unitary(4, rng);
  const UnitaryOperator u1 = haar_random_unitary(4, rng);
  const ComplexMatrix block = build_uae(u0, u1).matrix();
  ComplexMatrix assembled = ComplexMatrix::Zero(8, 8);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) {
      assembled(i, j) = u0.matrix()(i, j);
      assembled(4 + i, 4 + j) = u1.matrix()(i, j);
    }
  CHECK(max_abs(block - assembled) == 0.0);

  CHECK_THROWS_AS(build_uae(identity_unitary(2), identity_unitary(3)),
                  std::invalid_argument);
}

TEST_CASE("antenna coupling flips the eavesdropper qubit off the projector") {
  CHECK(max_abs(build_uev(identity_projector(3)).matrix() -
                ComplexMatrix::Identity(6, 6)) == 0.0);

  CHECK(max_abs(build_uev(zero_projector(3)).matrix() -
                kron(ComplexMatrix::Identity(3, 3), pauli_x())) == 0.0);

  // Rank-1 antenna on a qubit environment: a CNOT from E to V.
  const ComplexMatrix uev = build_uev(ket0_projector()).matrix();
  ComplexMatrix expected = ComplexMatrix::Identity(4, 4);
  expected(2, 2) = expected(3, 3) = 0.0;
  expected(2, 3) = expected(3, 2) = 1.0;
  CHECK(max_abs(uev - expected) == 0.0);
}

TEST_CASE("final state without decoherence or wiretap stays a Bell pair") {
  const EavesdropScenario sc(identity_unitary(2), identity_unitary(2),
                             identity_projector(2));
  const StateVector psi = final_state_saev(sc);
  ComplexVector expected = ComplexVector::Zero(16);
  expected(0) = kInvSqrt2;   // |0000>
  expected(12) = kInvSqrt2;  // |1100>
  CHECK(max_abs(psi.amplitudes() - expected) < 1e-15);
}

TEST_CASE("perfect qubit chain produces the four-party GHZ state") {
  const EavesdropScenario sc(identity_unitary(2),
                             UnitaryOperator(pauli_x()), ket0_projector());
  const StateVector psi = final_state_saev(sc);
  ComplexVector expected = ComplexVector::Zero(16);
  expected(0) = kInvSqrt2;   // |0000>
  expected(15) = kInvSqrt2;  // |1111>
  CHECK(max_abs(psi.amplitudes() - expected) < 1e-15);
}

TEST_CASE("closed-form final state equals the sequential operator product") {
  RngStream rng(101);
  for (Index d : {Index{2}, Index{8}, Index{20}}) {
    for (int trial = 0; trial < 3; ++trial) {
      const EavesdropScenario sc = haar_scenario(d, d / 2, rng);
      const StateVector fast = final_state_saev(sc);
      const StateVector slow = final_state_saev_sequential(sc);
      CHECK(max_abs(fast.amplitudes() - slow.amplitudes()) < 1e-9);
    }
  }
}

TEST_CASE("rho_sa has the decoherence-factor corner structure") {
  SUBCASE("shielded laboratory keeps full coherence") {
    const EavesdropScenario sc(identity_unitary(2), identity_unitary(2),
                               identity_projector(2));
    const ComplexMatrix m = rho_sa(sc).matrix();
    CHECK(std::abs(m(0, 0) - Complex(0.5, 0.0)) < 1e-12);
    CHECK(std::abs(m(3, 3) - Complex(0.5, 0.0)) < 1e-12);
    CHECK(std::abs(m(0, 3) - Complex(0.5, 0.0)) < 1e-12);
    CHECK(collective_gamma(sc.u0(), sc.u1()) == 1.0);
  }

  SUBCASE("orthogonal environment records kill the corners") {
    const EavesdropScenario sc(identity_unitary(2),
                               UnitaryOperator(pauli_x()), ket0_projector());
    const ComplexMatrix m = rho_sa(sc).matrix();
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(0, 0) = expected(3, 3) = 0.5;
    CHECK(max_abs(m - expected) < 1e-12);
    CHECK(collective_gamma(sc.u0(), sc.u1()) == 0.0);
  }

  SUBCASE("random instances match the inner-product oracle") {
    RngStream rng(7);
    for (int trial = 0; trial < 5; ++trial) {
      const EavesdropScenario sc = haar_scenario(6, 3, rng);
      const ComplexMatrix m = rho_sa(sc).matrix();

      const StateVector zero = basis_state({6}, 0);
      const Complex overlap = matrix_element(
          zero, ComplexMatrix(sc.u1().matrix().adjoint() * sc.u0().matrix()),
          zero);
      CHECK(std::abs(m(0, 3) - 0.5 * overlap) < 1e-12);
      CHECK(std::abs(2.0 * std::abs(m(0, 3)) -
                     collective_gamma(sc.u0(), sc.u1())) < 1e-12);

      // Everything outside the corners and the two surviving diagonal
      // entries vanishes.
      for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 4; ++j) {
          if ((i == 0 && j == 0) || (i == 3 && j == 3) || (i == 0 && j == 3) ||
              (i == 3 && j == 0))
            continue;
          CHECK(std::abs(m(i, j)) < 1e-9);
        }
      CHECK(std::abs(m(0, 0) - Complex(0.5, 0.0)) < 1e-9);
      CHECK(std::abs(m(3, 3) - Complex(0.5, 0.0)) < 1e-9);
    }
  }
}

TEST_CASE("collective_gamma of the qubit-environment model matches the power law") {
  const auto [u0, u1] = env_unitaries(ImperfectCnotModel(M_PI / 4.0, 8));
  CHECK(std::abs(collective_gamma(u0, u1) - 1.0 / 16.0) < 1e-12);
}

TEST_CASE("rho_av is diagonal with the closed-form weights") {
  SUBCASE("antenna stuck at zero splits weight between |00> and |10>") {
    const EavesdropScenario sc(identity_unitary(2), identity_unitary(2),
                               identity_projector(2));
    const ComplexMatrix m = rho_av(sc).matrix();
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(0, 0) = 0.5;  // (A,V) = 00
    expected(2, 2) = 0.5;  // (A,V) = 10
    CHECK(max_abs(m - expected) < 1e-12);
  }

  SUBCASE("perfect chain splits weight between |00> and |11>") {
    const EavesdropScenario sc(identity_unitary(2),
                               UnitaryOperator(pauli_x()), ket0_projector());
    const ComplexMatrix m = rho_av(sc).matrix();
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(0, 0) = 0.5;
    expected(3, 3) = 0.5;
    CHECK(max_abs(m - expected) < 1e-12);
  }

  SUBCASE("random instances match the four scalar coefficients") {
    RngStream rng(23);
    for (int trial = 0; trial < 5; ++trial) {
      const EavesdropScenario sc = haar_scenario(8, 4, rng);
      const ComplexMatrix m = rho_av(sc).matrix();

      const ComplexVector v0 = sc.u0().matrix().col(0);
      const ComplexVector v1 = sc.u1().matrix().col(0);
      const ComplexMatrix& p0 = sc.p0_antenna().matrix();
      const double w00 = 0.5 * (p0 * v0).squaredNorm();
      const double w01 = 0.5 * (v0 - p0 * v0).squaredNorm();
      const double w10 = 0.5 * (p0 * v1).squaredNorm();
      const double w11 = 0.5 * (v1 - p0 * v1).squaredNorm();

      CHECK(std::abs(m(0, 0) - Complex(w00, 0.0)) < 1e-9);
      CHECK(std::abs(m(1, 1) - Complex(w01, 0.0)) < 1e-9);
      CHECK(std::abs(m(2, 2) - Complex(w10, 0.0)) < 1e-9);
      CHECK(std::abs(m(3, 3) - Complex(w11, 0.0)) < 1e-9);

      for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 4; ++j)
          if (i != j) CHECK(std::abs(m(i, j)) < 1e-9);
    }
  }
}

TEST_CASE("guessing probability spans the shielded and perfect-chain extremes") {
  const EavesdropScenario shielded(identity_unitary(2), identity_unitary(2),
                                   identity_projector(2));
  CHECK(guessing_probability(shielded) == doctest::Approx(0.5).epsilon(1e-12));

  const EavesdropScenario perfect(identity_unitary(2),
                                  UnitaryOperator(pauli_x()), ket0_projector());
  CHECK(guessing_probability(perfect) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("guessing probability agrees with the reduced-state oracle") {
  RngStream rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    const EavesdropScenario sc = haar_scenario(10, 5, rng);
    const double pg = guessing_probability(sc);
    CHECK(pg >= 0.0);
    CHECK(pg <= 1.0);

    // Independent route: trace of the projected sequential state.
    const StateVector psi = final_state_saev_sequential(sc);
    const ComplexMatrix rho = psi.amplitudes() * psi.amplitudes().adjoint();
    const ComplexMatrix av =
        oracles::ptrace_loop(rho, {2, 2, 10, 2}, {1, 3});
    CHECK(std::abs(pg - (av(0, 0).real() + av(3, 3).real())) < 1e-9);
  }
}

TEST_CASE("guessing probability is capped by the Helstrom ceiling") {
  RngStream rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const Index d = 6;
    const Index rank = 1 + static_cast<Index>(rng.next_u64() % (d - 1));
    const EavesdropScenario sc = haar_scenario(d, rank, rng);
    const double ceiling =
        helstrom_ceiling(collective_gamma(sc.u0(), sc.u1()));
    CHECK(guessing_probability(sc) <= ceiling + 1e-9);
  }
}

TEST_CASE("the optimal antenna reaches the ceiling and the trade-off holds") {
  RngStream rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    const UnitaryOperator u0 = haar_random_unitary(7, rng);
    const UnitaryOperator u1 = haar_random_unitary(7, rng);
    const EavesdropScenario sc(u0, u1, optimal_antenna(u0, u1));
    const double gamma = collective_gamma(u0, u1);
    const double pg = guessing_probability(sc);
    CHECK(pg == doctest::Approx(helstrom_ceiling(gamma)).epsilon(1e-9));
    CHECK(pg + gamma >= 1.0 - 1e-9);
  }
}

TEST_CASE("trivial antennas leak nothing") {
  RngStream rng(43);
  const UnitaryOperator u0 = haar_random_unitary(5, rng);
  const UnitaryOperator u1 = haar_random_unitary(5, rng);
  const EavesdropScenario all(u0, u1, identity_projector(5));
  const EavesdropScenario none(u0, u1, zero_projector(5));
  CHECK(guessing_probability(all) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(guessing_probability(none) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("scenario construction rejects mismatched dimensions") {
  RngStream rng(47);
  const UnitaryOperator u0 = haar_random_unitary(4, rng);
  const UnitaryOperator u1 = haar_random_unitary(3, rng);
  CHECK_THROWS_AS(EavesdropScenario(u0, u1, identity_projector(4)),
                  std::invalid_argument);
  const UnitaryOperator u1b = haar_random_unitary(4, rng);
  CHECK_THROWS_AS(EavesdropScenario(u0, u1b, identity_projector(3)),
                  std::invalid_argument);
}
