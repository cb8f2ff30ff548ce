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
#include "einsdrop/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "einsdrop/linalg.hpp"

namespace einsdrop {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Flat index on dims {2, 2, D, 2}, S slowest.
inline Index saev_index(Index s, Index a, Index e, Index v, Index env_dim) {
  return ((s * 2 + a) * env_dim + e) * 2 + v;
}

}  // namespace

EavesdropScenario::EavesdropScenario(UnitaryOperator u0, UnitaryOperator u1,
                                     Projector p0_antenna)
    : u0_(std::move(u0)), u1_(std::move(u1)), p0_(std::move(p0_antenna)) {
  if (u0_.dim() != u1_.dim() || u0_.dim() != p0_.dim())
    throw std::invalid_argument(
        "EavesdropScenario: u0, u1 and p0_antenna must share one dimension "
        "(got " +
        std::to_string(u0_.dim()) + ", " + std::to_string(u1_.dim()) + ", " +
        std::to_string(p0_.dim()) + ")");
}

UnitaryOperator build_usa() {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 3) = 1.0;
  m(3, 2) = 1.0;
  return UnitaryOperator(std::move(m));
}

UnitaryOperator build_uae(const UnitaryOperator& u0,
                          const UnitaryOperator& u1) {
  if (u0.dim() != u1.dim())
    throw std::invalid_argument("build_uae: u0 and u1 dimensions differ");
  const Index d = u0.dim();
  ComplexMatrix m = ComplexMatrix::Zero(2 * d, 2 * d);
  m.topLeftCorner(d, d) = u0.matrix();
  m.bottomRightCorner(d, d) = u1.matrix();
  return UnitaryOperator(std::move(m));
}

UnitaryOperator build_uev(const Projector& p0) {
  const Index d = p0.dim();
  const ComplexMatrix p1 = ComplexMatrix::Identity(d, d) - p0.matrix();
  ComplexMatrix m = kron(p0.matrix(), ComplexMatrix::Identity(2, 2)) +
                    kron(p1, pauli_x());
  return UnitaryOperator(std::move(m));
}

StateVector final_state_sae(const UnitaryOperator& u0,
                            const UnitaryOperator& u1) {
  if (u0.dim() != u1.dim())
    throw std::invalid_argument("final_state_sae: u0 and u1 dimensions differ");
  const Index d = u0.dim();
  const ComplexVector v0 = u0.matrix().col(0);
  const ComplexVector v1 = u1.matrix().col(0);
  ComplexVector amps = ComplexVector::Zero(4 * d);
  amps.segment(0, d) = kInvSqrt2 * v0;      // s = 0, a = 0
  amps.segment(3 * d, d) = kInvSqrt2 * v1;  // s = 1, a = 1
  return StateVector({2, 2, d}, std::move(amps));
}

StateVector final_state_saev(const EavesdropScenario& sc) {
  const Index d = sc.env_dim();
  const ComplexVector v0 = sc.u0().matrix().col(0);
  const ComplexVector v1 = sc.u1().matrix().col(0);
  const ComplexMatrix& p0 = sc.p0_antenna().matrix();

  const ComplexVector w00 = p0 * v0;  // apparatus 0, antenna reads 0
  const ComplexVector w01 = v0 - w00;
  const ComplexVector w10 = p0 * v1;
  const ComplexVector w11 = v1 - w10;

  ComplexVector amps = ComplexVector::Zero(8 * d);
  for (Index e = 0; e < d; ++e) {
    amps(saev_index(0, 0, e, 0, d)) = kInvSqrt2 * w00(e);
    amps(saev_index(0, 0, e, 1, d)) = kInvSqrt2 * w01(e);
    amps(saev_index(1, 1, e, 0, d)) = kInvSqrt2 * w10(e);
    amps(saev_index(1, 1, e, 1, d)) = kInvSqrt2 * w11(e);
  }
  return StateVector({2, 2, d, 2}, std::move(amps));
}

StateVector final_state_saev_sequential(const EavesdropScenario& sc) {
  const Index d = sc.env_dim();
  const ComplexMatrix eye_d = ComplexMatrix::Identity(d, d);
  const ComplexMatrix eye2 = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix eye4 = ComplexMatrix::Identity(4, 4);

  const ComplexMatrix usa_full =
      kron(kron(build_usa().matrix(), eye_d), eye2);
  const ComplexMatrix uae_full =
      kron(kron(eye2, build_uae(sc.u0(), sc.u1()).matrix()), eye2);
  const ComplexMatrix uev_full = kron(eye4, build_uev(sc.p0_antenna()).matrix());

  ComplexVector init = ComplexVector::Zero(8 * d);
  init(saev_index(0, 0, 0, 0, d)) = kInvSqrt2;
  init(saev_index(1, 0, 0, 0, d)) = kInvSqrt2;

  ComplexVector out = uev_full * (uae_full * (usa_full * init));
  return StateVector({2, 2, d, 2}, std::move(out));
}

DensityOperator rho_sa(const EavesdropScenario& sc) {
  const Index d = sc.env_dim();
  const StateVector phi = final_state_sae(sc.u0(), sc.u1());
  const ComplexVector& amps = phi.amplitudes();
  ComplexMatrix out = ComplexMatrix::Zero(4, 4);
  for (Index row = 0; row < 4; ++row)
    for (Index col = 0; col < 4; ++col) {
      Complex sum = 0.0;
      for (Index e = 0; e < d; ++e)
        sum += amps(row * d + e) * std::conj(amps(col * d + e));
      out(row, col) = sum;
    }
  return DensityOperator(std::move(out));
}

DensityOperator rho_av(const EavesdropScenario& sc) {
  const Index d = sc.env_dim();
  const StateVector psi = final_state_saev(sc);
  const ComplexVector& amps = psi.amplitudes();
  ComplexMatrix out = ComplexMatrix::Zero(4, 4);
  for (Index a = 0; a < 2; ++a)
    for (Index v = 0; v < 2; ++v)
      for (Index ap = 0; ap < 2; ++ap)
        for (Index vp = 0; vp < 2; ++vp) {
          Complex sum = 0.0;
          for (Index s = 0; s < 2; ++s)
            for (Index e = 0; e < d; ++e)
              sum += amps(saev_index(s, a, e, v, d)) *
                     std::conj(amps(saev_index(s, ap, e, vp, d)));
          out(a * 2 + v, ap * 2 + vp) = sum;
        }
  return DensityOperator(std::move(out));
}

double collective_gamma(const UnitaryOperator& u0, const UnitaryOperator& u1) {
  if (u0.dim() != u1.dim())
    throw std::invalid_argument(
        "collective_gamma: u0 and u1 dimensions differ");
  const ComplexVector v0 = u0.matrix().col(0);
  const ComplexVector v1 = u1.matrix().col(0);
  return std::min(1.0, std::abs(v1.dot(v0)));
}

double guessing_probability(const EavesdropScenario& sc) {
  const ComplexMatrix av = rho_av(sc).matrix();
  const double from_state = av(0, 0).real() + av(3, 3).real();

  const ComplexVector v0 = sc.u0().matrix().col(0);
  const ComplexVector v1 = sc.u1().matrix().col(0);
  const ComplexMatrix& p0 = sc.p0_antenna().matrix();
  const double closed_form =
      0.5 * ((p0 * v0).squaredNorm() + 1.0 - (p0 * v1).squaredNorm());

  if (std::abs(from_state - closed_form) > tol::kDualPath)
    throw std::runtime_error(
        "guessing_probability: reduced-state and closed-form paths disagree "
        "by " +
        std::to_string(std::abs(from_state - closed_form)));
  return from_state;
}

double helstrom_ceiling(double gamma) {
  const double g = std::clamp(gamma, 0.0, 1.0);
  return 0.5 * (1.0 + std::sqrt(1.0 - g * g));
}

}  // namespace einsdrop
