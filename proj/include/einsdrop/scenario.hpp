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
#pragma once

#include "einsdrop/types.hpp"

namespace einsdrop {

// One wiretap instance on the measurement chain system -> apparatus ->
// environment -> antenna. The environment responds with u0 or u1 depending
// on the apparatus bit; the antenna qubit is flipped on the complement of
// p0_antenna. Subsystem order is fixed as (S, A, E, V) with S slowest and
// the initial state is |+> (x) |0> (x) |0>^E (x) |0>.
class EavesdropScenario {
 public:
  EavesdropScenario(UnitaryOperator u0, UnitaryOperator u1,
                    Projector p0_antenna);

  Index env_dim() const { return u0_.dim(); }
  const UnitaryOperator& u0() const { return u0_; }
  const UnitaryOperator& u1() const { return u1_; }
  const Projector& p0_antenna() const { return p0_; }

 private:
  UnitaryOperator u0_;
  UnitaryOperator u1_;
  Projector p0_;
};

/// Premeasurement coupling on S (x) A: |0><0| (x) I + |1><1| (x) sigma_x.
UnitaryOperator build_usa();

/// Apparatus-environment coupling on A (x) E: |0><0| (x) u0 + |1><1| (x) u1.
UnitaryOperator build_uae(const UnitaryOperator& u0, const UnitaryOperator& u1);

/// Antenna readout on E (x) V: p0 (x) I + (I - p0) (x) sigma_x.
UnitaryOperator build_uev(const Projector& p0);

/// State on S (x) A (x) E after premeasurement and environment coupling,
/// dims {2, 2, D}.
StateVector final_state_sae(const UnitaryOperator& u0,
                            const UnitaryOperator& u1);

/// Final four-party state, dims {2, 2, D, 2}, assembled from the closed
/// form: the only nonzero blocks are s = a, with E part P_v U_s |0> for
/// antenna bit v. O(D^2) in the projector application.
StateVector final_state_saev(const EavesdropScenario& sc);

/// Same state computed by the explicit operator product
/// U^(EV) U^(AE) U^(SA) |+,0,0,0> on the full 8D-dimensional space.
/// Reference path for cross-checking final_state_saev; O(D^3).
StateVector final_state_saev_sequential(const EavesdropScenario& sc);

/// Reduced state of (S, A) after tracing the environment out of the
/// three-party state (antenna ignored). 4x4, basis order (SA) = 00,01,10,11.
DensityOperator rho_sa(const EavesdropScenario& sc);

/// Reduced state of (A, V): trace of the four-party state over S and E.
/// 4x4, basis order (AV) = 00,01,10,11 (A slow, V fast). Diagonal in the
/// computational basis up to numerical noise.
DensityOperator rho_av(const EavesdropScenario& sc);

/// Collective decoherence factor |<0| u1^dag u0 |0>| in [0, 1].
double collective_gamma(const UnitaryOperator& u0, const UnitaryOperator& u1);

/// Probability that the antenna bit equals the apparatus bit. Computed both
/// as <00|rho_av|00> + <11|rho_av|11> and by the scalar closed form
/// (  <0|u0^dag p0 u0|0> + <0|u1^dag (I-p0) u1|0> ) / 2; the two paths must
/// agree within tol::kDualPath or a std::runtime_error is raised.
double guessing_probability(const EavesdropScenario& sc);

/// Optimal two-pure-state discrimination success (1 + sqrt(1 - gamma^2))/2.
double helstrom_ceiling(double gamma);

}  // namespace einsdrop
