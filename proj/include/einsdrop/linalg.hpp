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

#include <vector>

#include "einsdrop/rng.hpp"
#include "einsdrop/types.hpp"

namespace einsdrop {

/// Largest entrywise absolute value (0 for empty matrices).
double max_abs(const ComplexMatrix& m);

/// Kronecker product, (a.rows*b.rows) x (a.cols*b.cols).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Conjugate transpose.
ComplexMatrix dagger(const ComplexMatrix& a);

/// Trace out the subsystems not listed in `keep`. `dims` are the subsystem
/// dimensions of rho in slow-to-fast index order and must multiply to
/// rho.dim(). Kept subsystems stay in their original relative order.
DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<Index>& dims,
                              std::vector<int> keep);

/// Haar-distributed d x d unitary: QR of a complex Ginibre matrix with the
/// R diagonal phases folded into Q. Deterministic for a given stream state.
UnitaryOperator haar_random_unitary(Index d, RngStream& rng);

/// <bra| a |ket>.
Complex matrix_element(const StateVector& bra, const ComplexMatrix& a,
                       const StateVector& ket);

/// Computational basis state |flat_index> on the given factorization.
StateVector basis_state(std::vector<Index> dims, Index flat_index);

ComplexMatrix pauli_x();
ComplexMatrix pauli_z();

}  // namespace einsdrop
