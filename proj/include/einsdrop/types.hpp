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

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace einsdrop {

using Real = double;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Validation tolerances. All state/operator types check their invariants on
// construction against these constants.
namespace tol {
inline constexpr double kStateNorm = 1e-9;      // | ||psi|| - 1 |
inline constexpr double kUnitary = 1e-9;        // max-abs of U^dag U - I
inline constexpr double kHermitian = 1e-9;      // max-abs of M - M^dag
inline constexpr double kIdempotent = 1e-9;     // max-abs of P^2 - P
inline constexpr double kProjectorRank = 1e-6;  // | tr P - rank |
inline constexpr double kDensityTrace = 1e-9;   // | tr rho - 1 |
inline constexpr double kPsdFloor = -1e-9;      // smallest admissible eigenvalue
inline constexpr double kDualPath = 1e-9;       // agreement of redundant computation paths
inline constexpr double kSkew = 1e-12;          // max-abs of G + G^dag for generators
}  // namespace tol

/// Normalized pure state on an ordered tensor factorization. Subsystem 0 is
/// the slowest-varying index of the flat amplitude vector.
class StateVector {
 public:
  StateVector(std::vector<Index> dims, ComplexVector amplitudes);

  const std::vector<Index>& dims() const { return dims_; }
  Index dim() const { return amplitudes_.size(); }
  const ComplexVector& amplitudes() const { return amplitudes_; }

 private:
  std::vector<Index> dims_;
  ComplexVector amplitudes_;
};

/// Square matrix with U^dag U = I within tol::kUnitary.
class UnitaryOperator {
 public:
  explicit UnitaryOperator(ComplexMatrix matrix);

  Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  ComplexMatrix matrix_;
};

/// Hermitian idempotent matrix; rank is recovered from the trace.
class Projector {
 public:
  explicit Projector(ComplexMatrix matrix);

  Index dim() const { return matrix_.rows(); }
  Index rank() const { return rank_; }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  ComplexMatrix matrix_;
  Index rank_ = 0;
};

/// Hermitian, unit-trace, positive-semidefinite matrix.
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix matrix);

  Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  ComplexMatrix matrix_;
};

}  // namespace einsdrop
