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
#include "einsdrop/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "einsdrop/linalg.hpp"

namespace einsdrop {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void require_square_finite(const ComplexMatrix& m, const char* who) {
  require(m.rows() >= 1 && m.rows() == m.cols(),
          std::string(who) + ": matrix must be square and nonempty");
  require(m.allFinite(), std::string(who) + ": matrix has NaN/Inf entries");
}

}  // namespace

StateVector::StateVector(std::vector<Index> dims, ComplexVector amplitudes)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
  require(!dims_.empty(), "StateVector: empty dimension list");
  Index total = 1;
  for (Index d : dims_) {
    require(d >= 1, "StateVector: subsystem dimensions must be positive");
    total *= d;
  }
  require(total == amplitudes_.size(),
          "StateVector: amplitude count " + std::to_string(amplitudes_.size()) +
              " does not match dimension product " + std::to_string(total));
  require(amplitudes_.allFinite(), "StateVector: amplitudes have NaN/Inf");
  const double norm = amplitudes_.norm();
  require(std::abs(norm - 1.0) <= tol::kStateNorm,
          "StateVector: norm " + std::to_string(norm) + " is not 1");
}

UnitaryOperator::UnitaryOperator(ComplexMatrix matrix)
    : matrix_(std::move(matrix)) {
  require_square_finite(matrix_, "UnitaryOperator");
  const Index d = matrix_.rows();
  const double defect =
      max_abs(matrix_.adjoint() * matrix_ - ComplexMatrix::Identity(d, d));
  require(defect <= tol::kUnitary,
          "UnitaryOperator: U^dag U deviates from identity by " +
              std::to_string(defect));
}

Projector::Projector(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  require_square_finite(matrix_, "Projector");
  require(max_abs(matrix_ - matrix_.adjoint()) <= tol::kHermitian,
          "Projector: matrix is not Hermitian");
  require(max_abs(matrix_ * matrix_ - matrix_) <= tol::kIdempotent,
          "Projector: matrix is not idempotent");
  const Complex tr = matrix_.trace();
  rank_ = static_cast<Index>(std::llround(tr.real()));
  require(rank_ >= 0 && rank_ <= matrix_.rows(),
          "Projector: trace outside [0, dim]");
  require(std::abs(tr - Complex(static_cast<double>(rank_), 0.0)) <=
              tol::kProjectorRank,
          "Projector: trace " + std::to_string(tr.real()) +
              " is not close to an integer rank");
}

DensityOperator::DensityOperator(ComplexMatrix matrix)
    : matrix_(std::move(matrix)) {
  require_square_finite(matrix_, "DensityOperator");
  require(max_abs(matrix_ - matrix_.adjoint()) <= tol::kHermitian,
          "DensityOperator: matrix is not Hermitian");
  const Complex tr = matrix_.trace();
  require(std::abs(tr - Complex(1.0, 0.0)) <= tol::kDensityTrace,
          "DensityOperator: trace " + std::to_string(tr.real()) + " is not 1");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
      ComplexMatrix(0.5 * (matrix_ + matrix_.adjoint())),
      Eigen::EigenvaluesOnly);
  require(es.info() == Eigen::Success,
          "DensityOperator: eigenvalue check failed to converge");
  require(es.eigenvalues().minCoeff() >= tol::kPsdFloor,
          "DensityOperator: negative eigenvalue " +
              std::to_string(es.eigenvalues().minCoeff()));
}

}  // namespace einsdrop
