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
#include "einsdrop/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/QR>

namespace einsdrop {

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix dagger(const ComplexMatrix& a) { return a.adjoint(); }

DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<Index>& dims,
                              std::vector<int> keep) {
  const Index total =
      std::accumulate(dims.begin(), dims.end(), Index{1},
                      [](Index acc, Index d) { return acc * d; });
  if (total != rho.dim())
    throw std::invalid_argument(
        "partial_trace: dimension product " + std::to_string(total) +
        " does not match operator dimension " + std::to_string(rho.dim()));

  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.empty())
    throw std::invalid_argument("partial_trace: keep set is empty");
  for (int s : keep)
    if (s < 0 || static_cast<std::size_t>(s) >= dims.size())
      throw std::invalid_argument("partial_trace: keep index " +
                                  std::to_string(s) + " out of range");

  const int n = static_cast<int>(dims.size());
  std::vector<Index> stride(n);
  Index acc = 1;
  for (int s = n - 1; s >= 0; --s) {
    stride[s] = acc;
    acc *= dims[s];
  }

  std::vector<int> traced;
  for (int s = 0; s < n; ++s)
    if (!std::binary_search(keep.begin(), keep.end(), s)) traced.push_back(s);

  // Flat offsets of every kept / traced multi-index combination.
  auto offsets = [&](const std::vector<int>& subsys) {
    Index count = 1;
    for (int s : subsys) count *= dims[s];
    std::vector<Index> out(count, 0);
    Index repeat = count;
    for (int s : subsys) {
      repeat /= dims[s];
      for (Index i = 0; i < count; ++i)
        out[i] += ((i / repeat) % dims[s]) * stride[s];
    }
    return out;
  };
  const std::vector<Index> keep_off = offsets(keep);
  const std::vector<Index> traced_off = offsets(traced);

  const Index dk = static_cast<Index>(keep_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  const ComplexMatrix& m = rho.matrix();
  for (Index i = 0; i < dk; ++i)
    for (Index j = 0; j < dk; ++j) {
      Complex sum = 0.0;
      for (Index t : traced_off) sum += m(keep_off[i] + t, keep_off[j] + t);
      out(i, j) = sum;
    }
  return DensityOperator(std::move(out));
}

UnitaryOperator haar_random_unitary(Index d, RngStream& rng) {
  if (d < 1)
    throw std::invalid_argument("haar_random_unitary: dimension must be >= 1");
  ComplexMatrix ginibre(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) ginibre(i, j) = rng.complex_gaussian();

  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre);
  ComplexMatrix q = qr.householderQ();
  // Fix the phase gauge with the R diagonal so the result is Haar rather
  // than QR-convention dependent.
  ComplexVector phases(d);
  for (Index i = 0; i < d; ++i) {
    const Complex r = qr.matrixQR()(i, i);
    const double a = std::abs(r);
    phases(i) = (a > 0.0) ? r / a : Complex(1.0, 0.0);
  }
  return UnitaryOperator(q * phases.asDiagonal());
}

Complex matrix_element(const StateVector& bra, const ComplexMatrix& a,
                       const StateVector& ket) {
  if (bra.dim() != a.rows() || ket.dim() != a.cols())
    throw std::invalid_argument(
        "matrix_element: incompatible dimensions (bra " +
        std::to_string(bra.dim()) + ", matrix " + std::to_string(a.rows()) +
        "x" + std::to_string(a.cols()) + ", ket " + std::to_string(ket.dim()) +
        ")");
  return bra.amplitudes().dot(a * ket.amplitudes());
}

StateVector basis_state(std::vector<Index> dims, Index flat_index) {
  Index total = 1;
  for (Index d : dims) total *= d;
  if (flat_index < 0 || flat_index >= total)
    throw std::invalid_argument("basis_state: index out of range");
  ComplexVector amps = ComplexVector::Zero(total);
  amps(flat_index) = 1.0;
  return StateVector(std::move(dims), std::move(amps));
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace einsdrop
