// Copyright 2026 The Krauscope Authors
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
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace krauscope {

using c64 = std::complex<double>;

/// Dense complex matrix, row-major. The universal carrier for states,
/// unitaries, observables, and projectors. Column vectors are d x 1 matrices.
///
/// There is deliberately no operator==: comparisons are tolerance-based via
/// approx_equal with an explicit epsilon.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols);  // zero-filled; throws unless rows, cols >= 1

  static CMatrix identity(int d);
  static CMatrix from_rows(std::initializer_list<std::initializer_list<c64>> rows);
  static CMatrix column(const std::vector<c64>& entries);
  static CMatrix diagonal(const std::vector<c64>& entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  std::size_t size() const { return entries_.size(); }

  c64& operator()(int r, int c) {
    return entries_[static_cast<std::size_t>(r) * cols_ + c];
  }
  const c64& operator()(int r, int c) const {
    return entries_[static_cast<std::size_t>(r) * cols_ + c];
  }
  c64* data() { return entries_.data(); }
  const c64* data() const { return entries_.data(); }

  CMatrix adjoint() const;
  CMatrix conjugate() const;
  CMatrix transpose() const;
  c64 trace() const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(c64 scalar);

  /// Max-abs entrywise comparison; shapes must match for equality.
  bool approx_equal(const CMatrix& other, double eps) const;

  double max_abs() const;

  std::string to_string(int precision = 4) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<c64> entries_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);  // kernel-dispatched
CMatrix operator*(c64 scalar, CMatrix m);
CMatrix operator*(CMatrix m, c64 scalar);

/// Tensor product: (a (x) b)[i*rb+k, j*cb+l] = a[i,j] * b[k,l].
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Reduces a square matrix on a tensor-product space to the subsystems in
/// `keep` (indices into `dims`, treated as a set). Trace is preserved.
CMatrix partial_trace(const CMatrix& m, const std::vector<int>& dims,
                      const std::vector<int>& keep);

double frobenius_norm(const CMatrix& m);
double frobenius_distance(const CMatrix& a, const CMatrix& b);

/// tr(a * b) without forming the product.
c64 trace_product(const CMatrix& a, const CMatrix& b);

/// <a|b> for column vectors (a conjugated).
c64 inner(const CMatrix& a, const CMatrix& b);

/// |v><v| for a column vector.
CMatrix outer(const CMatrix& v);

/// Computational basis column |k> in dimension d.
CMatrix basis_column(int d, int k);

/// Uniform superposition column, all entries 1/sqrt(d).
CMatrix uniform_column(int d);

/// max_ij |m[i,j] - conj(m[j,i])|.
double hermiticity_residual(const CMatrix& m);

/// ||U'U - I||_F (dagger-U times U).
double unitarity_residual(const CMatrix& u);

// Pauli operators and the 2x2 identity.
const CMatrix& pauli_x();
const CMatrix& pauli_y();
const CMatrix& pauli_z();
const CMatrix& identity2();

}  // namespace krauscope
