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

#include "krauscope/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "krauscope/kernels.hpp"

namespace krauscope {

CMatrix::CMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("CMatrix: rows and cols must be >= 1, got " +
                                std::to_string(rows) + "x" +
                                std::to_string(cols));
  }
  entries_.assign(static_cast<std::size_t>(rows) * cols, c64{0.0, 0.0});
}

CMatrix CMatrix::identity(int d) {
  CMatrix m(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = c64{1.0, 0.0};
  return m;
}

CMatrix CMatrix::from_rows(
    std::initializer_list<std::initializer_list<c64>> rows) {
  const int r = static_cast<int>(rows.size());
  if (r == 0) throw std::invalid_argument("CMatrix::from_rows: empty");
  const int c = static_cast<int>(rows.begin()->size());
  CMatrix m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != c) {
      throw std::invalid_argument("CMatrix::from_rows: ragged rows");
    }
    int j = 0;
    for (const c64& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

CMatrix CMatrix::column(const std::vector<c64>& entries) {
  CMatrix m(static_cast<int>(entries.size()), 1);
  for (int i = 0; i < m.rows(); ++i) m(i, 0) = entries[i];
  return m;
}

CMatrix CMatrix::diagonal(const std::vector<c64>& entries) {
  const int d = static_cast<int>(entries.size());
  CMatrix m(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = entries[i];
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

CMatrix CMatrix::conjugate() const {
  CMatrix out(rows_, cols_);
  for (std::size_t idx = 0; idx < entries_.size(); ++idx)
    out.entries_[idx] = std::conj(entries_[idx]);
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

c64 CMatrix::trace() const {
  if (!is_square()) throw std::invalid_argument("trace: matrix not square");
  c64 t{0.0, 0.0};
  for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

namespace {
void check_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()));
  }
}
}  // namespace

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  check_same_shape(*this, other, "operator+");
  for (std::size_t i = 0; i < entries_.size(); ++i)
    entries_[i] += other.entries_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  check_same_shape(*this, other, "operator-");
  for (std::size_t i = 0; i < entries_.size(); ++i)
    entries_[i] -= other.entries_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(c64 scalar) {
  for (auto& e : entries_) e *= scalar;
  return *this;
}

bool CMatrix::approx_equal(const CMatrix& other, double eps) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (std::abs(entries_[i] - other.entries_[i]) > eps) return false;
  }
  return true;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, std::abs(e));
  return m;
}

std::string CMatrix::to_string(int precision) const {
  std::ostringstream os;
  os.precision(precision);
  os << std::fixed;
  for (int i = 0; i < rows_; ++i) {
    os << (i == 0 ? "[" : " ");
    for (int j = 0; j < cols_; ++j) {
      const c64 v = (*this)(i, j);
      os << (j == 0 ? "" : "  ") << v.real()
         << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i";
    }
    os << (i == rows_ - 1 ? "]" : "\n");
  }
  return os.str();
}

CMatrix operator+(CMatrix a, const CMatrix& b) {
  a += b;
  return a;
}

CMatrix operator-(CMatrix a, const CMatrix& b) {
  a -= b;
  return a;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument(
        "operator*: inner dimensions differ: " + std::to_string(a.cols()) +
        " vs " + std::to_string(b.rows()));
  }
  CMatrix out(a.rows(), b.cols());
  kernels::matmul(a.data(), b.data(), out.data(), a.rows(), a.cols(),
                  b.cols());
  return out;
}

CMatrix operator*(c64 scalar, CMatrix m) {
  m *= scalar;
  return m;
}

CMatrix operator*(CMatrix m, c64 scalar) {
  m *= scalar;
  return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  kernels::kron(a.data(), a.rows(), a.cols(), b.data(), b.rows(), b.cols(),
                out.data());
  return out;
}

CMatrix partial_trace(const CMatrix& m, const std::vector<int>& dims,
                      const std::vector<int>& keep) {
  if (!m.is_square()) {
    throw std::invalid_argument("partial_trace: matrix not square");
  }
  long long product = 1;
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("partial_trace: dims must be >= 1");
    product *= d;
  }
  if (product != m.rows()) {
    throw std::invalid_argument(
        "partial_trace: dimension mismatch: product of dims = " +
        std::to_string(product) + " but matrix is " +
        std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  const int nsub = static_cast<int>(dims.size());
  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw std::invalid_argument("partial_trace: duplicate keep index");
  }
  for (int k : kept) {
    if (k < 0 || k >= nsub) {
      throw std::invalid_argument("partial_trace: keep index " +
                                  std::to_string(k) + " out of range");
    }
  }

  std::vector<bool> is_kept(nsub, false);
  for (int k : kept) is_kept[k] = true;

  // For every full index, precompute its kept-subsystem and traced-subsystem
  // components so the accumulation below is a flat double loop.
  const int dim = m.rows();
  int kept_dim = 1, traced_dim = 1;
  for (int s = 0; s < nsub; ++s) (is_kept[s] ? kept_dim : traced_dim) *= dims[s];

  std::vector<int> kept_part(dim), traced_part(dim);
  for (int idx = 0; idx < dim; ++idx) {
    int rem = idx, kp = 0, tp = 0;
    for (int s = 0; s < nsub; ++s) {
      // row-major: subsystem 0 is the most significant digit
      int stride = 1;
      for (int t = s + 1; t < nsub; ++t) stride *= dims[t];
      const int digit = (rem / stride) % dims[s];
      rem -= digit * stride;
      if (is_kept[s]) {
        kp = kp * dims[s] + digit;
      } else {
        tp = tp * dims[s] + digit;
      }
    }
    kept_part[idx] = kp;
    traced_part[idx] = tp;
  }
  (void)traced_dim;

  CMatrix out(kept_dim, kept_dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      if (traced_part[r] != traced_part[c]) continue;
      out(kept_part[r], kept_part[c]) += m(r, c);
    }
  }
  return out;
}

double frobenius_norm(const CMatrix& m) {
  double s = 0.0;
  const c64* p = m.data();
  for (std::size_t i = 0; i < m.size(); ++i) s += std::norm(p[i]);
  return std::sqrt(s);
}

double frobenius_distance(const CMatrix& a, const CMatrix& b) {
  check_same_shape(a, b, "frobenius_distance");
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) s += std::norm(a(i, j) - b(i, j));
  return std::sqrt(s);
}

c64 trace_product(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw std::invalid_argument("trace_product: incompatible shapes");
  }
  c64 t{0.0, 0.0};
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t += a(i, j) * b(j, i);
  return t;
}

c64 inner(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != 1 || b.cols() != 1 || a.rows() != b.rows()) {
    throw std::invalid_argument("inner: expects equal-length column vectors");
  }
  c64 t{0.0, 0.0};
  for (int i = 0; i < a.rows(); ++i) t += std::conj(a(i, 0)) * b(i, 0);
  return t;
}

CMatrix outer(const CMatrix& v) {
  if (v.cols() != 1) throw std::invalid_argument("outer: expects a column");
  CMatrix out(v.rows(), v.rows());
  for (int i = 0; i < v.rows(); ++i)
    for (int j = 0; j < v.rows(); ++j)
      out(i, j) = v(i, 0) * std::conj(v(j, 0));
  return out;
}

CMatrix basis_column(int d, int k) {
  if (k < 0 || k >= d) {
    throw std::invalid_argument("basis_column: index " + std::to_string(k) +
                                " out of range for dimension " +
                                std::to_string(d));
  }
  CMatrix v(d, 1);
  v(k, 0) = c64{1.0, 0.0};
  return v;
}

CMatrix uniform_column(int d) {
  CMatrix v(d, 1);
  const double a = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) v(i, 0) = c64{a, 0.0};
  return v;
}

double hermiticity_residual(const CMatrix& m) {
  if (!m.is_square()) return frobenius_norm(m);  // maximally non-Hermitian
  double r = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      r = std::max(r, std::abs(m(i, j) - std::conj(m(j, i))));
  return r;
}

double unitarity_residual(const CMatrix& u) {
  if (!u.is_square()) throw std::invalid_argument("unitarity_residual: not square");
  return frobenius_distance(u.adjoint() * u, CMatrix::identity(u.rows()));
}

const CMatrix& pauli_x() {
  static const CMatrix m = CMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  return m;
}

const CMatrix& pauli_y() {
  static const CMatrix m =
      CMatrix::from_rows({{0.0, c64{0.0, -1.0}}, {c64{0.0, 1.0}, 0.0}});
  return m;
}

const CMatrix& pauli_z() {
  static const CMatrix m = CMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
  return m;
}

const CMatrix& identity2() {
  static const CMatrix m = CMatrix::identity(2);
  return m;
}

}  // namespace krauscope
