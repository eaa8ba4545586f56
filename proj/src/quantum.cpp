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

#include "krauscope/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "krauscope/linalg.hpp"

namespace krauscope {

namespace {
constexpr double kHermTol = 1e-10;
constexpr double kTraceTol = 1e-10;
constexpr double kEigTol = -1e-10;
constexpr double kCompletenessTol = 1e-9;
constexpr double kUnitaryTol = 1e-10;
constexpr double kStateNormTol = 1e-12;
}  // namespace

DensityMatrix::DensityMatrix(CMatrix m) : mat_(std::move(m)) {
  if (!mat_.is_square()) {
    throw std::invalid_argument("DensityMatrix: matrix not square");
  }
  const double herm = hermiticity_residual(mat_);
  if (herm > kHermTol) {
    throw std::invalid_argument("DensityMatrix: not Hermitian, residual " +
                                std::to_string(herm));
  }
  const c64 tr = mat_.trace();
  if (std::abs(tr - c64{1.0, 0.0}) > kTraceTol) {
    throw std::invalid_argument("DensityMatrix: trace deviates from 1 by " +
                                std::to_string(std::abs(tr - c64{1.0, 0.0})));
  }
  const EighResult eg = eigh(mat_, kHermTol);
  if (eg.eigenvalues.front() < kEigTol) {
    throw std::invalid_argument(
        "DensityMatrix: negative eigenvalue " +
        std::to_string(eg.eigenvalues.front()));
  }
}

DensityMatrix DensityMatrix::pure(const CMatrix& state_column) {
  if (state_column.cols() != 1) {
    throw std::invalid_argument("DensityMatrix::pure: expects a column");
  }
  const double norm = std::sqrt(inner(state_column, state_column).real());
  if (std::abs(norm - 1.0) > 1e-9) {
    throw std::invalid_argument("DensityMatrix::pure: state not normalized");
  }
  return DensityMatrix(outer(state_column));
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  CMatrix m = CMatrix::identity(d);
  m *= c64{1.0 / d, 0.0};
  return DensityMatrix(std::move(m));
}

KrausSet::KrausSet(std::vector<CMatrix> operators) : ops_(std::move(operators)) {
  if (ops_.empty()) throw std::invalid_argument("KrausSet: empty operator list");
  const int d = ops_.front().rows();
  for (const CMatrix& a : ops_) {
    if (!a.is_square() || a.rows() != d) {
      throw std::invalid_argument("KrausSet: operators must all be " +
                                  std::to_string(d) + "x" + std::to_string(d));
    }
  }
  CMatrix sum(d, d);
  for (const CMatrix& a : ops_) sum += a.adjoint() * a;
  completeness_residual_ = frobenius_distance(sum, CMatrix::identity(d));
  if (completeness_residual_ > kCompletenessTol) {
    throw std::invalid_argument(
        "KrausSet: completeness violated, ||sum A'A - I||_F = " +
        std::to_string(completeness_residual_));
  }
}

namespace {
void validate_dilation(const CMatrix& coupling, const CMatrix& env_state,
                       const CMatrix& env_basis) {
  if (env_state.cols() != 1) {
    throw std::invalid_argument("Dilation: env_state must be a column");
  }
  const int d_e = env_state.rows();
  if (!coupling.is_square() || coupling.rows() % d_e != 0) {
    throw std::invalid_argument(
        "Dilation: coupling dimension not a multiple of the environment");
  }
  const double norm_dev = std::abs(inner(env_state, env_state).real() - 1.0);
  if (norm_dev > kStateNormTol) {
    throw std::invalid_argument("Dilation: env_state norm deviates by " +
                                std::to_string(norm_dev));
  }
  const double ures = unitarity_residual(coupling);
  if (ures > kUnitaryTol) {
    throw std::invalid_argument("Dilation: coupling not unitary, residual " +
                                std::to_string(ures));
  }
  if (env_basis.rows() != d_e || env_basis.cols() != d_e ||
      unitarity_residual(env_basis) > kUnitaryTol) {
    throw std::invalid_argument("Dilation: pointer basis must be a " +
                                std::to_string(d_e) + "x" +
                                std::to_string(d_e) + " unitary");
  }
}
}  // namespace

Dilation::Dilation(CMatrix coupling_in, CMatrix env_state_in)
    : coupling(std::move(coupling_in)),
      env_state(std::move(env_state_in)),
      env_basis(CMatrix::identity(env_state.rows() > 0 ? env_state.rows() : 1)) {
  validate_dilation(coupling, env_state, env_basis);
}

Dilation::Dilation(CMatrix coupling_in, CMatrix env_state_in,
                   CMatrix env_basis_in)
    : coupling(std::move(coupling_in)),
      env_state(std::move(env_state_in)),
      env_basis(std::move(env_basis_in)) {
  validate_dilation(coupling, env_state, env_basis);
}

CMatrix Dilation::pointer_state(int k) const {
  if (k < 0 || k >= env_dim()) {
    throw std::out_of_range("Dilation: pointer index " + std::to_string(k) +
                            " out of range for d_e = " +
                            std::to_string(env_dim()));
  }
  CMatrix col(env_dim(), 1);
  for (int r = 0; r < env_dim(); ++r) col(r, 0) = env_basis(r, k);
  return col;
}

CMatrix kraus_from_dilation(const Dilation& dil, int k) {
  const int d_s = dil.system_dim();
  const int d_e = dil.env_dim();
  const CMatrix pointer = dil.pointer_state(k);

  CMatrix a(d_s, d_s);
  for (int i = 0; i < d_s; ++i) {
    for (int j = 0; j < d_s; ++j) {
      c64 sum{0.0, 0.0};
      for (int e = 0; e < d_e; ++e) {
        for (int f = 0; f < d_e; ++f) {
          sum += std::conj(pointer(e, 0)) *
                 dil.coupling(i * d_e + e, j * d_e + f) * dil.env_state(f, 0);
        }
      }
      a(i, j) = sum;
    }
  }
  return a;
}

CMatrix swap_factors(int dim_first, int dim_second) {
  CMatrix t(dim_first * dim_second, dim_first * dim_second);
  for (int a = 0; a < dim_first; ++a)
    for (int b = 0; b < dim_second; ++b)
      t(b * dim_first + a, a * dim_second + b) = c64{1.0, 0.0};
  return t;
}

Dilation dilation_from_kraus(const KrausSet& ks, const CMatrix& env_state) {
  const int d_s = ks.system_dim();
  const int d_e = ks.env_dim();
  if (env_state.cols() != 1 || env_state.rows() != d_e) {
    throw std::invalid_argument(
        "dilation_from_kraus: env_state must be a column of length " +
        std::to_string(d_e));
  }
  for (int k = 0; k < d_e; ++k) {
    if (std::abs(env_state(k, 0)) < 1e-8) {
      throw std::invalid_argument(
          "dilation_from_kraus: env_state component " + std::to_string(k) +
          " vanishes; every pointer-basis overlap must be nonzero");
    }
  }

  // Isometry in env(x)system ordering so the embedded input states occupy
  // the leading columns: W[(k*d_s + s), j] = A_k[s, j].
  CMatrix w(d_s * d_e, d_s);
  for (int k = 0; k < d_e; ++k)
    for (int s = 0; s < d_s; ++s)
      for (int j = 0; j < d_s; ++j) w(k * d_s + s, j) = ks.op(k)(s, j);

  const CMatrix w_full = complete_to_unitary(w);
  const CMatrix t = swap_factors(d_s, d_e);  // system(x)env -> env(x)system
  const CMatrix u0 = t.adjoint() * w_full * t;

  // Rotate the environment so the requested state plays the role of the
  // reference column: R maps env_state to the first pointer state exactly.
  const CMatrix q = complete_to_unitary(env_state);
  const CMatrix r = q.adjoint();
  const CMatrix u_se = u0 * kron(CMatrix::identity(d_s), r);

  return Dilation(u_se, env_state);
}

Dilation dilation_from_kraus(const KrausSet& ks) {
  return dilation_from_kraus(ks, uniform_column(ks.env_dim()));
}

CMatrix povm_from_kraus(const CMatrix& a) {
  if (!a.is_square()) {
    throw std::invalid_argument("povm_from_kraus: matrix not square");
  }
  return a.adjoint() * a;
}

double born_probability(const DensityMatrix& rho, const CMatrix& e) {
  if (e.rows() != rho.dim() || e.cols() != rho.dim()) {
    throw std::invalid_argument("born_probability: shape mismatch");
  }
  const double herm = hermiticity_residual(e);
  if (herm > 1e-8) {
    throw std::invalid_argument(
        "born_probability: effect not Hermitian, residual " +
        std::to_string(herm));
  }
  const c64 value = trace_product(rho.mat(), e);
  if (std::abs(value.imag()) > 1e-12) {
    throw std::invalid_argument(
        "born_probability: trace has imaginary part " +
        std::to_string(value.imag()));
  }
  double p = value.real();
  if (p < -1e-10 || p > 1.0 + 1e-10) {
    throw std::invalid_argument(
        "born_probability: value " + std::to_string(p) +
        " outside [0,1]; effect is not a valid POVM element here");
  }
  return std::clamp(p, 0.0, 1.0);
}

DensityMatrix apply_channel(const KrausSet& ks, const DensityMatrix& rho) {
  if (ks.system_dim() != rho.dim()) {
    throw std::invalid_argument("apply_channel: dimension mismatch");
  }
  CMatrix out(rho.dim(), rho.dim());
  for (const CMatrix& a : ks.ops()) out += a * rho.mat() * a.adjoint();
  // Symmetrize away rounding before validation.
  for (int i = 0; i < out.rows(); ++i)
    for (int j = i; j < out.cols(); ++j) {
      const c64 avg = 0.5 * (out(i, j) + std::conj(out(j, i)));
      out(i, j) = avg;
      out(j, i) = std::conj(avg);
    }
  return DensityMatrix(std::move(out));
}

}  // namespace krauscope
