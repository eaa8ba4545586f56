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

#include "krauscope/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "krauscope/rng.hpp"

namespace krauscope {

namespace {

// A <- A * J and V <- V * J where J is the identity except
// J[p,p] = c, J[p,q] = s_c, J[q,p] = -conj(s_c), J[q,q] = c.
void rotate_columns(CMatrix& a, int p, int q, double c, c64 s_c) {
  for (int r = 0; r < a.rows(); ++r) {
    const c64 ap = a(r, p);
    const c64 aq = a(r, q);
    a(r, p) = ap * c - aq * std::conj(s_c);
    a(r, q) = ap * s_c + aq * c;
  }
}

// A <- J' * A.
void rotate_rows(CMatrix& a, int p, int q, double c, c64 s_c) {
  for (int col = 0; col < a.cols(); ++col) {
    const c64 ap = a(p, col);
    const c64 aq = a(q, col);
    a(p, col) = ap * c - aq * s_c;
    a(q, col) = ap * std::conj(s_c) + aq * c;
  }
}

double offdiagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

EighResult eigh(const CMatrix& h, double herm_tol) {
  if (!h.is_square()) throw std::invalid_argument("eigh: matrix not square");
  const double herm_res = hermiticity_residual(h);
  if (herm_res > herm_tol) {
    throw std::invalid_argument("eigh: non-Hermitian input, residual " +
                                std::to_string(herm_res));
  }
  const int n = h.rows();

  // Work on the exactly Hermitian part.
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));

  CMatrix v = CMatrix::identity(n);
  const double scale = std::max(1.0, frobenius_norm(a));
  const double stop = 1e-14 * scale;
  constexpr int kMaxSweeps = 64;

  for (int sweep = 0; sweep < kMaxSweeps && n > 1; ++sweep) {
    if (offdiagonal_norm(a) <= stop) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const c64 apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-18 * scale) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const c64 phase = apq / mag;
        const c64 s_c = s * phase;

        rotate_columns(a, p, q, c, s_c);
        rotate_rows(a, p, q, c, s_c);
        // Clean up rounding: the pivot is zero by construction and the
        // diagonal stays real.
        a(p, q) = c64{0.0, 0.0};
        a(q, p) = c64{0.0, 0.0};
        a(p, p) = c64{a(p, p).real(), 0.0};
        a(q, q) = c64{a(q, q).real(), 0.0};

        rotate_columns(v, p, q, c, s_c);
      }
    }
  }

  EighResult out;
  out.eigenvalues.resize(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = a(i, i).real();
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return diag[x] < diag[y]; });

  out.eigenvectors = CMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.eigenvalues[j] = diag[order[j]];
    for (int i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
  }
  return out;
}

CMatrix expm_hermitian(const CMatrix& h, double scale) {
  EighResult eg;
  try {
    eg = eigh(h, 1e-10);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument(
        "expm_hermitian: input not Hermitian within 1e-10 (residual " +
        std::to_string(hermiticity_residual(h)) + ")");
  }
  const int n = h.rows();
  CMatrix phased(n, n);
  for (int j = 0; j < n; ++j) {
    const double angle = -scale * eg.eigenvalues[j];
    const c64 ph{std::cos(angle), std::sin(angle)};
    for (int i = 0; i < n; ++i)
      phased(i, j) = eg.eigenvectors(i, j) * ph;
  }
  return phased * eg.eigenvectors.adjoint();
}

CMatrix hermitian_sqrt(const CMatrix& psd) {
  EighResult eg = eigh(psd, 1e-8);
  const int n = psd.rows();
  CMatrix scaled(n, n);
  for (int j = 0; j < n; ++j) {
    const double root = std::sqrt(std::max(0.0, eg.eigenvalues[j]));
    for (int i = 0; i < n; ++i) scaled(i, j) = eg.eigenvectors(i, j) * root;
  }
  return scaled * eg.eigenvectors.adjoint();
}

namespace {

CMatrix ginibre(int d, Rng& rng) {
  CMatrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.complex_normal();
  return g;
}

// Removes the components of column j of m along columns [0, j) of basis.
void project_out(CMatrix& m, int j, const CMatrix& basis, int upto) {
  for (int i = 0; i < upto; ++i) {
    c64 overlap{0.0, 0.0};
    for (int r = 0; r < m.rows(); ++r)
      overlap += std::conj(basis(r, i)) * m(r, j);
    for (int r = 0; r < m.rows(); ++r) m(r, j) -= overlap * basis(r, i);
  }
}

double column_norm(const CMatrix& m, int j) {
  double s = 0.0;
  for (int r = 0; r < m.rows(); ++r) s += std::norm(m(r, j));
  return std::sqrt(s);
}

}  // namespace

CMatrix random_unitary(int d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("random_unitary: d must be >= 1");
  Rng rng(derive_seed(seed, {0x756e69}));
  CMatrix q(d, d);
  for (int j = 0; j < d; ++j) {
    // Draw a fresh Ginibre column; redraw in the (measure-zero) event that
    // it is numerically dependent on the span so far.
    double norm = 0.0;
    do {
      for (int r = 0; r < d; ++r) q(r, j) = rng.complex_normal();
      project_out(q, j, q, j);
      project_out(q, j, q, j);  // second pass for orthogonality to ~1e-15
      norm = column_norm(q, j);
    } while (norm < 1e-8);
    for (int r = 0; r < d; ++r) q(r, j) /= norm;
  }
  return q;
}

CMatrix random_density(int d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("random_density: d must be >= 1");
  Rng rng(derive_seed(seed, {0x726f}));
  const CMatrix g = ginibre(d, rng);
  CMatrix rho = g * g.adjoint();
  // Symmetrize away rounding and normalize the trace.
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const c64 avg = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
      rho(i, j) = avg;
      rho(j, i) = std::conj(avg);
    }
  const double tr = rho.trace().real();
  rho *= c64{1.0 / tr, 0.0};
  return rho;
}

CMatrix random_hermitian(int d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("random_hermitian: d must be >= 1");
  Rng rng(derive_seed(seed, {0x6865}));
  const CMatrix g = ginibre(d, rng);
  CMatrix h(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      h(i, j) = 0.5 * (g(i, j) + std::conj(g(j, i)));
  const EighResult eg = eigh(h, 1e-8);
  const double spectral =
      std::max(std::abs(eg.eigenvalues.front()), std::abs(eg.eigenvalues.back()));
  if (spectral > 0.0) h *= c64{1.0 / spectral, 0.0};
  return h;
}

CMatrix complete_to_unitary(const CMatrix& iso) {
  const int n = iso.rows();
  const int m = iso.cols();
  if (m > n) {
    throw std::invalid_argument(
        "complete_to_unitary: more columns than rows");
  }
  // Orthonormality check: iso' iso = I within 1e-10.
  double residual = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      c64 dot{0.0, 0.0};
      for (int r = 0; r < n; ++r) dot += std::conj(iso(r, i)) * iso(r, j);
      const c64 expect = (i == j) ? c64{1.0, 0.0} : c64{0.0, 0.0};
      residual = std::max(residual, std::abs(dot - expect));
    }
  }
  if (residual > 1e-10) {
    throw std::invalid_argument(
        "complete_to_unitary: columns not orthonormal, residual " +
        std::to_string(residual));
  }
  if (m == n) return iso;

  CMatrix u(n, n);
  for (int j = 0; j < m; ++j)
    for (int r = 0; r < n; ++r) u(r, j) = iso(r, j);

  // Deterministic completion: seeded Ginibre candidates orthogonalized
  // against everything placed so far.
  Rng rng(derive_seed(0xc0853a2ff31ULL, {static_cast<std::uint64_t>(n),
                                         static_cast<std::uint64_t>(m)}));
  for (int j = m; j < n; ++j) {
    double norm = 0.0;
    do {
      for (int r = 0; r < n; ++r) u(r, j) = rng.complex_normal();
      project_out(u, j, u, j);
      project_out(u, j, u, j);
      norm = column_norm(u, j);
    } while (norm < 1e-8);
    for (int r = 0; r < n; ++r) u(r, j) /= norm;
  }
  return u;
}

CMatrix dft_matrix(int d) {
  if (d < 1) throw std::invalid_argument("dft_matrix: d must be >= 1");
  CMatrix f(d, d);
  const double root = 1.0 / std::sqrt(static_cast<double>(d));
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const double angle =
          -2.0 * std::numbers::pi * static_cast<double>(a) * b / d;
      f(a, b) = c64{root * std::cos(angle), root * std::sin(angle)};
    }
  }
  return f;
}

}  // namespace krauscope
