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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "krauscope/kernels.hpp"
#include "krauscope/linalg.hpp"
#include "krauscope/matrix.hpp"
#include "krauscope/rng.hpp"

using namespace krauscope;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent oracle for the Hermitian exponential: scaling-and-squaring
// Taylor series of exp(-i*scale*h). Never touches the eigendecomposition
// path it checks.
CMatrix expm_series_oracle(const CMatrix& h, double scale) {
  const int d = h.rows();
  CMatrix m = h;
  m *= c64{0.0, -scale};
  int squarings = 0;
  double norm = frobenius_norm(m);
  while (norm > 0.25) {
    norm /= 2.0;
    ++squarings;
  }
  m *= c64{std::pow(0.5, squarings), 0.0};
  CMatrix result = CMatrix::identity(d);
  CMatrix term = CMatrix::identity(d);
  for (int k = 1; k <= 30; ++k) {
    term = term * m;
    term *= c64{1.0 / k, 0.0};
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

}  // namespace

TEST_CASE("kron: identity, scalar, and Pauli cases") {
  const CMatrix i2 = CMatrix::identity(2);
  CHECK(kron(i2, i2).approx_equal(CMatrix::identity(4), 1e-15));

  const CMatrix one = CMatrix::from_rows({{1.0}});
  const CMatrix b = random_density(3, 7);
  CHECK(kron(one, b).approx_equal(b, 1e-15));
  CHECK(kron(b, one).approx_equal(b, 1e-15));

  const CMatrix expected = CMatrix::from_rows({{0.0, 0.0, 1.0, 0.0},
                                               {0.0, 0.0, 0.0, -1.0},
                                               {1.0, 0.0, 0.0, 0.0},
                                               {0.0, -1.0, 0.0, 0.0}});
  CHECK(kron(pauli_x(), pauli_z()).approx_equal(expected, 1e-15));
}

TEST_CASE("kron: associativity across random operands") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CMatrix a = random_unitary(2, derive_seed(seed, {1}));
    const CMatrix b = random_unitary(3, derive_seed(seed, {2}));
    const CMatrix c = random_unitary(2, derive_seed(seed, {3}));
    CHECK(kron(kron(a, b), c).approx_equal(kron(a, kron(b, c)), 1e-13));
  }
}

TEST_CASE("partial_trace: product states, entanglement, identity") {
  const CMatrix rho_a = random_density(2, 11);
  const CMatrix rho_b = random_density(3, 12);
  const CMatrix joint = kron(rho_a, rho_b);

  CHECK(partial_trace(joint, {2, 3}, {0}).approx_equal(rho_a, 1e-12));
  CHECK(partial_trace(joint, {2, 3}, {1}).approx_equal(rho_b, 1e-12));

  // Maximally entangled two-qubit state: either marginal is I/2.
  const double r = 1.0 / std::sqrt(2.0);
  const CMatrix bell = CMatrix::column({c64{r, 0.0}, 0.0, 0.0, c64{r, 0.0}});
  CMatrix half = CMatrix::identity(2);
  half *= c64{0.5, 0.0};
  CHECK(partial_trace(outer(bell), {2, 2}, {0}).approx_equal(half, 1e-12));
  CHECK(partial_trace(outer(bell), {2, 2}, {1}).approx_equal(half, 1e-12));

  // Keeping everything is the identity operation.
  CHECK(partial_trace(joint, {2, 3}, {0, 1}).approx_equal(joint, 1e-15));
}

TEST_CASE("partial_trace: trace preservation and scaled factors") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CMatrix a = random_density(2, derive_seed(seed, {21}));
    CMatrix b = random_density(4, derive_seed(seed, {22}));
    b *= c64{0.7, 0.0};  // non-unit trace factor
    const CMatrix joint = kron(a, b);
    const c64 tb = b.trace();

    CMatrix expected_a = a;
    expected_a *= tb;
    CHECK(partial_trace(joint, {2, 4}, {0}).approx_equal(expected_a, 1e-12));
    CHECK(std::abs(partial_trace(joint, {2, 4}, {0}).trace() - joint.trace()) <
          1e-12);
  }
}

TEST_CASE("partial_trace: dimension mismatch and bad keep sets") {
  const CMatrix m = CMatrix::identity(6);
  CHECK_THROWS_AS(partial_trace(m, {2, 2}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(m, {2, 3}, {2}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(m, {2, 3}, {0, 0}), std::invalid_argument);
}

TEST_CASE("expm_hermitian: closed forms") {
  // exp(-i*pi*sx) = -I.
  CMatrix minus_i2 = CMatrix::identity(2);
  minus_i2 *= c64{-1.0, 0.0};
  CHECK(expm_hermitian(pauli_x(), kPi).approx_equal(minus_i2, 1e-12));

  // Zero angle is the identity.
  const CMatrix h = random_density(4, 33);
  CHECK(expm_hermitian(h, 0.0).approx_equal(CMatrix::identity(4), 1e-12));

  // Diagonal case.
  const CMatrix diag = CMatrix::diagonal({c64{1.0, 0.0}, c64{2.0, 0.0}});
  const CMatrix expected = CMatrix::diagonal(
      {c64{std::cos(0.5), -std::sin(0.5)}, c64{std::cos(1.0), -std::sin(1.0)}});
  CHECK(expm_hermitian(diag, 0.5).approx_equal(expected, 1e-12));
}

TEST_CASE("expm_hermitian: group property and unitarity") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const CMatrix h = random_hermitian(4, seed);
    const CMatrix lhs = expm_hermitian(h, 0.7) * expm_hermitian(h, 1.9);
    CHECK(lhs.approx_equal(expm_hermitian(h, 2.6), 1e-10));
    CHECK(unitarity_residual(expm_hermitian(h, 5.3)) < 1e-10);
  }
}

TEST_CASE("expm_hermitian: matches the series oracle, including large angles") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const CMatrix h = random_hermitian(3, derive_seed(seed, {44}));
    for (double scale : {0.1, 1.0, kPi, 11.0}) {
      CHECK(expm_hermitian(h, scale)
                .approx_equal(expm_series_oracle(h, scale), 1e-10));
    }
  }
}

TEST_CASE("expm_hermitian: rejects non-Hermitian input") {
  const CMatrix bad = CMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
  CHECK_THROWS_WITH_AS(expm_hermitian(bad, 1.0),
                       doctest::Contains("not Hermitian"),
                       std::invalid_argument);
}

TEST_CASE("eigh: reconstructs the input") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const int d = 2 + static_cast<int>(seed % 4);
    const CMatrix rho = random_density(d, derive_seed(seed, {55}));
    const EighResult eg = eigh(rho, 1e-10);
    std::vector<c64> diag(eg.eigenvalues.begin(), eg.eigenvalues.end());
    const CMatrix recon =
        eg.eigenvectors * CMatrix::diagonal(diag) * eg.eigenvectors.adjoint();
    CHECK(frobenius_distance(recon, rho) < 1e-12);
    CHECK(unitarity_residual(eg.eigenvectors) < 1e-12);
    for (std::size_t i = 1; i < eg.eigenvalues.size(); ++i) {
      CHECK(eg.eigenvalues[i] >= eg.eigenvalues[i - 1]);
    }
  }
}

TEST_CASE("random_unitary: defining properties") {
  // Dimension one gives a unit-modulus scalar.
  const CMatrix u1 = random_unitary(1, 99);
  CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) < 1e-12);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CMatrix u = random_unitary(5, seed);
    CHECK(unitarity_residual(u) <= 1e-12);
  }

  // Bit-identical across calls for a fixed seed.
  const CMatrix a = random_unitary(4, 1234);
  const CMatrix b = random_unitary(4, 1234);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(a(i, j) == b(i, j));
}

TEST_CASE("random_unitary: first-entry moment matches the invariant-measure "
          "value") {
  // Monte-Carlo estimate of E|U[0,0]|^2 at d = 2: expected 1/2.
  double sum = 0.0;
  const int n = 10000;
  for (int seed = 0; seed < n; ++seed) {
    const CMatrix u = random_unitary(2, static_cast<std::uint64_t>(seed));
    sum += std::norm(u(0, 0));
  }
  CHECK(std::abs(sum / n - 0.5) < 0.02);
}

TEST_CASE("random_density: defining properties") {
  const CMatrix one = random_density(1, 5);
  CHECK(std::abs(one(0, 0) - c64{1.0, 0.0}) < 1e-12);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CMatrix rho = random_density(4, seed);
    CHECK(std::abs(rho.trace() - c64{1.0, 0.0}) < 1e-12);
    CHECK(hermiticity_residual(rho) < 1e-12);
    const EighResult eg = eigh(rho, 1e-10);
    CHECK(eg.eigenvalues.front() >= -1e-12);
  }

  const CMatrix a = random_density(3, 777);
  const CMatrix b = random_density(3, 777);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(a(i, j) == b(i, j));
}

TEST_CASE("complete_to_unitary: passthrough, basis extension, property") {
  // A square unitary is returned unchanged.
  const CMatrix u = random_unitary(3, 8);
  const CMatrix same = complete_to_unitary(u);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(same(i, j) == u(i, j));

  // First column of I4 extends to a unitary with that first column.
  const CMatrix e0 = basis_column(4, 0);
  const CMatrix ext = complete_to_unitary(e0);
  CHECK(ext.rows() == 4);
  CHECK(ext.cols() == 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(ext(i, 0) - e0(i, 0)) == 0.0);
  CHECK(unitarity_residual(ext) <= 1e-10);

  // Random isometries: the leading columns of a Haar unitary.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 4 + static_cast<int>(seed % 3);
    const int m = 1 + static_cast<int>(seed % n);
    const CMatrix full = random_unitary(n, derive_seed(seed, {66}));
    CMatrix iso(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) iso(i, j) = full(i, j);
    const CMatrix completed = complete_to_unitary(iso);
    CHECK(unitarity_residual(completed) <= 1e-10);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) CHECK(completed(i, j) == iso(i, j));
  }
}

TEST_CASE("complete_to_unitary: rejects non-isometries") {
  CMatrix not_iso(3, 2);
  not_iso(0, 0) = c64{1.0, 0.0};
  not_iso(0, 1) = c64{1.0, 0.0};  // parallel columns
  CHECK_THROWS_WITH_AS(complete_to_unitary(not_iso),
                       doctest::Contains("not orthonormal"),
                       std::invalid_argument);

  CHECK_THROWS_AS(complete_to_unitary(CMatrix::identity(2) * c64{2.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("frobenius_distance: fixed values and errors") {
  const CMatrix m = random_density(3, 3);
  CHECK(frobenius_distance(m, m) == 0.0);

  CMatrix zero(2, 2);
  CHECK(frobenius_distance(CMatrix::identity(2), zero) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(frobenius_distance(pauli_x(), pauli_z()) ==
        doctest::Approx(2.0).epsilon(1e-14));

  CHECK_THROWS_AS(
      frobenius_distance(CMatrix::identity(2), CMatrix::identity(3)),
      std::invalid_argument);
}

TEST_CASE("CMatrix: shape validation and tolerance-based equality") {
  CHECK_THROWS_AS(CMatrix(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(CMatrix(2, -1), std::invalid_argument);

  const CMatrix a = CMatrix::identity(2);
  CMatrix b = a;
  b(0, 0) += c64{5e-11, 0.0};
  CHECK(a.approx_equal(b, 1e-10));
  CHECK_FALSE(a.approx_equal(b, 1e-12));
  CHECK_FALSE(a.approx_equal(CMatrix::identity(3), 1.0));
}

TEST_CASE("dft_matrix: unitary with flat magnitudes") {
  for (int d : {2, 3, 5, 8}) {
    const CMatrix f = dft_matrix(d);
    CHECK(unitarity_residual(f) < 1e-12);
    const double expected = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        CHECK(std::abs(std::abs(f(i, j)) - expected) < 1e-12);
  }
}

TEST_CASE("kernels: parallel variants are bit-identical to the serial "
          "reference") {
  Rng rng(2024);
  for (int trial = 0; trial < 4; ++trial) {
    const int m = 5 + trial * 31;
    const int k = 7 + trial * 17;
    const int n = 3 + trial * 23;
    CMatrix a(m, k), b(k, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j) a(i, j) = rng.complex_normal();
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = rng.complex_normal();

    CMatrix serial_out(m, n), parallel_out(m, n);
    kernels::matmul_serial(a.data(), b.data(), serial_out.data(), m, k, n);
    kernels::matmul_parallel(a.data(), b.data(), parallel_out.data(), m, k, n);
    bool matmul_equal = true;
    for (std::size_t i = 0; i < serial_out.size(); ++i) {
      matmul_equal &= serial_out.data()[i] == parallel_out.data()[i];
    }
    CHECK(matmul_equal);

    CMatrix ks(m * k, k * n), kp(m * k, k * n);
    kernels::kron_serial(a.data(), m, k, b.data(), k, n, ks.data());
    kernels::kron_parallel(a.data(), m, k, b.data(), k, n, kp.data());
    bool kron_equal = true;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      kron_equal &= ks.data()[i] == kp.data()[i];
    }
    CHECK(kron_equal);
  }
}

TEST_CASE("kernels: execution policy switch") {
  const kernels::Execution saved = kernels::execution();
  kernels::set_execution(kernels::Execution::Serial);
  CHECK_FALSE(kernels::parallel_enabled());
  kernels::set_execution(kernels::Execution::Parallel);
  CHECK(kernels::parallel_enabled());
  kernels::set_execution(saved);
}

TEST_CASE("rng: derived streams are deterministic and distinct") {
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));

  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
}
