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

#include "krauscope/linalg.hpp"
#include "krauscope/quantum.hpp"
#include "krauscope/rng.hpp"
#include "krauscope/verify.hpp"

using namespace krauscope;

namespace {

// Coupling that flips the environment qubit when the system is in |1>:
// system-controlled NOT in system (x) environment ordering.
CMatrix controlled_flip() {
  const CMatrix p0 = outer(basis_column(2, 0));
  const CMatrix p1 = outer(basis_column(2, 1));
  return kron(p0, CMatrix::identity(2)) + kron(p1, pauli_x());
}

CMatrix projector(int d, int k) { return outer(basis_column(d, k)); }

}  // namespace

TEST_CASE("DensityMatrix: validation catches each violated invariant") {
  CHECK_THROWS_WITH_AS(DensityMatrix(CMatrix::from_rows({{0.5, 0.3}, {0.0, 0.5}})),
                       doctest::Contains("not Hermitian"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(DensityMatrix(CMatrix::identity(2)),
                       doctest::Contains("trace"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      DensityMatrix(CMatrix::diagonal({c64{1.5, 0.0}, c64{-0.5, 0.0}})),
      doctest::Contains("negative eigenvalue"), std::invalid_argument);

  const DensityMatrix ok(random_density(3, 1));
  CHECK(ok.dim() == 3);
}

TEST_CASE("KrausSet: completeness is enforced at construction") {
  CHECK_THROWS_WITH_AS(
      KrausSet({CMatrix::identity(2), CMatrix::identity(2)}),
      doctest::Contains("completeness"), std::invalid_argument);

  const KrausSet dephasing({projector(2, 0), projector(2, 1)});
  CHECK(dephasing.env_dim() == 2);
  CHECK(dephasing.system_dim() == 2);
  CHECK(dephasing.completeness_residual() < 1e-14);

  CHECK_THROWS_AS(KrausSet({}), std::invalid_argument);
}

TEST_CASE("kraus_from_dilation: controlled-flip block read-off") {
  // Environment prepared in its first pointer state: the outcome blocks are
  // the two system projectors.
  const Dilation ground(controlled_flip(), basis_column(2, 0));
  CHECK(kraus_from_dilation(ground, 0).approx_equal(projector(2, 0), 1e-14));
  CHECK(kraus_from_dilation(ground, 1).approx_equal(projector(2, 1), 1e-14));

  // Environment in the balanced state: both outcomes give I/sqrt(2).
  const Dilation balanced(controlled_flip(), uniform_column(2));
  CMatrix expected = CMatrix::identity(2);
  expected *= c64{1.0 / std::sqrt(2.0), 0.0};
  CHECK(kraus_from_dilation(balanced, 0).approx_equal(expected, 1e-14));
  CHECK(kraus_from_dilation(balanced, 1).approx_equal(expected, 1e-14));

  CHECK_THROWS_AS(kraus_from_dilation(balanced, 2), std::out_of_range);
  CHECK_THROWS_AS(kraus_from_dilation(balanced, -1), std::out_of_range);
}

TEST_CASE("kraus_from_dilation: random couplings give complete families") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int d = 3;
    const Dilation dil(random_unitary(d * d, derive_seed(seed, {0xa1})),
                       uniform_column(d));
    CMatrix sum(d, d);
    for (int k = 0; k < d; ++k) {
      const CMatrix a = kraus_from_dilation(dil, k);
      sum += a.adjoint() * a;
    }
    CHECK(frobenius_distance(sum, CMatrix::identity(d)) < 1e-12);
  }
}

TEST_CASE("dilation_from_kraus: trivial channel embeds as the identity") {
  const KrausSet trivial({CMatrix::identity(3)});
  const Dilation dil = dilation_from_kraus(trivial);
  CHECK(dil.env_dim() == 1);
  CHECK(dil.coupling.approx_equal(CMatrix::identity(3), 1e-12));
  CHECK(kraus_from_dilation(dil, 0).approx_equal(CMatrix::identity(3), 1e-12));
}

TEST_CASE("dilation_from_kraus: dephasing round trip") {
  const KrausSet dephasing({projector(2, 0), projector(2, 1)});
  const Dilation dil = dilation_from_kraus(dephasing);
  CHECK(kraus_from_dilation(dil, 0).approx_equal(projector(2, 0), 1e-12));
  CHECK(kraus_from_dilation(dil, 1).approx_equal(projector(2, 1), 1e-12));
}

TEST_CASE("dilation_from_kraus: both members of the shared-effect pair round "
          "trip") {
  const auto [plain, rotated] = shared_effect_pair();
  for (const KrausSet& ks : {plain, rotated}) {
    const Dilation dil = dilation_from_kraus(ks);
    for (int k = 0; k < ks.env_dim(); ++k) {
      CHECK(kraus_from_dilation(dil, k).approx_equal(ks.op(k), 1e-12));
    }
  }
}

TEST_CASE("dilation_from_kraus: random families round trip across dimensions") {
  for (int d_s = 2; d_s <= 4; ++d_s) {
    for (int d_e = 2; d_e <= 4; ++d_e) {
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        // Draw a valid family from a random coupling, then re-embed it.
        const Dilation source(
            random_unitary(d_s * d_e,
                           derive_seed(seed, {static_cast<std::uint64_t>(d_s),
                                              static_cast<std::uint64_t>(d_e)})),
            uniform_column(d_e));
        std::vector<CMatrix> ops;
        for (int k = 0; k < d_e; ++k) {
          ops.push_back(kraus_from_dilation(source, k));
        }
        const KrausSet ks(ops);
        const Dilation rebuilt = dilation_from_kraus(ks);
        for (int k = 0; k < d_e; ++k) {
          CHECK(kraus_from_dilation(rebuilt, k).approx_equal(ks.op(k), 1e-10));
        }
      }
    }
  }
}

TEST_CASE("dilation_from_kraus: rejects vanishing environment components") {
  const KrausSet dephasing({projector(2, 0), projector(2, 1)});
  CHECK_THROWS_WITH_AS(
      dilation_from_kraus(dephasing, basis_column(2, 0)),
      doctest::Contains("vanishes"), std::invalid_argument);
}

TEST_CASE("povm_from_kraus: shared effect and the zero operator") {
  CMatrix half = CMatrix::identity(2);
  half *= c64{0.5, 0.0};

  CMatrix plain = CMatrix::identity(2);
  plain *= c64{1.0 / std::sqrt(2.0), 0.0};
  CHECK(povm_from_kraus(plain).approx_equal(half, 1e-14));

  CMatrix rotated = pauli_x() + pauli_z();
  rotated *= c64{0.5, 0.0};
  CHECK(povm_from_kraus(rotated).approx_equal(half, 1e-14));

  CHECK(povm_from_kraus(CMatrix(2, 2)).approx_equal(CMatrix(2, 2), 1e-15));
}

TEST_CASE("povm elements from any dilation are PSD and sum to the identity") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int d_s = 2 + static_cast<int>(seed % 3);
    const int d_e = 2 + static_cast<int>((seed / 3) % 3);
    const Dilation dil(
        random_unitary(d_s * d_e, derive_seed(seed, {0xb2})),
        uniform_column(d_e));
    CMatrix sum(d_s, d_s);
    for (int k = 0; k < d_e; ++k) {
      const CMatrix e = povm_from_kraus(kraus_from_dilation(dil, k));
      const EighResult eg = eigh(e, 1e-10);
      CHECK(eg.eigenvalues.front() >= -1e-12);
      sum += e;
    }
    CHECK(frobenius_distance(sum, CMatrix::identity(d_s)) < 1e-10);
  }
}

TEST_CASE("born_probability: fixed values") {
  CMatrix half = CMatrix::identity(2);
  half *= c64{0.5, 0.0};
  CHECK(born_probability(DensityMatrix::maximally_mixed(2), half) ==
        doctest::Approx(0.25).epsilon(1e-12));

  // diag(1/4, 0) effect on the ground state.
  CMatrix e1 = CMatrix::identity(2) + pauli_z();
  e1 *= c64{0.125, 0.0};
  const DensityMatrix ground = DensityMatrix::pure(basis_column(2, 0));
  CHECK(born_probability(ground, e1) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("born_probability: a complete effect family sums to one") {
  CMatrix e0 = CMatrix::identity(2);
  e0 *= c64{0.5, 0.0};
  CMatrix e1 = CMatrix::identity(2) + pauli_z();
  e1 *= c64{0.125, 0.0};
  CMatrix e2 = (CMatrix::identity(2) * c64{3.0, 0.0}) - pauli_z();
  e2 *= c64{0.125, 0.0};

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DensityMatrix rho(random_density(2, derive_seed(seed, {0xc3})));
    const double total = born_probability(rho, e0) +
                         born_probability(rho, e1) + born_probability(rho, e2);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("born_probability: invalid effects are rejected") {
  const DensityMatrix rho = DensityMatrix::maximally_mixed(2);
  CHECK_THROWS_WITH_AS(
      born_probability(rho, CMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}})),
      doctest::Contains("not Hermitian"), std::invalid_argument);

  CMatrix negative = CMatrix::identity(2);
  negative *= c64{-0.5, 0.0};
  CHECK_THROWS_WITH_AS(born_probability(rho, negative),
                       doctest::Contains("outside [0,1]"),
                       std::invalid_argument);
}

TEST_CASE("apply_channel: identity, dephasing, and trace preservation") {
  const DensityMatrix rho(random_density(2, 17));
  const KrausSet trivial({CMatrix::identity(2)});
  CHECK(apply_channel(trivial, rho).mat().approx_equal(rho.mat(), 1e-12));

  const KrausSet dephasing({projector(2, 0), projector(2, 1)});
  const DensityMatrix plus = DensityMatrix::pure(uniform_column(2));
  CMatrix half = CMatrix::identity(2);
  half *= c64{0.5, 0.0};
  CHECK(apply_channel(dephasing, plus).mat().approx_equal(half, 1e-12));

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dilation dil(random_unitary(6, derive_seed(seed, {0xd4})),
                       uniform_column(3));
    std::vector<CMatrix> ops;
    for (int k = 0; k < 3; ++k) ops.push_back(kraus_from_dilation(dil, k));
    const KrausSet ks(ops);
    const DensityMatrix in(random_density(2, derive_seed(seed, {0xd5})));
    const DensityMatrix out = apply_channel(ks, in);
    CHECK(std::abs(out.mat().trace() - c64{1.0, 0.0}) < 1e-12);
  }
}

TEST_CASE("apply_channel: agrees with coupling-then-trace") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int d_s = 2 + static_cast<int>(seed % 2);
    const int d_e = 2 + static_cast<int>(seed % 3);
    const Dilation dil(
        random_unitary(d_s * d_e, derive_seed(seed, {0xe6})),
        uniform_column(d_e));
    std::vector<CMatrix> ops;
    for (int k = 0; k < d_e; ++k) ops.push_back(kraus_from_dilation(dil, k));
    const KrausSet ks(ops);
    const DensityMatrix rho(random_density(d_s, derive_seed(seed, {0xe7})));

    const CMatrix joint = dil.coupling *
                          kron(rho.mat(), outer(dil.env_state)) *
                          dil.coupling.adjoint();
    const CMatrix traced = partial_trace(joint, {d_s, d_e}, {0});
    CHECK(frobenius_distance(apply_channel(ks, rho).mat(), traced) < 1e-10);
  }
}

TEST_CASE("apply_channel: dimension mismatch") {
  const KrausSet dephasing({projector(2, 0), projector(2, 1)});
  CHECK_THROWS_AS(apply_channel(dephasing, DensityMatrix::maximally_mixed(3)),
                  std::invalid_argument);
}

TEST_CASE("swap_factors: exchanges tensor factors") {
  const CMatrix a = basis_column(2, 1);
  const CMatrix b = basis_column(3, 2);
  const CMatrix t = swap_factors(2, 3);
  const CMatrix swapped = t * kron(a, b);
  CHECK(swapped.approx_equal(kron(b, a), 1e-15));
}

TEST_CASE("Dilation: construction validates its pieces") {
  CHECK_THROWS_WITH_AS(Dilation(CMatrix::identity(4) * c64{2.0, 0.0},
                                basis_column(2, 0)),
                       doctest::Contains("not unitary"), std::invalid_argument);

  CMatrix off_norm = basis_column(2, 0);
  off_norm(0, 0) = c64{0.9, 0.0};
  CHECK_THROWS_WITH_AS(Dilation(CMatrix::identity(4), off_norm),
                       doctest::Contains("norm"), std::invalid_argument);
}

TEST_CASE("Dilation: a rotated pointer basis reads off different operators") {
  // With the computational pointer basis the controlled flip dephases; in
  // the balanced basis the same coupling realizes unitary outcomes.
  const CMatrix had = CMatrix::from_rows(
      {{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)},
       {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)}});
  const Dilation rotated(controlled_flip(), basis_column(2, 0), had);

  // <+|U|0_E> = (P0 + P1 sx acting amplitudes)/sqrt2 = I/sqrt2 on the block.
  CMatrix expected0 = CMatrix::identity(2);
  expected0 *= c64{1.0 / std::sqrt(2.0), 0.0};
  CHECK(kraus_from_dilation(rotated, 0).approx_equal(expected0, 1e-12));

  // <-|U|0_E> = (P0 - P1)/sqrt2 = sz/sqrt2.
  CMatrix expected1 = pauli_z();
  expected1 *= c64{1.0 / std::sqrt(2.0), 0.0};
  CHECK(kraus_from_dilation(rotated, 1).approx_equal(expected1, 1e-12));

  CMatrix sum(2, 2);
  for (int k = 0; k < 2; ++k) {
    const CMatrix a = kraus_from_dilation(rotated, k);
    sum += a.adjoint() * a;
  }
  CHECK(frobenius_distance(sum, CMatrix::identity(2)) < 1e-12);
}
