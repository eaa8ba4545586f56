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

#include "krauscope/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "krauscope/rng.hpp"

namespace krauscope {

namespace {

constexpr double kProbeOverlapTol = 1e-8;
constexpr double kUnitaryTol = 1e-10;
constexpr double kNormalizationGuard = 1e-10;

// Stream tags for the two quadrature settings.
constexpr std::uint64_t kTagQuadX = 0x58;
constexpr std::uint64_t kTagQuadY = 0x59;

// Shots per RNG chunk. Chunking fixes the partition of the sample stream so
// parallel and serial evaluation produce identical estimates.
constexpr long kChunkShots = 1L << 14;

}  // namespace

void ProtocolInstance::validate() const {
  if (probe_state.rows() != 2 || probe_state.cols() != 1) {
    throw std::invalid_argument("ProtocolInstance: probe must be a qubit column");
  }
  const double norm_dev =
      std::abs(inner(probe_state, probe_state).real() - 1.0);
  if (norm_dev > 1e-10) {
    throw std::invalid_argument("ProtocolInstance: probe state not normalized");
  }
  if (std::abs(probe_state(0, 0)) < kProbeOverlapTol ||
      std::abs(probe_state(1, 0)) < kProbeOverlapTol) {
    throw std::invalid_argument(
        "ProtocolInstance: probe overlap with |0> or |1> vanishes; the "
        "normalization would be zero");
  }
  const int d = system_dim();
  if (branch0.rows() != d || branch0.cols() != d || branch1.rows() != d ||
      branch1.cols() != d) {
    throw std::invalid_argument(
        "ProtocolInstance: branch unitaries must match the system dimension " +
        std::to_string(d));
  }
  if (unitarity_residual(branch0) > kUnitaryTol) {
    throw std::invalid_argument("ProtocolInstance: branch0 not unitary");
  }
  if (unitarity_residual(branch1) > kUnitaryTol) {
    throw std::invalid_argument("ProtocolInstance: branch1 not unitary");
  }
  if (dilation && dilation->system_dim() != d) {
    throw std::invalid_argument(
        "ProtocolInstance: dilation system dimension " +
        std::to_string(dilation->system_dim()) + " does not match " +
        std::to_string(d));
  }
}

c64 ExpectationRecord::ratio() const {
  if (std::abs(normalization) <= kNormalizationGuard) {
    throw std::domain_error(
        "ExpectationRecord: normalization magnitude " +
        std::to_string(std::abs(normalization)) + " too small to divide by");
  }
  return value / normalization;
}

CMatrix build_controlled_evolution(const ProtocolInstance& inst) {
  inst.validate();
  const CMatrix p0 = outer(basis_column(2, 0));
  const CMatrix p1 = outer(basis_column(2, 1));

  if (!inst.dilation) {
    return kron(p0, inst.branch0) + kron(p1, inst.branch1);
  }
  const int d_e = inst.env_dim();
  const CMatrix eye_e = CMatrix::identity(d_e);
  const CMatrix block0 = kron(inst.branch0, eye_e);
  const CMatrix block1 = inst.dilation->coupling * kron(inst.branch1, eye_e);
  return kron(p0, block0) + kron(p1, block1);
}

DensityMatrix evolve(const ProtocolInstance& inst) {
  const CMatrix u = build_controlled_evolution(inst);
  CMatrix rho0 = kron(outer(inst.probe_state), inst.input_state.mat());
  if (inst.dilation) rho0 = kron(rho0, outer(inst.dilation->env_state));
  CMatrix rho_t = u * rho0 * u.adjoint();
  // Unitary conjugation preserves the state; symmetrize rounding only.
  for (int i = 0; i < rho_t.rows(); ++i)
    for (int j = i; j < rho_t.cols(); ++j) {
      const c64 avg = 0.5 * (rho_t(i, j) + std::conj(rho_t(j, i)));
      rho_t(i, j) = avg;
      rho_t(j, i) = std::conj(avg);
    }
  return DensityMatrix(std::move(rho_t));
}

namespace {

// Shared argument checks for the expectation evaluators.
void check_expectation_args(const ProtocolInstance& inst,
                            const DensityMatrix& rho_t, int sys_index,
                            std::optional<int> env_index) {
  const int d_s = inst.system_dim();
  const int d_e = inst.dilation ? inst.env_dim() : 1;
  const int expected = 2 * d_s * (inst.dilation ? d_e : 1);
  if (rho_t.dim() != expected) {
    throw std::invalid_argument("expectation: evolved state has dimension " +
                                std::to_string(rho_t.dim()) + ", expected " +
                                std::to_string(expected));
  }
  if (sys_index < 0 || sys_index >= d_s) {
    throw std::out_of_range("expectation: system index " +
                            std::to_string(sys_index) + " out of range");
  }
  if (env_index) {
    if (!inst.dilation) {
      throw std::invalid_argument(
          "expectation: environment index given but the instance has no "
          "dilation");
    }
    if (*env_index < 0 || *env_index >= d_e) {
      throw std::out_of_range("expectation: environment index " +
                              std::to_string(*env_index) + " out of range");
    }
  }
}

c64 normalization_for(const ProtocolInstance& inst,
                      std::optional<int> env_index) {
  // 2 <chi|0><1|chi>, times the environment overlap when an outcome is
  // selected.
  c64 n = 2.0 * std::conj(inst.probe_state(0, 0)) * inst.probe_state(1, 0);
  if (env_index) {
    n *= inner(inst.dilation->env_state,
               inst.dilation->pointer_state(*env_index));
  }
  return n;
}

// Projector factor on system (x) environment for the requested indices.
CMatrix measurement_tail(const ProtocolInstance& inst, int sys_index,
                         std::optional<int> env_index) {
  const CMatrix pi_s = outer(basis_column(inst.system_dim(), sys_index));
  if (!inst.dilation) return pi_s;
  if (!env_index) return kron(pi_s, CMatrix::identity(inst.env_dim()));
  return kron(pi_s, outer(inst.dilation->pointer_state(*env_index)));
}

}  // namespace

ExpectationRecord exact_expectation(const ProtocolInstance& inst,
                                    const DensityMatrix& rho_t, int sys_index,
                                    std::optional<int> env_index) {
  check_expectation_args(inst, rho_t, sys_index, env_index);
  const CMatrix tail = measurement_tail(inst, sys_index, env_index);
  const c64 x = trace_product(rho_t.mat(), kron(pauli_x(), tail));
  const c64 y = trace_product(rho_t.mat(), kron(pauli_y(), tail));

  ExpectationRecord rec;
  rec.value = c64{x.real(), y.real()};
  rec.normalization = normalization_for(inst, env_index);
  return rec;
}

namespace {

// Born probabilities of the joint outcomes when the probe is measured in the
// eigenbasis given by the columns of probe_basis, the system in the
// computational basis, and the environment (if any) in the pointer basis.
std::vector<double> outcome_probabilities(const ProtocolInstance& inst,
                                          const DensityMatrix& rho_t,
                                          const CMatrix& probe_basis) {
  CMatrix basis = inst.dilation
                      ? kron(probe_basis,
                             kron(CMatrix::identity(inst.system_dim()),
                                  inst.dilation->env_basis))
                      : kron(probe_basis, CMatrix::identity(inst.system_dim()));
  const CMatrix rotated = basis.adjoint() * rho_t.mat() * basis;
  const int dim = rotated.rows();
  std::vector<double> probs(dim);
  double total = 0.0;
  for (int i = 0; i < dim; ++i) {
    probs[i] = std::max(0.0, rotated(i, i).real());
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return probs;
}

struct QuadratureEstimate {
  double mean = 0.0;
  double se = 0.0;
};

// Empirical mean of (+/-1) * [system outcome == sys_index] * [env outcome ==
// env_index] over `shots` draws from `probs`. Chunked so the estimate is
// the same whether chunks run serially or in parallel.
QuadratureEstimate sample_quadrature(const std::vector<double>& probs,
                                     int d_s, int d_e, int sys_index,
                                     std::optional<int> env_index, long shots,
                                     std::uint64_t stream_seed) {
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;

  const long n_chunks = (shots + kChunkShots - 1) / kChunkShots;
  std::vector<long long> chunk_sum(n_chunks, 0);
  std::vector<long long> chunk_hits(n_chunks, 0);

#pragma omp parallel for schedule(dynamic, 1)
  for (long chunk = 0; chunk < n_chunks; ++chunk) {
    Rng rng(derive_seed(stream_seed, {static_cast<std::uint64_t>(chunk)}));
    const long lo = chunk * kChunkShots;
    const long hi = std::min(shots, lo + kChunkShots);
    long long sum = 0, hits = 0;
    for (long s = lo; s < hi; ++s) {
      const double u = rng.uniform();
      const int outcome = static_cast<int>(
          std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      const int probe = outcome / (d_s * d_e);
      const int rest = outcome % (d_s * d_e);
      const int sys = rest / d_e;
      const int env = rest % d_e;
      if (sys != sys_index) continue;
      if (env_index && env != *env_index) continue;
      ++hits;
      sum += (probe == 0) ? 1 : -1;
    }
    chunk_sum[chunk] = sum;
    chunk_hits[chunk] = hits;
  }

  long long total_sum = 0, total_hits = 0;
  for (long chunk = 0; chunk < n_chunks; ++chunk) {
    total_sum += chunk_sum[chunk];
    total_hits += chunk_hits[chunk];
  }

  QuadratureEstimate est;
  est.mean = static_cast<double>(total_sum) / static_cast<double>(shots);
  // Per-draw values are in {-1, 0, +1}: Var = E[v^2] - E[v]^2 with
  // E[v^2] = hit fraction.
  const double second_moment =
      static_cast<double>(total_hits) / static_cast<double>(shots);
  const double var = std::max(0.0, second_moment - est.mean * est.mean);
  est.se = std::sqrt(var / static_cast<double>(shots));
  return est;
}

}  // namespace

ExpectationRecord sampled_expectation(const ProtocolInstance& inst,
                                      const DensityMatrix& rho_t,
                                      int sys_index,
                                      std::optional<int> env_index, long shots,
                                      std::uint64_t seed) {
  check_expectation_args(inst, rho_t, sys_index, env_index);
  if (shots < 2) {
    throw std::invalid_argument(
        "sampled_expectation: needs at least 2 shots (one per quadrature)");
  }
  const int d_s = inst.system_dim();
  const int d_e = inst.dilation ? inst.env_dim() : 1;
  const long shots_x = (shots + 1) / 2;
  const long shots_y = shots / 2;

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // Columns are the +1 and -1 eigenvectors of each quadrature.
  const CMatrix basis_x = CMatrix::from_rows(
      {{inv_sqrt2, inv_sqrt2}, {inv_sqrt2, -inv_sqrt2}});
  const CMatrix basis_y = CMatrix::from_rows(
      {{inv_sqrt2, inv_sqrt2},
       {c64{0.0, inv_sqrt2}, c64{0.0, -inv_sqrt2}}});

  const auto probs_x = outcome_probabilities(inst, rho_t, basis_x);
  const auto probs_y = outcome_probabilities(inst, rho_t, basis_y);

  const QuadratureEstimate x =
      sample_quadrature(probs_x, d_s, d_e, sys_index, env_index, shots_x,
                        derive_seed(seed, {kTagQuadX}));
  const QuadratureEstimate y =
      sample_quadrature(probs_y, d_s, d_e, sys_index, env_index, shots_y,
                        derive_seed(seed, {kTagQuadY}));

  ExpectationRecord rec;
  rec.value = c64{x.mean, y.mean};
  rec.normalization = normalization_for(inst, env_index);
  rec.sampled = true;
  rec.shots = shots;
  rec.seed = seed;
  rec.se_x = x.se;
  rec.se_y = y.se;
  return rec;
}

c64 lhs_oracle(const ProtocolInstance& inst, int sys_index,
               std::optional<int> env_index) {
  inst.validate();
  const int d_s = inst.system_dim();
  if (sys_index < 0 || sys_index >= d_s) {
    throw std::out_of_range("lhs_oracle: system index out of range");
  }
  const CMatrix core = inst.branch1 * inst.input_state.mat() *
                       inst.branch0.adjoint();
  if (!inst.dilation) {
    return core(sys_index, sys_index);
  }
  if (env_index) {
    const CMatrix a = kraus_from_dilation(*inst.dilation, *env_index);
    return (a * core)(sys_index, sys_index);
  }
  // No selected outcome: the pointer projectors sum to the identity, so each
  // operator contributes weighted by its environment overlap.
  c64 total{0.0, 0.0};
  for (int k = 0; k < inst.env_dim(); ++k) {
    const CMatrix a = kraus_from_dilation(*inst.dilation, k);
    const c64 overlap =
        inner(inst.dilation->env_state, inst.dilation->pointer_state(k));
    total += overlap * (a * core)(sys_index, sys_index);
  }
  return total;
}

CMatrix projector_unitary(int j, double theta, int d) {
  if (j < 0 || j >= d) {
    throw std::out_of_range("projector_unitary: index " + std::to_string(j) +
                            " out of range for dimension " +
                            std::to_string(d));
  }
  CMatrix u = CMatrix::identity(d);
  u(j, j) = c64{std::cos(theta), -std::sin(theta)};
  return u;
}

CMatrix plus_state() {
  const double a = 1.0 / std::sqrt(2.0);
  return CMatrix::column({c64{a, 0.0}, c64{a, 0.0}});
}

}  // namespace krauscope
