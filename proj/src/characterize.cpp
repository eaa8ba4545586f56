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

#include "krauscope/characterize.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "krauscope/linalg.hpp"
#include "krauscope/rng.hpp"

namespace krauscope {

const char* to_string(TargetKind kind) {
  switch (kind) {
    case TargetKind::Kraus: return "kraus";
    case TargetKind::Povm: return "povm";
    case TargetKind::Unitary: return "unitary";
    case TargetKind::Observable: return "observable";
    case TargetKind::Density: return "density";
  }
  return "?";
}

const char* to_string(ObservableMethod method) {
  return method == ObservableMethod::FirstOrder ? "first_order" : "refined";
}

void ObservableEstimatorConfig::validate() const {
  const double d = std::abs(delta());
  if (d < 1e-12) {
    throw std::invalid_argument(
        "ObservableEstimatorConfig: theta1 and theta2 coincide; the gate "
        "concatenation would be trivial");
  }
  if (d >= series_guard) {
    throw std::invalid_argument(
        "ObservableEstimatorConfig: |theta1 - theta2| = " + std::to_string(d) +
        " outside the series regime (guard " + std::to_string(series_guard) +
        ")");
  }
}

namespace {

constexpr double kOverlapTol = 1e-8;

// Stream tags: one per physically distinct family of runs.
constexpr std::uint64_t kTagKraus = 0x4b;
constexpr std::uint64_t kTagUnitary = 0x55;
constexpr std::uint64_t kTagUnitaryAdjoint = 0x41;
constexpr std::uint64_t kTagDensity = 0x44;
constexpr std::uint64_t kNoOutcome = 0xffffULL;

// Identity-gate setting tag for stream derivation (projector settings use
// their index j; settings are offset by one so j = 0 stays distinct).
constexpr int kIdentitySetting = -1;

struct Plan {
  ProtocolInstance inst;
  DensityMatrix rho_t;
};

Plan make_plan(ProtocolInstance inst) {
  DensityMatrix rho_t = evolve(inst);
  return Plan{std::move(inst), std::move(rho_t)};
}

struct Estimate {
  c64 value{0.0, 0.0};  // expectation divided by its normalization
  double se = 0.0;      // propagated standard error (0 in exact mode)
};

Estimate measure(const Plan& plan, int i, std::optional<int> k,
                 const std::optional<SampleSpec>& sampling,
                 std::uint64_t kind_tag, int setting_tag) {
  if (!sampling) {
    const ExpectationRecord rec = exact_expectation(plan.inst, plan.rho_t, i, k);
    return {rec.ratio(), 0.0};
  }
  const std::uint64_t outcome_tag = k ? static_cast<std::uint64_t>(*k) : kNoOutcome;
  const std::uint64_t stream = derive_seed(
      sampling->seed, {kind_tag, static_cast<std::uint64_t>(i),
                       static_cast<std::uint64_t>(setting_tag + 1), outcome_tag});
  const ExpectationRecord rec = sampled_expectation(
      plan.inst, plan.rho_t, i, k, sampling->shots, stream);
  const double se =
      std::hypot(rec.se_x, rec.se_y) / std::abs(rec.normalization);
  return {rec.ratio(), se};
}

c64 phase_factor(double theta, bool conjugated) {
  // exp(-i*theta) - 1, or exp(+i*theta) - 1 for the conjugated branch.
  const double sign = conjugated ? 1.0 : -1.0;
  const c64 f{std::cos(theta) - 1.0, sign * std::sin(theta)};
  if (std::abs(f) < kOverlapTol) {
    throw std::domain_error(
        "characterize: projector-gate angle theta = " + std::to_string(theta) +
        " gives a vanishing phase factor; pick theta away from multiples of "
        "2*pi");
  }
  return f;
}

void check_overlap(c64 overlap, const std::string& what, int i, int j) {
  if (std::abs(overlap) < kOverlapTol) {
    throw std::domain_error("characterize: " + what + " vanishes at (i=" +
                            std::to_string(i) + ", j=" + std::to_string(j) +
                            "); this element is not reachable with the given "
                            "inputs");
  }
}

void maybe_flag(Reconstruction& rec, int i, int j, c64 denominator,
                double se_num, double se_base) {
  if (!rec.sampled) return;
  const double se = std::hypot(se_num, se_base);
  if (std::abs(denominator) < 3.0 * se) {
    rec.flags.push_back(ElementFlag{i, j, std::abs(denominator), se});
  }
}

void fill_sampling_fields(Reconstruction& rec,
                          const std::optional<SampleSpec>& sampling) {
  rec.sampled = sampling.has_value();
  if (sampling) {
    rec.shots = sampling->shots;
    rec.seed = sampling->seed;
  }
}

// ---------------------------------------------------------------------------
// Kraus / POVM

ProtocolInstance kraus_instance(const KrausSetup& setup, const CMatrix& gate) {
  const int d = setup.input_state.dim();
  return ProtocolInstance{setup.probe_state, setup.dilation,
                          CMatrix::identity(d), gate, setup.input_state,
                          setup.theta};
}

void check_outcome_reachable(const KrausSetup& setup, int k) {
  const c64 xi_overlap = inner(setup.dilation.env_state,
                               setup.dilation.pointer_state(k));
  if (std::abs(xi_overlap) < kOverlapTol) {
    throw std::domain_error(
        "characterize: environment overlap <xi|" + std::to_string(k) +
        "> vanishes; outcome " + std::to_string(k) +
        " carries no signal for this environment state");
  }
}

// Shared engine: reconstructs the operators for all requested outcomes using
// one set of evolved states (the gate settings do not depend on k).
std::vector<Reconstruction> kraus_reconstruct(const KrausSetup& setup,
                                              const std::vector<int>& outcomes) {
  const int d = setup.input_state.dim();
  for (int k : outcomes) check_outcome_reachable(setup, k);

  const Plan ident = make_plan(kraus_instance(setup, CMatrix::identity(d)));
  std::vector<Plan> plans;
  plans.reserve(d);
  for (int j = 0; j < d; ++j) {
    plans.push_back(
        make_plan(kraus_instance(setup, projector_unitary(j, setup.theta, d))));
  }
  const c64 phase = phase_factor(setup.theta, false);

  std::vector<Reconstruction> out;
  out.reserve(outcomes.size());
  for (int k : outcomes) {
    Reconstruction rec;
    rec.kind = TargetKind::Kraus;
    rec.kraus_index = k;
    rec.elements = CMatrix(d, d);
    rec.settings_used = d + 1;
    fill_sampling_fields(rec, setup.sampling);

    std::vector<Estimate> base(d);
    for (int i = 0; i < d; ++i) {
      base[i] = measure(ident, i, k, setup.sampling, kTagKraus, kIdentitySetting);
      rec.baselines[{i, k}] = base[i].value;
    }
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < d; ++i) {
        const c64 rho_ji = setup.input_state.entry(j, i);
        check_overlap(rho_ji, "input-state overlap <j|rho|i>", i, j);
        const Estimate num =
            measure(plans[j], i, k, setup.sampling, kTagKraus, j);
        const c64 den = phase * rho_ji;
        rec.elements(i, j) = (num.value - base[i].value) / den;
        maybe_flag(rec, i, j, den, num.se, base[i].se);
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Unitary (shared by the observable estimators)

ProtocolInstance unitary_instance(const UnitarySetup& setup,
                                  const CMatrix& gate) {
  const int d = setup.input_state.dim();
  return ProtocolInstance{setup.probe_state, std::nullopt,
                          CMatrix::identity(d), setup.target * gate,
                          setup.input_state, setup.theta};
}

Reconstruction unitary_reconstruct(const UnitarySetup& setup,
                                   std::uint64_t kind_tag) {
  const int d = setup.input_state.dim();
  if (unitarity_residual(setup.target) > 1e-10) {
    throw std::invalid_argument(
        "characterize: unitary target is not unitary (residual " +
        std::to_string(unitarity_residual(setup.target)) + ")");
  }

  const Plan ident = make_plan(unitary_instance(setup, CMatrix::identity(d)));
  const c64 phase = phase_factor(setup.theta, false);

  Reconstruction rec;
  rec.kind = TargetKind::Unitary;
  rec.elements = CMatrix(d, d);
  rec.settings_used = d + 1;
  fill_sampling_fields(rec, setup.sampling);

  std::vector<Estimate> base(d);
  for (int i = 0; i < d; ++i) {
    base[i] = measure(ident, i, std::nullopt, setup.sampling, kind_tag,
                      kIdentitySetting);
    rec.baselines[{i, -1}] = base[i].value;
  }
  for (int j = 0; j < d; ++j) {
    const Plan plan =
        make_plan(unitary_instance(setup, projector_unitary(j, setup.theta, d)));
    for (int i = 0; i < d; ++i) {
      const c64 rho_ji = setup.input_state.entry(j, i);
      check_overlap(rho_ji, "input-state overlap <j|rho|i>", i, j);
      const Estimate num = measure(plan, i, std::nullopt, setup.sampling,
                                   kind_tag, j);
      const c64 den = phase * rho_ji;
      rec.elements(i, j) = (num.value - base[i].value) / den;
      maybe_flag(rec, i, j, den, num.se, base[i].se);
    }
  }
  rec.residuals.unitarity = unitarity_residual(rec.elements);
  return rec;
}

// ---------------------------------------------------------------------------
// Density

ProtocolInstance density_instance(const DensitySetup& setup,
                                  const CMatrix& gate) {
  const int d = setup.input_state.dim();
  return ProtocolInstance{setup.probe_state, std::nullopt,
                          setup.reference_unitary * gate, CMatrix::identity(d),
                          setup.input_state, setup.theta};
}

void check_reference(const DensitySetup& setup) {
  if (unitarity_residual(setup.reference_unitary) > 1e-10) {
    throw std::invalid_argument(
        "characterize: reference unitary is not unitary (residual " +
        std::to_string(unitarity_residual(setup.reference_unitary)) + ")");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Public API

c64 kraus_element(const KrausSetup& setup, int i, int j, int k) {
  const int d = setup.input_state.dim();
  check_outcome_reachable(setup, k);
  const c64 rho_ji = setup.input_state.entry(j, i);
  check_overlap(rho_ji, "input-state overlap <j|rho|i>", i, j);

  const Plan ident = make_plan(kraus_instance(setup, CMatrix::identity(d)));
  const Plan plan =
      make_plan(kraus_instance(setup, projector_unitary(j, setup.theta, d)));
  const Estimate base =
      measure(ident, i, k, setup.sampling, kTagKraus, kIdentitySetting);
  const Estimate num = measure(plan, i, k, setup.sampling, kTagKraus, j);
  return (num.value - base.value) / (phase_factor(setup.theta, false) * rho_ji);
}

Reconstruction kraus_full(const KrausSetup& setup, int k) {
  return kraus_reconstruct(setup, {k}).front();
}

std::vector<Reconstruction> kraus_full_set(const KrausSetup& setup) {
  std::vector<int> outcomes(setup.dilation.env_dim());
  for (int k = 0; k < static_cast<int>(outcomes.size()); ++k) outcomes[k] = k;
  auto recs = kraus_reconstruct(setup, outcomes);

  // Completeness of the reconstructed family, attached to every member.
  const int d = setup.input_state.dim();
  CMatrix sum(d, d);
  for (const Reconstruction& r : recs) sum += r.elements.adjoint() * r.elements;
  const double completeness = frobenius_distance(sum, CMatrix::identity(d));
  for (Reconstruction& r : recs) r.residuals.completeness = completeness;
  return recs;
}

c64 povm_element(const KrausSetup& setup, int i, int j, int k) {
  const int d = setup.input_state.dim();
  check_outcome_reachable(setup, k);

  const Plan ident = make_plan(kraus_instance(setup, CMatrix::identity(d)));
  std::vector<Estimate> base(d);
  for (int l = 0; l < d; ++l) {
    base[l] = measure(ident, l, k, setup.sampling, kTagKraus, kIdentitySetting);
  }
  const c64 phase = phase_factor(setup.theta, false);

  // Column c of the operator from the single gate setting j' = c.
  auto column = [&](int c) {
    const Plan plan =
        make_plan(kraus_instance(setup, projector_unitary(c, setup.theta, d)));
    std::vector<c64> col(d);
    for (int l = 0; l < d; ++l) {
      const c64 rho_cl = setup.input_state.entry(c, l);
      check_overlap(rho_cl, "input-state overlap <j|rho|i>", l, c);
      const Estimate num = measure(plan, l, k, setup.sampling, kTagKraus, c);
      col[l] = (num.value - base[l].value) / (phase * rho_cl);
    }
    return col;
  };

  const std::vector<c64> col_i = column(i);
  const std::vector<c64> col_j = (i == j) ? col_i : column(j);
  c64 sum{0.0, 0.0};
  for (int l = 0; l < d; ++l) sum += std::conj(col_i[l]) * col_j[l];
  return sum;
}

Reconstruction povm_full(const KrausSetup& setup, int k) {
  Reconstruction rec = kraus_full(setup, k);
  rec.kind = TargetKind::Povm;
  rec.elements = rec.elements.adjoint() * rec.elements;
  rec.residuals.hermiticity = hermiticity_residual(rec.elements);
  return rec;
}

std::vector<Reconstruction> povm_full_set(const KrausSetup& setup) {
  std::vector<Reconstruction> recs = kraus_full_set(setup);
  const int d = setup.input_state.dim();
  CMatrix sum(d, d);
  for (Reconstruction& r : recs) {
    r.kind = TargetKind::Povm;
    r.elements = r.elements.adjoint() * r.elements;
    r.residuals.hermiticity = hermiticity_residual(r.elements);
    sum += r.elements;
  }
  const double completeness = frobenius_distance(sum, CMatrix::identity(d));
  for (Reconstruction& r : recs) r.residuals.completeness = completeness;
  return recs;
}

c64 unitary_element(const UnitarySetup& setup, int i, int j) {
  const int d = setup.input_state.dim();
  if (unitarity_residual(setup.target) > 1e-10) {
    throw std::invalid_argument("characterize: unitary target is not unitary");
  }
  const c64 rho_ji = setup.input_state.entry(j, i);
  check_overlap(rho_ji, "input-state overlap <j|rho|i>", i, j);

  const Plan ident = make_plan(unitary_instance(setup, CMatrix::identity(d)));
  const Plan plan =
      make_plan(unitary_instance(setup, projector_unitary(j, setup.theta, d)));
  const Estimate base = measure(ident, i, std::nullopt, setup.sampling,
                                kTagUnitary, kIdentitySetting);
  const Estimate num =
      measure(plan, i, std::nullopt, setup.sampling, kTagUnitary, j);
  return (num.value - base.value) / (phase_factor(setup.theta, false) * rho_ji);
}

Reconstruction unitary_full(const UnitarySetup& setup) {
  return unitary_reconstruct(setup, kTagUnitary);
}

namespace {

// The two gate realizations of the estimator: a net forward rotation and,
// for the refined method, an independently characterized net backward one.
UnitarySetup forward_setup(const ObservableSetup& setup) {
  const CMatrix u1 = expm_hermitian(setup.generator, setup.estimator.theta1) *
                     expm_hermitian(setup.generator, -setup.estimator.theta2);
  return UnitarySetup{u1, setup.input_state, setup.probe_state, setup.theta,
                      setup.sampling};
}

UnitarySetup backward_setup(const ObservableSetup& setup) {
  const CMatrix u1d = expm_hermitian(setup.generator, -setup.estimator.theta1) *
                      expm_hermitian(setup.generator, setup.estimator.theta2);
  return UnitarySetup{u1d, setup.input_state, setup.probe_state, setup.theta,
                      setup.sampling};
}

}  // namespace

c64 observable_element(const ObservableSetup& setup, int i, int j) {
  setup.estimator.validate();
  const double delta = setup.estimator.delta();
  const c64 i_delta{0.0, delta};

  UnitarySetup fwd = forward_setup(setup);
  const c64 u_ij = unitary_element(fwd, i, j);
  if (setup.estimator.method == ObservableMethod::FirstOrder) {
    const c64 kron_ij = (i == j) ? c64{1.0, 0.0} : c64{0.0, 0.0};
    return (kron_ij - u_ij) / i_delta;
  }
  UnitarySetup bwd = backward_setup(setup);
  // Streams for the backward run are derived under a distinct tag, so the
  // two characterizations are statistically independent.
  c64 u_adj_ij;
  {
    Reconstruction r = unitary_reconstruct(bwd, kTagUnitaryAdjoint);
    u_adj_ij = r.elements(i, j);
  }
  return (u_adj_ij - u_ij) / (2.0 * i_delta);
}

Reconstruction observable_full(const ObservableSetup& setup) {
  setup.estimator.validate();
  const int d = setup.input_state.dim();
  const double delta = setup.estimator.delta();
  const c64 i_delta{0.0, delta};

  Reconstruction fwd = unitary_reconstruct(forward_setup(setup), kTagUnitary);

  Reconstruction rec;
  rec.kind = TargetKind::Observable;
  rec.elements = CMatrix(d, d);
  rec.settings_used = fwd.settings_used;
  rec.baselines = fwd.baselines;
  rec.flags = fwd.flags;
  fill_sampling_fields(rec, setup.sampling);

  if (setup.estimator.method == ObservableMethod::FirstOrder) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const c64 kron_ij = (i == j) ? c64{1.0, 0.0} : c64{0.0, 0.0};
        rec.elements(i, j) = (kron_ij - fwd.elements(i, j)) / i_delta;
      }
    }
  } else {
    Reconstruction bwd =
        unitary_reconstruct(backward_setup(setup), kTagUnitaryAdjoint);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        rec.elements(i, j) =
            (bwd.elements(i, j) - fwd.elements(i, j)) / (2.0 * i_delta);
      }
    }
    for (const ElementFlag& f : bwd.flags) rec.flags.push_back(f);
  }
  rec.residuals.hermiticity = hermiticity_residual(rec.elements);
  return rec;
}

c64 density_element(const DensitySetup& setup, int i, int j) {
  check_reference(setup);
  const int d = setup.input_state.dim();
  // <j|U1'|i> = conj(U1[i,j]).
  const c64 ref_overlap = std::conj(setup.reference_unitary(i, j));
  check_overlap(ref_overlap, "reference-unitary overlap <j|U1'|i>", i, j);

  const Plan ident = make_plan(density_instance(setup, CMatrix::identity(d)));
  const Plan plan =
      make_plan(density_instance(setup, projector_unitary(j, setup.theta, d)));
  const Estimate base = measure(ident, i, std::nullopt, setup.sampling,
                                kTagDensity, kIdentitySetting);
  const Estimate num =
      measure(plan, i, std::nullopt, setup.sampling, kTagDensity, j);
  return (num.value - base.value) /
         (phase_factor(setup.theta, true) * ref_overlap);
}

Reconstruction density_full(const DensitySetup& setup) {
  check_reference(setup);
  const int d = setup.input_state.dim();
  const c64 phase = phase_factor(setup.theta, true);

  const Plan ident = make_plan(density_instance(setup, CMatrix::identity(d)));

  Reconstruction rec;
  rec.kind = TargetKind::Density;
  rec.elements = CMatrix(d, d);
  rec.settings_used = d + 1;
  fill_sampling_fields(rec, setup.sampling);

  std::vector<Estimate> base(d);
  for (int i = 0; i < d; ++i) {
    base[i] = measure(ident, i, std::nullopt, setup.sampling, kTagDensity,
                      kIdentitySetting);
    rec.baselines[{i, -1}] = base[i].value;
  }
  for (int j = 0; j < d; ++j) {
    const Plan plan =
        make_plan(density_instance(setup, projector_unitary(j, setup.theta, d)));
    for (int i = 0; i < d; ++i) {
      const c64 ref_overlap = std::conj(setup.reference_unitary(i, j));
      check_overlap(ref_overlap, "reference-unitary overlap <j|U1'|i>", i, j);
      const Estimate num = measure(plan, i, std::nullopt, setup.sampling,
                                   kTagDensity, j);
      const c64 den = phase * ref_overlap;
      rec.elements(i, j) = (num.value - base[i].value) / den;
      maybe_flag(rec, i, j, den, num.se, base[i].se);
    }
  }
  rec.residuals.hermiticity = hermiticity_residual(rec.elements);
  rec.residuals.trace_deviation = std::abs(rec.elements.trace() - c64{1.0, 0.0});
  return rec;
}

}  // namespace krauscope
