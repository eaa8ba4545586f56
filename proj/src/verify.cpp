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

#include "krauscope/verify.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "krauscope/characterize.hpp"
#include "krauscope/harness.hpp"
#include "krauscope/kernels.hpp"
#include "krauscope/linalg.hpp"
#include "krauscope/protocol.hpp"
#include "krauscope/rng.hpp"
#include "krauscope/serialize.hpp"

namespace krauscope {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kPi = std::numbers::pi;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

CMatrix random_probe(Rng& rng) {
  // Both components bounded away from zero so the normalization is healthy.
  while (true) {
    c64 a = rng.complex_normal();
    c64 b = rng.complex_normal();
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    a /= norm;
    b /= norm;
    if (std::abs(a) > 0.2 && std::abs(b) > 0.2) {
      return CMatrix::column({a, b});
    }
  }
}

ProtocolInstance random_instance(int d_s, int d_e, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0xfeed}));
  const CMatrix probe = random_probe(rng);
  Dilation dil(random_unitary(d_s * d_e, derive_seed(seed, {1})),
               uniform_column(d_e));
  return ProtocolInstance{
      probe,
      dil,
      random_unitary(d_s, derive_seed(seed, {2})),
      random_unitary(d_s, derive_seed(seed, {3})),
      DensityMatrix(random_density(d_s, derive_seed(seed, {4}))),
      kPi / 2.0};
}

double max_element_diff(const CMatrix& a, const CMatrix& b) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

// --- individual criteria -------------------------------------------------

CheckResult check_central_identity() {
  const auto start = Clock::now();
  CheckResult res;
  res.name = "central identity: normalized expectation equals direct oracle";
  double worst = 0.0;
  for (int d_s = 2; d_s <= 4; ++d_s) {
    for (int d_e = 2; d_e <= 4; ++d_e) {
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const ProtocolInstance inst = random_instance(
            d_s, d_e, derive_seed(seed, {static_cast<std::uint64_t>(d_s),
                                         static_cast<std::uint64_t>(d_e)}));
        const DensityMatrix rho_t = evolve(inst);
        for (int i = 0; i < d_s; ++i) {
          for (int k = 0; k < d_e; ++k) {
            const c64 lhs = lhs_oracle(inst, i, k);
            const c64 rhs = exact_expectation(inst, rho_t, i, k).ratio();
            worst = std::max(worst, std::abs(lhs - rhs));
          }
        }
      }
    }
  }
  res.seconds = seconds_since(start);
  res.passed = worst <= 1e-10 && res.seconds < 10.0;
  res.detail = "max deviation " + fmt(worst) + ", tol 1e-10, " +
               fmt(res.seconds) + " s (limit 10 s)";
  return res;
}

CheckResult check_shared_effect() {
  const auto start = Clock::now();
  CheckResult res;
  res.name = "distinct operators sharing one effect are told apart";

  const auto [plain, rotated] = shared_effect_pair();
  const DensityMatrix input = default_input_state(2, 0.3);
  const KrausSetup setup_a{dilation_from_kraus(plain), input, plus_state(),
                           kPi / 2.0, std::nullopt};
  const KrausSetup setup_b{dilation_from_kraus(rotated), input, plus_state(),
                           kPi / 2.0, std::nullopt};

  const CMatrix a_hat = kraus_full(setup_a, 0).elements;
  const CMatrix b_hat = kraus_full(setup_b, 0).elements;
  const CMatrix e_a = povm_full(setup_a, 0).elements;
  const CMatrix e_b = povm_full(setup_b, 0).elements;

  CMatrix half_identity = CMatrix::identity(2);
  half_identity *= c64{0.5, 0.0};
  const double effect_err = std::max(max_element_diff(e_a, half_identity),
                                     max_element_diff(e_b, half_identity));
  const double operator_gap = frobenius_distance(a_hat, b_hat);

  res.seconds = seconds_since(start);
  res.passed = effect_err <= 1e-9 && operator_gap > 0.5 && res.seconds < 1.0;
  res.detail = "effect deviation " + fmt(effect_err) +
               " (tol 1e-9), operator gap " + fmt(operator_gap) +
               " (> 0.5), " + fmt(res.seconds) + " s (limit 1 s)";
  return res;
}

CheckResult check_exact_round_trips() {
  const auto start = Clock::now();
  CheckResult res;
  res.name = "exact-mode round trips (kraus, unitary, density)";

  double worst_frob = 0.0, worst_completeness = 0.0, worst_herm = 0.0,
         worst_trace = 0.0;
  std::string failure;
  for (int d_s = 2; d_s <= 4 && failure.empty(); ++d_s) {
    for (TargetKind kind :
         {TargetKind::Kraus, TargetKind::Unitary, TargetKind::Density}) {
      ExperimentConfig cfg;
      cfg.kind = kind;
      cfg.d_s = d_s;
      cfg.d_e = d_s;
      cfg.seeds.clear();
      for (std::uint64_t s = 1; s <= 20; ++s) cfg.seeds.push_back(s);
      const ExperimentReport report = run_experiment(cfg);
      for (const SeedOutcome& o : report.per_seed) {
        if (!o.ok) {
          failure = "seed " + std::to_string(o.seed) + ": " + o.error;
          break;
        }
        for (std::size_t t = 0; t < o.estimates.size(); ++t) {
          worst_frob = std::max(
              worst_frob, frobenius_distance(o.estimates[t], o.oracles[t]));
        }
        if (kind == TargetKind::Kraus && o.residuals.completeness) {
          worst_completeness =
              std::max(worst_completeness, *o.residuals.completeness);
        }
        if (kind == TargetKind::Density) {
          if (o.residuals.hermiticity) {
            worst_herm = std::max(worst_herm, *o.residuals.hermiticity);
          }
          if (o.residuals.trace_deviation) {
            worst_trace = std::max(worst_trace, *o.residuals.trace_deviation);
          }
        }
      }
    }
  }
  res.seconds = seconds_since(start);
  res.passed = failure.empty() && worst_frob <= 1e-9 &&
               worst_completeness <= 1e-8 && worst_herm <= 1e-9 &&
               worst_trace <= 1e-8 && res.seconds < 30.0;
  res.detail = failure.empty()
                   ? "max error " + fmt(worst_frob) +
                         " (tol 1e-9), completeness " + fmt(worst_completeness) +
                         " (tol 1e-8), hermiticity " + fmt(worst_herm) +
                         " (tol 1e-9), trace " + fmt(worst_trace) +
                         " (tol 1e-8), " + fmt(res.seconds) + " s (limit 30 s)"
                   : failure;
  return res;
}

CheckResult check_setting_count() {
  const auto start = Clock::now();
  CheckResult res;
  res.name = "every full reconstruction uses exactly d_s + 1 settings";
  bool ok = true;
  std::string detail;
  for (TargetKind kind : {TargetKind::Kraus, TargetKind::Povm,
                          TargetKind::Unitary, TargetKind::Observable,
                          TargetKind::Density}) {
    for (int d_s = 2; d_s <= 4; ++d_s) {
      ExperimentConfig cfg;
      cfg.kind = kind;
      cfg.d_s = d_s;
      cfg.d_e = 2;
      cfg.seeds = {5, 6};
      const ExperimentReport report = run_experiment(cfg);
      for (const SeedOutcome& o : report.per_seed) {
        if (!o.ok || o.settings_used != d_s + 1) {
          ok = false;
          detail = std::string(to_string(kind)) + " at d_s=" +
                   std::to_string(d_s) + " used " +
                   std::to_string(o.settings_used) + " settings";
        }
      }
    }
  }
  res.seconds = seconds_since(start);
  res.passed = ok;
  res.detail = ok ? "all kinds, d_s in {2,3,4}: settings = d_s + 1" : detail;
  return res;
}

CheckResult check_theta_independence() {
  const auto start = Clock::now();
  CheckResult res;
  res.name = "reconstructions are independent of the gate angle";
  const std::vector<double> angles = {kPi / 4.0, kPi / 2.0, kPi};
  double worst = 0.0;
  for (TargetKind kind :
       {TargetKind::Kraus, TargetKind::Unitary, TargetKind::Density}) {
    for (int d_s = 2; d_s <= 3; ++d_s) {
      std::vector<ExperimentReport> reports;
      for (double angle : angles) {
        ExperimentConfig cfg;
        cfg.kind = kind;
        cfg.d_s = d_s;
        cfg.d_e = 2;
        cfg.theta = angle;
        cfg.seeds = {11, 12, 13, 14, 15};
        reports.push_back(run_experiment(cfg));
      }
      for (std::size_t r = 1; r < reports.size(); ++r) {
        for (std::size_t s = 0; s < reports[r].per_seed.size(); ++s) {
          const SeedOutcome& base = reports[0].per_seed[s];
          const SeedOutcome& other = reports[r].per_seed[s];
          for (std::size_t t = 0; t < base.estimates.size(); ++t) {
            worst = std::max(
                worst, max_element_diff(base.estimates[t], other.estimates[t]));
          }
        }
      }
    }
  }
  res.seconds = seconds_since(start);
  res.passed = worst <= 1e-9;
  res.detail = "max cross-angle deviation " + fmt(worst) + " (tol 1e-9)";
  return res;
}

CheckResult check_observable_orders() {
  const auto start = Clock::now();
  CheckResult res;
  res.name = "observable estimators: truncation orders 1 and 2";

  ExperimentConfig cfg;
  cfg.kind = TargetKind::Observable;
  cfg.d_s = 3;
  cfg.d_e = 2;
  cfg.seeds.clear();
  for (std::uint64_t s = 1; s <= 10; ++s) cfg.seeds.push_back(s);
  cfg.sweep = SweepSpec{SweepSpec::Axis::DeltaTheta,
                        {0.1, 0.05, 0.025, 0.0125}, 50, 0.5};
  const ExperimentReport report = sweep_delta_theta(cfg);

  const double slope_first = report.slopes.at("first_order");
  const double slope_refined = report.slopes.at("refined");
  bool refined_below = true;
  for (const SweepPoint& p : report.sweep_points) {
    if (*p.refined_error > *p.first_order_error) refined_below = false;
  }
  res.seconds = seconds_since(start);
  res.passed = std::abs(slope_first - 1.0) <= 0.2 &&
               std::abs(slope_refined - 2.0) <= 0.2 && refined_below &&
               res.seconds < 10.0;
  res.detail = "slopes " + fmt(slope_first) + " (1.0 +/- 0.2) and " +
               fmt(slope_refined) + " (2.0 +/- 0.2), refined <= first: " +
               (refined_below ? "yes" : "no") + ", " + fmt(res.seconds) +
               " s (limit 10 s)";
  return res;
}

CheckResult check_shot_noise() {
  const auto start = Clock::now();
  CheckResult res;
  res.name = "shot-noise scaling and report reproducibility";

  ExperimentConfig cfg;
  cfg.kind = TargetKind::Kraus;
  cfg.d_s = 2;
  cfg.d_e = 2;
  cfg.sampled = true;
  cfg.shots = 10000;
  cfg.seeds = {7};
  cfg.sweep = SweepSpec{SweepSpec::Axis::Shots, {10000, 40000, 160000}, 50, 0.5};

  const ExperimentReport first = sweep_shots(cfg);
  // Second run under the serial reference policy: canonical reports must be
  // byte-identical regardless of execution policy.
  const kernels::Execution saved = kernels::execution();
  kernels::set_execution(kernels::Execution::Serial);
  const ExperimentReport second = sweep_shots(cfg);
  kernels::set_execution(saved);

  const std::string canon_a = report_to_json(first, false).dump();
  const std::string canon_b = report_to_json(second, false).dump();
  const double slope = first.slopes.at("shots");

  res.seconds = seconds_since(start);
  res.passed = std::abs(slope + 0.5) <= 0.15 && canon_a == canon_b &&
               res.seconds < 60.0;
  res.detail = "slope " + fmt(slope) + " (-0.5 +/- 0.15), reports identical: " +
               (canon_a == canon_b ? "yes" : "no") + ", " + fmt(res.seconds) +
               " s (limit 60 s)";
  return res;
}

CheckResult check_channel_consistency() {
  const auto start = Clock::now();
  CheckResult res;
  res.name = "channel application agrees with dilation-and-trace";
  double worst = 0.0;
  int count = 0;
  for (int d_s = 2; d_s <= 3; ++d_s) {
    for (int d_e = 2; d_e <= 3; ++d_e) {
      for (std::uint64_t seed = 0; seed < 5; ++seed, ++count) {
        const std::uint64_t root =
            derive_seed(seed, {static_cast<std::uint64_t>(d_s),
                               static_cast<std::uint64_t>(d_e), 0x8a});
        const Dilation dil(random_unitary(d_s * d_e, root),
                           uniform_column(d_e));
        std::vector<CMatrix> ops;
        for (int k = 0; k < d_e; ++k) ops.push_back(kraus_from_dilation(dil, k));
        const KrausSet ks(ops);
        const DensityMatrix rho(
            random_density(d_s, derive_seed(root, {0x99})));

        const DensityMatrix direct = apply_channel(ks, rho);
        const CMatrix joint =
            dil.coupling * kron(rho.mat(), outer(dil.env_state)) *
            dil.coupling.adjoint();
        const CMatrix traced = partial_trace(joint, {d_s, d_e}, {0});
        worst = std::max(worst, frobenius_distance(direct.mat(), traced));
      }
    }
  }
  res.seconds = seconds_since(start);
  res.passed = worst <= 1e-10 && count >= 20;
  res.detail = std::to_string(count) + " random channels, max deviation " +
               fmt(worst) + " (tol 1e-10)";
  return res;
}

}  // namespace

std::pair<KrausSet, KrausSet> shared_effect_pair() {
  const double r = std::sqrt(0.5);
  CMatrix plain = CMatrix::identity(2);
  plain *= c64{r, 0.0};
  CMatrix rotated = pauli_x() + pauli_z();
  rotated *= c64{0.5, 0.0};
  const CMatrix second = CMatrix::diagonal({c64{0.5, 0.0}, c64{0.0, 0.0}});
  const CMatrix third = CMatrix::diagonal({c64{0.5, 0.0}, c64{r, 0.0}});
  return {KrausSet({plain, second, third}),
          KrausSet({rotated, second, third})};
}

std::vector<CheckResult> run_full_verification() {
  std::vector<CheckResult> results;
  results.push_back(check_central_identity());
  results.push_back(check_shared_effect());
  results.push_back(check_exact_round_trips());
  results.push_back(check_setting_count());
  results.push_back(check_theta_independence());
  results.push_back(check_observable_orders());
  results.push_back(check_shot_noise());
  results.push_back(check_channel_consistency());
  return results;
}

}  // namespace krauscope
