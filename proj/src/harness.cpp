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

#include "krauscope/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "krauscope/kernels.hpp"
#include "krauscope/linalg.hpp"
#include "krauscope/rng.hpp"
#include "krauscope/version.hpp"

namespace krauscope {

namespace {

constexpr double kOverlapTol = 1e-8;

// Seed-path tags for instance generation and sampling streams.
constexpr std::uint64_t kPathCoupling = 0x11;
constexpr std::uint64_t kPathUnitary = 0x22;
constexpr std::uint64_t kPathObservable = 0x33;
constexpr std::uint64_t kPathDensity = 0x44;
constexpr std::uint64_t kPathSampling = 0x5a5a;
constexpr std::uint64_t kPathRepetition = 0x7e7e;

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

}  // namespace

DensityMatrix default_input_state(int d, double lambda) {
  CMatrix m = outer(uniform_column(d));
  m *= c64{1.0 - lambda, 0.0};
  CMatrix eye = CMatrix::identity(d);
  eye *= c64{lambda / d, 0.0};
  m += eye;
  return DensityMatrix(std::move(m));
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("loglog_slope: need at least two points");
  }
  const int n = static_cast<int>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0) {
      throw std::domain_error("loglog_slope: nonpositive data point");
    }
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) {
    throw std::domain_error("loglog_slope: abscissae are degenerate");
  }
  return (n * sxy - sx * sy) / denom;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& path, const std::string& msg) {
    throw ConfigError(path, msg);
  };
  if (d_s < 2 || d_s > 8) fail("config.d_s", "must be in [2, 8]");
  if (d_e < 2 || d_e > 8) fail("config.d_e", "must be in [2, 8]");
  if (sampled && shots < 100) {
    fail("config.shots", "sampled mode needs at least 100 shots");
  }
  if (seeds.empty()) fail("config.seeds", "must not be empty");
  const c64 phase{std::cos(theta) - 1.0, -std::sin(theta)};
  if (std::abs(phase) < kOverlapTol) {
    fail("config.theta",
         "angle too close to a multiple of 2*pi; the projector gate would be "
         "trivial");
  }
  if (mix_lambda < 0.0 || mix_lambda > 0.999) {
    fail("config.lambda", "must be in [0, 0.999]");
  }
  if (kind == TargetKind::Observable &&
      (!sweep || sweep->axis != SweepSpec::Axis::DeltaTheta)) {
    try {
      ObservableEstimatorConfig{obs_theta1, obs_theta2, method}.validate();
    } catch (const std::invalid_argument& e) {
      fail("config.theta1", e.what());
    }
  }
  if (probe_state) {
    if (probe_state->rows() != 2 || probe_state->cols() != 1) {
      fail("config.probe_state", "must be a 2x1 column");
    }
    if (std::abs(inner(*probe_state, *probe_state).real() - 1.0) > 1e-9) {
      fail("config.probe_state", "must be normalized");
    }
    if (std::abs((*probe_state)(0, 0)) < kOverlapTol ||
        std::abs((*probe_state)(1, 0)) < kOverlapTol) {
      fail("config.probe_state",
           "components along |0> and |1> must both be nonzero");
    }
  }
  if (env_state) {
    if (env_state->cols() != 1) fail("config.env_state", "must be a column");
    if (std::abs(inner(*env_state, *env_state).real() - 1.0) > 1e-9) {
      fail("config.env_state", "must be normalized");
    }
    for (int i = 0; i < env_state->rows(); ++i) {
      if (std::abs((*env_state)(i, 0)) < kOverlapTol) {
        fail("config.env_state", "component " + std::to_string(i) +
                                     " vanishes; all pointer overlaps must be "
                                     "nonzero");
      }
    }
  }
  if (explicit_instance) {
    switch (kind) {
      case TargetKind::Kraus:
      case TargetKind::Povm:
        if (operators.kraus_ops.empty()) {
          fail("config.instance.kraus_ops", "required for kind=" +
                                                std::string(to_string(kind)));
        }
        break;
      case TargetKind::Unitary:
        if (!operators.unitary) {
          fail("config.instance.unitary", "required for kind=unitary");
        }
        break;
      case TargetKind::Observable:
        if (!operators.observable) {
          fail("config.instance.observable", "required for kind=observable");
        }
        break;
      case TargetKind::Density:
        if (!operators.density) {
          fail("config.instance.density", "required for kind=density");
        }
        break;
    }
  }
  if (sweep) {
    const SweepSpec& sw = *sweep;
    if (sw.axis == SweepSpec::Axis::DeltaTheta) {
      if (kind != TargetKind::Observable) {
        fail("config.sweep.axis",
             "delta_theta sweep applies to kind=observable only");
      }
      if (sw.values.size() < 4) {
        fail("config.sweep.values", "need at least 4 delta-theta points");
      }
      double lo = sw.values.front(), hi = sw.values.front();
      for (double v : sw.values) {
        if (v <= 0.0 || v >= 1.0) {
          fail("config.sweep.values",
               "delta-theta points must lie in (0, 1)");
        }
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi / lo < 8.0) {
        fail("config.sweep.values",
             "points must span at least a factor of 8");
      }
    } else {
      if (!sampled) {
        fail("config.sweep.axis", "shots sweep requires sampled mode");
      }
      if (sw.values.size() < 3) {
        fail("config.sweep.values", "need at least 3 shot levels");
      }
      double prev = 0.0, ratio0 = 0.0;
      for (std::size_t i = 0; i < sw.values.size(); ++i) {
        const double v = sw.values[i];
        if (v < 100.0 || v != std::floor(v)) {
          fail("config.sweep.values",
               "shot levels must be integers >= 100");
        }
        if (i > 0) {
          const double r = v / prev;
          if (r <= 1.0) {
            fail("config.sweep.values", "shot levels must increase");
          }
          if (i == 1) {
            ratio0 = r;
          } else if (std::abs(r - ratio0) > 0.25 * ratio0) {
            fail("config.sweep.values",
                 "shot levels must form a geometric progression");
          }
        }
        prev = v;
      }
      if (sw.repetitions < 50) {
        fail("config.sweep.repetitions",
             "at least 50 repetitions are required for a stable slope fit");
      }
    }
  }
}

namespace {

struct InstanceBundle {
  std::optional<KrausSetup> kraus;
  std::optional<UnitarySetup> unitary;
  std::optional<ObservableSetup> observable;
  std::optional<DensitySetup> density;
  std::vector<CMatrix> oracles;
};

CMatrix probe_or_default(const ExperimentConfig& cfg) {
  return cfg.probe_state ? *cfg.probe_state : plus_state();
}

// Hermitian generator with well-separated eigenvalues; degenerate draws are
// rejected so the two estimator methods see a generic target.
CMatrix nondegenerate_hermitian(int d, std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
    CMatrix h = random_hermitian(d, derive_seed(seed, {kPathObservable, attempt}));
    const EighResult eg = eigh(h, 1e-8);
    double min_gap = 2.0;
    for (std::size_t i = 1; i < eg.eigenvalues.size(); ++i) {
      min_gap = std::min(min_gap, eg.eigenvalues[i] - eg.eigenvalues[i - 1]);
    }
    if (min_gap > 0.05) return h;
  }
  throw std::runtime_error("nondegenerate_hermitian: rejection loop exhausted");
}

InstanceBundle build_instance(const ExperimentConfig& cfg, std::uint64_t seed,
                              const std::optional<SampleSpec>& sampling) {
  InstanceBundle bundle;
  const CMatrix probe = probe_or_default(cfg);
  switch (cfg.kind) {
    case TargetKind::Kraus:
    case TargetKind::Povm: {
      int d_s = cfg.d_s, d_e = cfg.d_e;
      std::optional<Dilation> dil;
      if (cfg.explicit_instance) {
        KrausSet ks(cfg.operators.kraus_ops);
        d_s = ks.system_dim();
        d_e = ks.env_dim();
        const CMatrix xi = cfg.env_state ? *cfg.env_state : uniform_column(d_e);
        dil = dilation_from_kraus(ks, xi);
      } else {
        const CMatrix xi = cfg.env_state ? *cfg.env_state : uniform_column(d_e);
        dil = Dilation(random_unitary(d_s * d_e, derive_seed(seed, {kPathCoupling})),
                       xi);
      }
      for (int k = 0; k < d_e; ++k) {
        CMatrix a = kraus_from_dilation(*dil, k);
        bundle.oracles.push_back(cfg.kind == TargetKind::Povm
                                     ? povm_from_kraus(a)
                                     : std::move(a));
      }
      bundle.kraus = KrausSetup{std::move(*dil),
                                default_input_state(d_s, cfg.mix_lambda), probe,
                                cfg.theta, sampling};
      break;
    }
    case TargetKind::Unitary: {
      CMatrix target = cfg.explicit_instance
                           ? *cfg.operators.unitary
                           : random_unitary(cfg.d_s, derive_seed(seed, {kPathUnitary}));
      bundle.oracles.push_back(target);
      const int d = target.rows();
      bundle.unitary =
          UnitarySetup{std::move(target), default_input_state(d, cfg.mix_lambda),
                       probe, cfg.theta, sampling};
      break;
    }
    case TargetKind::Observable: {
      CMatrix gen = cfg.explicit_instance
                        ? *cfg.operators.observable
                        : nondegenerate_hermitian(cfg.d_s, seed);
      bundle.oracles.push_back(gen);
      const int d = gen.rows();
      bundle.observable = ObservableSetup{
          std::move(gen),
          ObservableEstimatorConfig{cfg.obs_theta1, cfg.obs_theta2, cfg.method},
          default_input_state(d, cfg.mix_lambda), probe, cfg.theta, sampling};
      break;
    }
    case TargetKind::Density: {
      DensityMatrix rho =
          cfg.explicit_instance
              ? DensityMatrix(*cfg.operators.density)
              : DensityMatrix(random_density(cfg.d_s, derive_seed(seed, {kPathDensity})));
      bundle.oracles.push_back(rho.mat());
      const int d = rho.dim();
      const CMatrix ref = cfg.operators.reference_unitary
                              ? *cfg.operators.reference_unitary
                              : dft_matrix(d);
      bundle.density =
          DensitySetup{std::move(rho), ref, probe, cfg.theta, sampling};
      break;
    }
  }
  return bundle;
}

void set_sampling(InstanceBundle& bundle, const std::optional<SampleSpec>& s) {
  if (bundle.kraus) bundle.kraus->sampling = s;
  if (bundle.unitary) bundle.unitary->sampling = s;
  if (bundle.observable) bundle.observable->sampling = s;
  if (bundle.density) bundle.density->sampling = s;
}

std::vector<Reconstruction> reconstruct(TargetKind kind,
                                        const InstanceBundle& bundle) {
  switch (kind) {
    case TargetKind::Kraus:
      return kraus_full_set(*bundle.kraus);
    case TargetKind::Povm:
      return povm_full_set(*bundle.kraus);
    case TargetKind::Unitary:
      return {unitary_full(*bundle.unitary)};
    case TargetKind::Observable:
      return {observable_full(*bundle.observable)};
    case TargetKind::Density:
      return {density_full(*bundle.density)};
  }
  throw std::logic_error("reconstruct: unreachable");
}

double state_fidelity(const CMatrix& estimate, const CMatrix& truth) {
  CMatrix herm = estimate;
  for (int i = 0; i < herm.rows(); ++i)
    for (int j = i; j < herm.cols(); ++j) {
      const c64 avg = 0.5 * (herm(i, j) + std::conj(herm(j, i)));
      herm(i, j) = avg;
      herm(j, i) = std::conj(avg);
    }
  const CMatrix root = hermitian_sqrt(truth);
  const EighResult eg = eigh(root * herm * root, 1e-6);
  double sum = 0.0;
  for (double v : eg.eigenvalues) sum += std::sqrt(std::max(0.0, v));
  return sum * sum;
}

double max_element_diff(const CMatrix& a, const CMatrix& b) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

SeedOutcome evaluate_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  SeedOutcome out;
  out.seed = seed;
  try {
    const std::optional<SampleSpec> sampling =
        cfg.sampled
            ? std::optional<SampleSpec>(SampleSpec{
                  cfg.shots, derive_seed(seed, {kPathSampling})})
            : std::nullopt;
    const InstanceBundle bundle = build_instance(cfg, seed, sampling);
    const std::vector<Reconstruction> recs = reconstruct(cfg.kind, bundle);

    double frob_sq = 0.0;
    for (std::size_t t = 0; t < recs.size(); ++t) {
      const CMatrix& est = recs[t].elements;
      const CMatrix& truth = bundle.oracles[t];
      frob_sq += std::pow(frobenius_distance(est, truth), 2);
      out.max_element_error =
          std::max(out.max_element_error, max_element_diff(est, truth));
      out.estimates.push_back(est);
      for (const ElementFlag& f : recs[t].flags) out.flags.push_back(f);
    }
    out.frobenius_error = std::sqrt(frob_sq);
    out.oracles = bundle.oracles;
    out.settings_used = recs.front().settings_used;
    out.residuals = recs.front().residuals;

    if (cfg.kind == TargetKind::Density) {
      out.fidelity =
          state_fidelity(recs.front().elements, bundle.oracles.front());
    }
    if (cfg.kind == TargetKind::Observable) {
      // Report both estimator methods alongside the configured one.
      InstanceBundle alt = bundle;
      alt.observable->estimator.method = ObservableMethod::FirstOrder;
      const double first = max_element_diff(
          observable_full(*alt.observable).elements, bundle.oracles.front());
      alt.observable->estimator.method = ObservableMethod::Refined;
      const double refined = max_element_diff(
          observable_full(*alt.observable).elements, bundle.oracles.front());
      out.first_order_max_error = first;
      out.refined_max_error = refined;
    }
    out.ok = true;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.sweep) {
    return cfg.sweep->axis == SweepSpec::Axis::DeltaTheta ? sweep_delta_theta(cfg)
                                                          : sweep_shots(cfg);
  }
  const auto start = Clock::now();
  ExperimentReport report;
  report.version = kVersion;
  report.config = cfg;
  const int n = static_cast<int>(cfg.seeds.size());
  report.per_seed.resize(n);

  const bool parallel = kernels::parallel_enabled();
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (int i = 0; i < n; ++i) {
    report.per_seed[i] = evaluate_seed(cfg, cfg.seeds[i]);
  }

  double max_frob = 0.0, sum_frob = 0.0, max_elem = 0.0;
  int ok_count = 0;
  for (const SeedOutcome& o : report.per_seed) {
    if (!o.ok) continue;
    ++ok_count;
    max_frob = std::max(max_frob, o.frobenius_error);
    sum_frob += o.frobenius_error;
    max_elem = std::max(max_elem, o.max_element_error);
  }
  if (ok_count > 0) {
    report.max_frobenius_error = max_frob;
    report.mean_frobenius_error = sum_frob / ok_count;
    report.max_element_error = max_elem;
  }
  report.wall_ms = elapsed_ms(start);
  return report;
}

ExperimentReport sweep_delta_theta(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!cfg.sweep || cfg.sweep->axis != SweepSpec::Axis::DeltaTheta) {
    throw ConfigError("config.sweep", "expected a delta_theta sweep");
  }
  const auto start = Clock::now();
  ExperimentReport report;
  report.version = kVersion;
  report.config = cfg;

  const std::vector<double>& points = cfg.sweep->values;
  const int np = static_cast<int>(points.size());
  const int ns = static_cast<int>(cfg.seeds.size());
  std::vector<std::vector<double>> first_err(np, std::vector<double>(ns));
  std::vector<std::vector<double>> refined_err(np, std::vector<double>(ns));

  const bool parallel = kernels::parallel_enabled();
#pragma omp parallel for schedule(dynamic, 1) collapse(2) if (parallel)
  for (int pi = 0; pi < np; ++pi) {
    for (int si = 0; si < ns; ++si) {
      ExperimentConfig point_cfg = cfg;
      point_cfg.sweep.reset();
      point_cfg.obs_theta1 = cfg.sweep->center + points[pi] / 2.0;
      point_cfg.obs_theta2 = cfg.sweep->center - points[pi] / 2.0;
      const std::uint64_t seed = cfg.seeds[si];
      const std::optional<SampleSpec> sampling =
          cfg.sampled ? std::optional<SampleSpec>(SampleSpec{
                            cfg.shots, derive_seed(seed, {kPathSampling,
                                                          static_cast<std::uint64_t>(pi)})})
                      : std::nullopt;
      InstanceBundle bundle = build_instance(point_cfg, seed, sampling);
      const CMatrix truth = bundle.oracles.front();
      bundle.observable->estimator.method = ObservableMethod::FirstOrder;
      first_err[pi][si] = max_element_diff(
          observable_full(*bundle.observable).elements, truth);
      bundle.observable->estimator.method = ObservableMethod::Refined;
      refined_err[pi][si] = max_element_diff(
          observable_full(*bundle.observable).elements, truth);
    }
  }

  std::vector<double> first_mean(np), refined_mean(np);
  for (int pi = 0; pi < np; ++pi) {
    SweepPoint point;
    point.value = points[pi];
    point.per_seed_first_order = first_err[pi];
    point.per_seed_refined = refined_err[pi];
    first_mean[pi] =
        std::accumulate(first_err[pi].begin(), first_err[pi].end(), 0.0) / ns;
    refined_mean[pi] =
        std::accumulate(refined_err[pi].begin(), refined_err[pi].end(), 0.0) /
        ns;
    point.first_order_error = first_mean[pi];
    point.refined_error = refined_mean[pi];
    report.sweep_points.push_back(std::move(point));
  }
  report.slopes["first_order"] = loglog_slope(points, first_mean);
  report.slopes["refined"] = loglog_slope(points, refined_mean);
  report.wall_ms = elapsed_ms(start);
  return report;
}

ExperimentReport sweep_shots(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!cfg.sweep || cfg.sweep->axis != SweepSpec::Axis::Shots) {
    throw ConfigError("config.sweep", "expected a shots sweep");
  }
  const auto start = Clock::now();
  ExperimentReport report;
  report.version = kVersion;
  report.config = cfg;

  const std::vector<double>& levels = cfg.sweep->values;
  const int nl = static_cast<int>(levels.size());
  const int ns = static_cast<int>(cfg.seeds.size());
  const int reps = cfg.sweep->repetitions;

  // errors[level][seed][rep]
  std::vector<std::vector<std::vector<double>>> errors(
      nl, std::vector<std::vector<double>>(ns, std::vector<double>(reps)));

  const bool parallel = kernels::parallel_enabled();
  const long total = static_cast<long>(nl) * ns * reps;
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (long flat = 0; flat < total; ++flat) {
    const int li = static_cast<int>(flat / (static_cast<long>(ns) * reps));
    const int si = static_cast<int>((flat / reps) % ns);
    const int ri = static_cast<int>(flat % reps);
    const std::uint64_t seed = cfg.seeds[si];
    const SampleSpec spec{
        static_cast<long>(levels[li]),
        derive_seed(seed, {kPathRepetition, static_cast<std::uint64_t>(li),
                           static_cast<std::uint64_t>(ri)})};
    InstanceBundle bundle = build_instance(cfg, seed, spec);
    set_sampling(bundle, spec);
    const std::vector<Reconstruction> recs = reconstruct(cfg.kind, bundle);
    double frob_sq = 0.0;
    for (std::size_t t = 0; t < recs.size(); ++t) {
      frob_sq +=
          std::pow(frobenius_distance(recs[t].elements, bundle.oracles[t]), 2);
    }
    errors[li][si][ri] = std::sqrt(frob_sq);
  }

  std::vector<double> pooled_rmse(nl);
  for (int li = 0; li < nl; ++li) {
    SweepPoint point;
    point.value = levels[li];
    double pooled_sq = 0.0;
    for (int si = 0; si < ns; ++si) {
      double seed_sq = 0.0;
      for (int ri = 0; ri < reps; ++ri) {
        seed_sq += errors[li][si][ri] * errors[li][si][ri];
      }
      point.per_seed_rmse.push_back(std::sqrt(seed_sq / reps));
      pooled_sq += seed_sq;
    }
    pooled_rmse[li] = std::sqrt(pooled_sq / (static_cast<double>(ns) * reps));
    point.rmse = pooled_rmse[li];
    report.sweep_points.push_back(std::move(point));
  }
  report.slopes["shots"] = loglog_slope(levels, pooled_rmse);
  report.wall_ms = elapsed_ms(start);
  return report;
}

}  // namespace krauscope
