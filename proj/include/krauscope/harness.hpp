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

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "krauscope/characterize.hpp"
#include "krauscope/matrix.hpp"

namespace krauscope {

/// Configuration or input-file error carrying the offending field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct SweepSpec {
  enum class Axis { DeltaTheta, Shots };
  Axis axis = Axis::DeltaTheta;
  std::vector<double> values;
  int repetitions = 50;  ///< shots axis: sampling repetitions per level
  double center = 0.5;   ///< delta-theta axis: midpoint of the two gate angles
};

/// Operators supplied explicitly instead of drawn from the seeded ensembles.
/// All are re-validated (unitarity / positivity / completeness) on load.
struct ExplicitOperators {
  std::vector<CMatrix> kraus_ops;
  std::optional<CMatrix> unitary;
  std::optional<CMatrix> observable;
  std::optional<CMatrix> density;
  std::optional<CMatrix> reference_unitary;
};

struct ExperimentConfig {
  TargetKind kind = TargetKind::Density;
  int d_s = 2;
  int d_e = 2;
  double theta = 1.5707963267948966;
  bool sampled = false;
  long shots = 10000;
  std::vector<std::uint64_t> seeds = {12345};
  std::optional<SweepSpec> sweep;
  bool explicit_instance = false;
  ExplicitOperators operators;
  double mix_lambda = 0.3;  ///< mixing weight of the default input state
  double obs_theta1 = 0.525;
  double obs_theta2 = 0.475;
  ObservableMethod method = ObservableMethod::Refined;
  std::optional<CMatrix> probe_state;  ///< default (|0>+|1>)/sqrt(2)
  std::optional<CMatrix> env_state;    ///< default uniform superposition

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Per-seed outcome of a single (non-sweep) experiment. Element-level
/// failures are recorded here rather than aborting the batch.
struct SeedOutcome {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double frobenius_error = 0.0;
  double max_element_error = 0.0;
  int settings_used = 0;
  Residuals residuals;
  std::optional<double> fidelity;
  std::optional<double> first_order_max_error;
  std::optional<double> refined_max_error;
  std::vector<CMatrix> estimates;
  std::vector<CMatrix> oracles;
  std::vector<ElementFlag> flags;
};

struct SweepPoint {
  double value = 0.0;  ///< delta-theta, or shots
  // delta-theta axis: mean over seeds of the max-element error, per method.
  std::optional<double> first_order_error;
  std::optional<double> refined_error;
  std::vector<double> per_seed_first_order;
  std::vector<double> per_seed_refined;
  // shots axis: root-mean-square reconstruction error over repetitions.
  std::optional<double> rmse;
  std::vector<double> per_seed_rmse;
};

struct ExperimentReport {
  std::string version;
  ExperimentConfig config;
  std::vector<SeedOutcome> per_seed;
  std::optional<double> max_frobenius_error;
  std::optional<double> mean_frobenius_error;
  std::optional<double> max_element_error;
  std::vector<SweepPoint> sweep_points;
  std::map<std::string, double> slopes;  ///< log-log fits, by series name
  double wall_ms = 0.0;  ///< informational; excluded from canonical output
};

/// Runs the configured experiment: dispatches to the matching sweep when a
/// sweep axis is present, otherwise one reconstruction per seed. The report
/// is deterministic for a fixed config (modulo wall_ms) regardless of the
/// execution policy.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Truncation-order sweep for the observable estimators: per-point errors
/// for both methods and their fitted log-log slopes.
ExperimentReport sweep_delta_theta(const ExperimentConfig& cfg);

/// Shot-noise sweep: per-level RMSE over repeated sampled reconstructions of
/// a fixed instance, with the fitted error-vs-shots slope.
ExperimentReport sweep_shots(const ExperimentConfig& cfg);

/// The default characterization input: (1 - lambda) |+><+| + lambda I/d.
/// Every matrix entry is nonzero, so all element estimators are reachable.
DensityMatrix default_input_state(int d, double lambda);

/// Ordinary least squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace krauscope
