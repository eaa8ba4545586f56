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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "krauscope/characterize.hpp"
#include "krauscope/harness.hpp"
#include "krauscope/linalg.hpp"
#include "krauscope/serialize.hpp"
#include "krauscope/verify.hpp"
#include "krauscope/version.hpp"

namespace {

using namespace krauscope;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<long> shots;
  std::optional<double> theta;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON experiment config");
  cmd->add_option("--out", flags.out_path,
                  "output file (default: stdout)");
  cmd->add_option("--format", flags.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--seed", flags.seed, "override the seed list with one seed");
  cmd->add_option("--mode", flags.mode, "exact|sampled")
      ->check(CLI::IsMember({"exact", "sampled"}));
  cmd->add_option("--shots", flags.shots, "shots per expectation estimate");
  cmd->add_option("--theta", flags.theta, "projector-gate angle in radians");
}

ExperimentConfig resolve_config(const CommonFlags& flags,
                                std::optional<TargetKind> kind) {
  ExperimentConfig cfg;
  if (!flags.config_path.empty()) cfg = load_config(flags.config_path);
  if (kind) cfg.kind = *kind;
  if (flags.mode) cfg.sampled = (*flags.mode == "sampled");
  if (flags.shots) cfg.shots = *flags.shots;
  if (flags.theta) cfg.theta = *flags.theta;
  if (flags.seed) {
    cfg.seeds = {*flags.seed};
  } else if (flags.config_path.empty()) {
    // KRAUSCOPE_SEED replaces the built-in default only; an explicit
    // --seed or a config file wins.
    if (const char* env = std::getenv("KRAUSCOPE_SEED")) {
      try {
        cfg.seeds = {std::stoull(env)};
      } catch (const std::exception&) {
        throw ConfigError("KRAUSCOPE_SEED", "not an unsigned integer");
      }
    }
  }
  cfg.validate();
  return cfg;
}

void emit(const ExperimentReport& report, const CommonFlags& flags) {
  const std::string payload = flags.format == "csv"
                                  ? report_to_csv(report)
                                  : report_to_json(report).dump(2) + "\n";
  if (flags.out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(flags.out_path);
  if (!out) {
    throw ConfigError("--out", "cannot write '" + flags.out_path + "'");
  }
  out << payload;
}

void print_summary(const ExperimentReport& report) {
  std::cerr << "kind=" << to_string(report.config.kind)
            << " seeds=" << report.config.seeds.size()
            << " mode=" << (report.config.sampled ? "sampled" : "exact");
  if (report.max_frobenius_error) {
    std::cerr << " max_frobenius_error=" << *report.max_frobenius_error;
  }
  for (const auto& [name, slope] : report.slopes) {
    std::cerr << " slope[" << name << "]=" << slope;
  }
  std::cerr << " wall_ms=" << report.wall_ms << "\n";
}

int run_demo_shared_effect() {
  const auto [plain, rotated] = shared_effect_pair();
  const DensityMatrix input = default_input_state(2, 0.3);

  const KrausSetup setup_a{dilation_from_kraus(plain), input};
  const KrausSetup setup_b{dilation_from_kraus(rotated), input};

  const CMatrix a_hat = kraus_full(setup_a, 0).elements;
  const CMatrix b_hat = kraus_full(setup_b, 0).elements;
  const CMatrix e_a = povm_full(setup_a, 0).elements;
  const CMatrix e_b = povm_full(setup_b, 0).elements;

  std::cout << "Two channels whose first outcome shares the effect E0 = I/2,\n"
               "reconstructed element by element from protocol runs alone.\n\n";
  std::cout << "operator A0 (first channel):\n" << a_hat.to_string() << "\n\n";
  std::cout << "operator A0~ (second channel):\n" << b_hat.to_string() << "\n\n";
  std::cout << "Frobenius distance between the operators: "
            << frobenius_distance(a_hat, b_hat) << "\n\n";
  std::cout << "effect E0 from the first channel:\n" << e_a.to_string()
            << "\n\n";
  std::cout << "effect E0 from the second channel:\n" << e_b.to_string()
            << "\n\n";
  std::cout << "Frobenius distance between the effects:   "
            << frobenius_distance(e_a, e_b) << "\n";
  return kExitOk;
}

int run_verify() {
  const auto results = run_full_verification();
  int failures = 0;
  for (const CheckResult& r : results) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " — "
              << r.detail << "\n";
    if (!r.passed) ++failures;
  }
  std::cout << (failures == 0 ? "all checks passed\n"
                              : std::to_string(failures) + " check(s) failed\n");
  return failures == 0 ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"krauscope — probe-based direct characterization of quantum "
               "operations, states, and measurements"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonFlags flags;
  std::optional<TargetKind> kind;
  bool want_sweep_dtheta = false;
  bool want_sweep_shots = false;

  CLI::App* characterize =
      app.add_subcommand("characterize", "reconstruct one target kind");
  characterize->require_subcommand(1);
  for (const auto& [name, value] :
       {std::pair<const char*, TargetKind>{"kraus", TargetKind::Kraus},
        {"povm", TargetKind::Povm},
        {"unitary", TargetKind::Unitary},
        {"observable", TargetKind::Observable},
        {"density", TargetKind::Density}}) {
    CLI::App* sub = characterize->add_subcommand(
        name, std::string("reconstruct a ") + name + " target");
    add_common_flags(sub, flags);
    const TargetKind captured = value;
    sub->callback([&kind, captured]() { kind = captured; });
  }

  CLI::App* sweep = app.add_subcommand("sweep", "run a scaling sweep");
  sweep->require_subcommand(1);
  CLI::App* dtheta = sweep->add_subcommand(
      "dtheta", "observable truncation error vs gate-angle difference");
  add_common_flags(dtheta, flags);
  dtheta->callback([&want_sweep_dtheta]() { want_sweep_dtheta = true; });
  CLI::App* shots_cmd =
      sweep->add_subcommand("shots", "reconstruction error vs shot budget");
  add_common_flags(shots_cmd, flags);
  shots_cmd->callback([&want_sweep_shots]() { want_sweep_shots = true; });

  CLI::App* verify =
      app.add_subcommand("verify", "run the full invariant suite");
  CLI::App* demo = app.add_subcommand("demo", "worked examples");
  CLI::App* demo_ambiguity = demo->add_subcommand(
      "povm-ambiguity",
      "two Kraus operators with one shared POVM element");
  demo->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (verify->parsed()) return run_verify();
    if (demo_ambiguity->parsed()) return run_demo_shared_effect();

    ExperimentConfig cfg = resolve_config(flags, kind);
    if (want_sweep_dtheta || want_sweep_shots) {
      if (!cfg.sweep) {
        throw ConfigError("config.sweep",
                          want_sweep_dtheta
                              ? "sweep dtheta needs a sweep block with axis "
                                "delta_theta in the config"
                              : "sweep shots needs a sweep block with axis "
                                "shots in the config");
      }
      const bool is_dtheta =
          cfg.sweep->axis == SweepSpec::Axis::DeltaTheta;
      if (want_sweep_dtheta != is_dtheta) {
        throw ConfigError("config.sweep.axis",
                          "does not match the requested sweep subcommand");
      }
    }
    const ExperimentReport report = run_experiment(cfg);
    emit(report, flags);
    print_summary(report);
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
