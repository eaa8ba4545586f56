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

#include <cstdio>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "krauscope/linalg.hpp"
#include "krauscope/serialize.hpp"

using namespace krauscope;

namespace {

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("operators: JSON round trip is exact") {
  const CMatrix m = random_unitary(4, 2718);
  const CMatrix back = operator_from_json(operator_to_json(m), "t");
  REQUIRE(back.rows() == 4);
  REQUIRE(back.cols() == 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(back(i, j) == m(i, j));  // entrywise error 0 <= 1e-15
    }
  }
}

TEST_CASE("operators: schema violations carry the JSON path") {
  auto expect = [](const json& j, const std::string& needle) {
    try {
      operator_from_json(j, "config.instance.unitary");
      FAIL_CHECK("expected ConfigError for " << needle);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect(json::array(), "config.instance.unitary");
  expect(json{{"dims", {2}}, {"entries", json::array()}}, ".dims");
  expect(json{{"dims", {2, 2}}, {"entries", {1, 2, 3, 4}}}, ".entries[0]");
  expect(json{{"dims", {2, 2}}, {"entries", {{1, 0}, {0, 0}, {0, 0}}}},
         ".entries");
}

TEST_CASE("config: minimal input applies the documented defaults") {
  const ExperimentConfig cfg = config_from_json(json{{"kind", "density"}});
  CHECK(cfg.kind == TargetKind::Density);
  CHECK(cfg.d_s == 2);
  CHECK(cfg.d_e == 2);
  CHECK(cfg.theta == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
  CHECK_FALSE(cfg.sampled);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{12345});
  CHECK(cfg.mix_lambda == doctest::Approx(0.3));
  CHECK_FALSE(cfg.explicit_instance);
  CHECK_FALSE(cfg.probe_state.has_value());
  CHECK_FALSE(cfg.env_state.has_value());
}

TEST_CASE("config: save/load round trip is the identity") {
  ExperimentConfig cfg;
  cfg.kind = TargetKind::Kraus;
  cfg.d_s = 3;
  cfg.d_e = 2;
  cfg.sampled = true;
  cfg.shots = 5000;
  cfg.seeds = {4, 5, 6};
  cfg.mix_lambda = 0.25;
  cfg.sweep = SweepSpec{SweepSpec::Axis::Shots, {1000, 4000, 16000}, 60, 0.5};

  const auto path = temp_file("krauscope_cfg_roundtrip.json");
  save_config(cfg, path.string());
  const ExperimentConfig loaded = load_config(path.string());
  CHECK(config_to_json(loaded).dump() == config_to_json(cfg).dump());
  std::filesystem::remove(path);
}

TEST_CASE("config: explicit operators round trip and are re-validated") {
  ExperimentConfig cfg;
  cfg.kind = TargetKind::Unitary;
  cfg.explicit_instance = true;
  cfg.operators.unitary = random_unitary(3, 99);
  cfg.d_s = 3;

  const json j = config_to_json(cfg);
  const ExperimentConfig loaded = config_from_json(j);
  CHECK(loaded.explicit_instance);
  REQUIRE(loaded.operators.unitary.has_value());
  CHECK(loaded.operators.unitary->approx_equal(*cfg.operators.unitary, 0.0));
}

TEST_CASE("config: malformed fields name their JSON path") {
  auto expect = [](json j, const std::string& needle) {
    try {
      config_from_json(j);
      FAIL_CHECK("expected ConfigError mentioning " << needle);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  expect(json{{"kind", "quark"}}, "config.kind");
  expect(json{{"kind", "density"}, {"d_s", "two"}}, "config.d_s");
  expect(json{{"kind", "density"}, {"mode", "quick"}}, "config.mode");
  expect(json{{"kind", "density"}, {"frobnicate", 3}}, "config.frobnicate");
  expect(json{{"kind", "density"}, {"seeds", {-1}}}, "config.seeds[0]");
  expect(json{{"kind", "observable"},
              {"sweep", json{{"axis", "sideways"}, {"values", {1, 2, 3, 4}}}}},
         "config.sweep.axis");
  expect(json{{"kind", "density"}, {"d_s", 12}}, "config.d_s");
}

TEST_CASE("config: physics violations are rejected with residuals") {
  // Non-unitary "unitary".
  json j{{"kind", "unitary"},
         {"instance",
          json{{"unitary", operator_to_json(CMatrix::identity(2) *
                                            c64{1.1, 0.0})}}}};
  try {
    config_from_json(j);
    FAIL_CHECK("expected rejection of a non-unitary operator");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("config.instance.unitary") != std::string::npos);
    CHECK(msg.find("residual") != std::string::npos);
  }

  // Incomplete Kraus family.
  json k{{"kind", "kraus"},
         {"instance",
          json{{"kraus_ops", json::array({operator_to_json(pauli_x()),
                                          operator_to_json(pauli_z())})}}}};
  try {
    config_from_json(k);
    FAIL_CHECK("expected rejection of an incomplete family");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("completeness") != std::string::npos);
  }

  // Non-positive "density".
  json d{{"kind", "density"},
         {"instance",
          json{{"density",
                operator_to_json(CMatrix::diagonal(
                    {c64{1.5, 0.0}, c64{-0.5, 0.0}}))}}}};
  try {
    config_from_json(d);
    FAIL_CHECK("expected rejection of a non-positive state");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("config.instance.density") !=
          std::string::npos);
  }
}

TEST_CASE("report JSON embeds the fully resolved config") {
  ExperimentConfig cfg;
  cfg.kind = TargetKind::Unitary;
  cfg.d_s = 2;
  cfg.seeds = {42};
  const ExperimentReport report = run_experiment(cfg);
  const json j = report_to_json(report);

  CHECK(j["version"] == "0.1.0");
  CHECK(j["config"]["kind"] == "unitary");
  CHECK(j["config"]["lambda"] == doctest::Approx(0.3));
  CHECK(j["config"]["mode"] == "exact");
  CHECK(j["config"]["theta"].get<double>() ==
        doctest::Approx(std::numbers::pi / 2));
  CHECK(j.contains("timing"));
  CHECK(j["results"]["per_seed"].size() == 1);
  CHECK(j["results"]["per_seed"][0]["settings_used"] == 3);
  CHECK(j["results"]["per_seed"][0]["estimates"].size() == 1);
  CHECK(j["results"]["per_seed"][0]["oracles"].size() == 1);

  const json canonical = report_to_json(report, false);
  CHECK_FALSE(canonical.contains("timing"));
}

TEST_CASE("CSV: one row per element with the documented columns") {
  ExperimentConfig cfg;
  cfg.kind = TargetKind::Density;
  cfg.d_s = 2;
  cfg.seeds = {1, 2};
  const ExperimentReport report = run_experiment(cfg);
  const std::string csv = report_to_csv(report);

  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "seed,sweep_value,series,i,j,k,re_est,im_est,re_true,im_true,abs_err");

  int rows = 0;
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    ++rows;
    int commas = 0;
    for (char c : line) commas += (c == ',');
    CHECK(commas == 10);
  }
  CHECK(rows == 2 * 4);  // two seeds, four elements of a 2x2 target
}

TEST_CASE("CSV: sweeps flatten to one row per seed and point") {
  ExperimentConfig cfg;
  cfg.kind = TargetKind::Observable;
  cfg.d_s = 2;
  cfg.seeds = {1, 2};
  cfg.sweep = SweepSpec{SweepSpec::Axis::DeltaTheta,
                        {0.1, 0.05, 0.025, 0.0125}, 50, 0.5};
  const std::string csv = report_to_csv(run_experiment(cfg));
  int rows = 0;
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) rows += !line.empty();
  CHECK(rows == 4 * 2 * 2);  // points x seeds x methods
}

TEST_CASE("load_config: missing file and broken JSON") {
  CHECK_THROWS_AS(load_config("/nonexistent/nope.json"), ConfigError);

  const auto path = temp_file("krauscope_broken.json");
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  REQUIRE(f != nullptr);
  std::fputs("{\"kind\": ", f);
  std::fclose(f);
  try {
    load_config(path.string());
    FAIL_CHECK("expected parse failure");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("invalid JSON") != std::string::npos);
  }
  std::filesystem::remove(path);
}
