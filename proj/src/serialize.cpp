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

#include "krauscope/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "krauscope/linalg.hpp"
#include "krauscope/quantum.hpp"

namespace krauscope {

namespace {

TargetKind kind_from_string(const std::string& s, const std::string& path) {
  if (s == "kraus") return TargetKind::Kraus;
  if (s == "povm") return TargetKind::Povm;
  if (s == "unitary") return TargetKind::Unitary;
  if (s == "observable") return TargetKind::Observable;
  if (s == "density") return TargetKind::Density;
  throw ConfigError(path, "unknown kind '" + s +
                              "' (expected kraus|povm|unitary|observable|"
                              "density)");
}

ObservableMethod method_from_string(const std::string& s,
                                    const std::string& path) {
  if (s == "first_order") return ObservableMethod::FirstOrder;
  if (s == "refined") return ObservableMethod::Refined;
  throw ConfigError(path, "unknown method '" + s +
                              "' (expected first_order|refined)");
}

void expect_type(const json& j, json::value_t type, const std::string& path,
                 const char* what) {
  bool ok = j.type() == type;
  // Integers are acceptable wherever floats are expected.
  if (!ok && type == json::value_t::number_float && j.is_number()) ok = true;
  if (!ok) throw ConfigError(path, std::string("expected ") + what);
}

double get_number(const json& j, const std::string& path) {
  expect_type(j, json::value_t::number_float, path, "a number");
  return j.get<double>();
}

long get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<long>();
}

}  // namespace

json operator_to_json(const CMatrix& m) {
  json entries = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      entries.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    }
  }
  return json{{"dims", json::array({m.rows(), m.cols()})},
              {"entries", std::move(entries)}};
}

CMatrix operator_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an operator object");
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].size() != 2) {
    throw ConfigError(path + ".dims", "expected [rows, cols]");
  }
  const long rows = get_integer(j["dims"][0], path + ".dims[0]");
  const long cols = get_integer(j["dims"][1], path + ".dims[1]");
  if (rows < 1 || cols < 1) {
    throw ConfigError(path + ".dims", "dimensions must be >= 1");
  }
  if (!j.contains("entries") || !j["entries"].is_array()) {
    throw ConfigError(path + ".entries", "expected an array of [re, im]");
  }
  const json& entries = j["entries"];
  if (static_cast<long>(entries.size()) != rows * cols) {
    throw ConfigError(path + ".entries",
                      "expected " + std::to_string(rows * cols) +
                          " entries, got " + std::to_string(entries.size()));
  }
  CMatrix m(static_cast<int>(rows), static_cast<int>(cols));
  for (long idx = 0; idx < rows * cols; ++idx) {
    const json& e = entries[idx];
    const std::string epath = path + ".entries[" + std::to_string(idx) + "]";
    if (!e.is_array() || e.size() != 2) {
      throw ConfigError(epath, "expected [re, im]");
    }
    const double re = get_number(e[0], epath + "[0]");
    const double im = get_number(e[1], epath + "[1]");
    m(static_cast<int>(idx / cols), static_cast<int>(idx % cols)) = c64{re, im};
  }
  return m;
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["kind"] = to_string(cfg.kind);
  j["d_s"] = cfg.d_s;
  j["d_e"] = cfg.d_e;
  j["theta"] = cfg.theta;
  j["mode"] = cfg.sampled ? "sampled" : "exact";
  j["shots"] = cfg.shots;
  j["seeds"] = cfg.seeds;
  j["lambda"] = cfg.mix_lambda;
  j["theta1"] = cfg.obs_theta1;
  j["theta2"] = cfg.obs_theta2;
  j["method"] = to_string(cfg.method);
  if (cfg.sweep) {
    json sw;
    sw["axis"] = cfg.sweep->axis == SweepSpec::Axis::DeltaTheta ? "delta_theta"
                                                                : "shots";
    sw["values"] = cfg.sweep->values;
    sw["repetitions"] = cfg.sweep->repetitions;
    sw["center"] = cfg.sweep->center;
    j["sweep"] = std::move(sw);
  } else {
    j["sweep"] = nullptr;
  }
  if (cfg.explicit_instance) {
    json inst;
    if (!cfg.operators.kraus_ops.empty()) {
      json ops = json::array();
      for (const CMatrix& a : cfg.operators.kraus_ops) {
        ops.push_back(operator_to_json(a));
      }
      inst["kraus_ops"] = std::move(ops);
    }
    if (cfg.operators.unitary) {
      inst["unitary"] = operator_to_json(*cfg.operators.unitary);
    }
    if (cfg.operators.observable) {
      inst["observable"] = operator_to_json(*cfg.operators.observable);
    }
    if (cfg.operators.density) {
      inst["density"] = operator_to_json(*cfg.operators.density);
    }
    if (cfg.operators.reference_unitary) {
      inst["reference_unitary"] =
          operator_to_json(*cfg.operators.reference_unitary);
    }
    j["instance"] = std::move(inst);
  } else {
    j["instance"] = "random";
  }
  j["probe_state"] =
      cfg.probe_state ? operator_to_json(*cfg.probe_state) : json(nullptr);
  j["env_state"] =
      cfg.env_state ? operator_to_json(*cfg.env_state) : json(nullptr);
  return j;
}

ExperimentConfig config_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected a JSON object");

  static const std::set<std::string> known = {
      "kind",   "d_s",    "d_e",    "theta",  "mode",
      "shots",  "seeds",  "lambda", "theta1", "theta2",
      "method", "sweep",  "instance", "probe_state", "env_state"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) {
      throw ConfigError(path + "." + it.key(), "unknown field");
    }
  }

  ExperimentConfig cfg;
  if (j.contains("kind")) {
    expect_type(j["kind"], json::value_t::string, path + ".kind", "a string");
    cfg.kind = kind_from_string(j["kind"].get<std::string>(), path + ".kind");
  }
  if (j.contains("d_s")) cfg.d_s = static_cast<int>(get_integer(j["d_s"], path + ".d_s"));
  if (j.contains("d_e")) cfg.d_e = static_cast<int>(get_integer(j["d_e"], path + ".d_e"));
  if (j.contains("theta")) cfg.theta = get_number(j["theta"], path + ".theta");
  if (j.contains("mode")) {
    expect_type(j["mode"], json::value_t::string, path + ".mode", "a string");
    const std::string m = j["mode"].get<std::string>();
    if (m == "exact") {
      cfg.sampled = false;
    } else if (m == "sampled") {
      cfg.sampled = true;
    } else {
      throw ConfigError(path + ".mode", "expected exact|sampled");
    }
  }
  if (j.contains("shots")) cfg.shots = get_integer(j["shots"], path + ".shots");
  if (j.contains("seeds")) {
    if (!j["seeds"].is_array()) {
      throw ConfigError(path + ".seeds", "expected an array of integers");
    }
    cfg.seeds.clear();
    for (std::size_t i = 0; i < j["seeds"].size(); ++i) {
      const long s = get_integer(j["seeds"][i],
                                 path + ".seeds[" + std::to_string(i) + "]");
      if (s < 0) {
        throw ConfigError(path + ".seeds[" + std::to_string(i) + "]",
                          "seeds must be non-negative");
      }
      cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    }
  }
  if (j.contains("lambda")) cfg.mix_lambda = get_number(j["lambda"], path + ".lambda");
  if (j.contains("theta1")) cfg.obs_theta1 = get_number(j["theta1"], path + ".theta1");
  if (j.contains("theta2")) cfg.obs_theta2 = get_number(j["theta2"], path + ".theta2");
  if (j.contains("method")) {
    expect_type(j["method"], json::value_t::string, path + ".method", "a string");
    cfg.method =
        method_from_string(j["method"].get<std::string>(), path + ".method");
  }
  if (j.contains("sweep") && !j["sweep"].is_null()) {
    const json& sw = j["sweep"];
    const std::string spath = path + ".sweep";
    if (!sw.is_object()) throw ConfigError(spath, "expected an object or null");
    static const std::set<std::string> sweep_known = {"axis", "values",
                                                      "repetitions", "center"};
    for (auto it = sw.begin(); it != sw.end(); ++it) {
      if (!sweep_known.count(it.key())) {
        throw ConfigError(spath + "." + it.key(), "unknown field");
      }
    }
    SweepSpec spec;
    if (!sw.contains("axis") || !sw["axis"].is_string()) {
      throw ConfigError(spath + ".axis", "expected delta_theta|shots");
    }
    const std::string axis = sw["axis"].get<std::string>();
    if (axis == "delta_theta") {
      spec.axis = SweepSpec::Axis::DeltaTheta;
    } else if (axis == "shots") {
      spec.axis = SweepSpec::Axis::Shots;
    } else {
      throw ConfigError(spath + ".axis", "expected delta_theta|shots");
    }
    if (!sw.contains("values") || !sw["values"].is_array()) {
      throw ConfigError(spath + ".values", "expected an array of numbers");
    }
    for (std::size_t i = 0; i < sw["values"].size(); ++i) {
      spec.values.push_back(get_number(
          sw["values"][i], spath + ".values[" + std::to_string(i) + "]"));
    }
    if (sw.contains("repetitions")) {
      spec.repetitions = static_cast<int>(
          get_integer(sw["repetitions"], spath + ".repetitions"));
    }
    if (sw.contains("center")) {
      spec.center = get_number(sw["center"], spath + ".center");
    }
    cfg.sweep = std::move(spec);
  }
  if (j.contains("instance") && !(j["instance"].is_string() &&
                                  j["instance"].get<std::string>() == "random")) {
    const json& inst = j["instance"];
    const std::string ipath = path + ".instance";
    if (!inst.is_object()) {
      throw ConfigError(ipath, "expected \"random\" or an operator object");
    }
    static const std::set<std::string> inst_known = {
        "kraus_ops", "unitary", "observable", "density", "reference_unitary"};
    for (auto it = inst.begin(); it != inst.end(); ++it) {
      if (!inst_known.count(it.key())) {
        throw ConfigError(ipath + "." + it.key(), "unknown field");
      }
    }
    cfg.explicit_instance = true;
    if (inst.contains("kraus_ops")) {
      if (!inst["kraus_ops"].is_array()) {
        throw ConfigError(ipath + ".kraus_ops", "expected an array");
      }
      for (std::size_t k = 0; k < inst["kraus_ops"].size(); ++k) {
        cfg.operators.kraus_ops.push_back(operator_from_json(
            inst["kraus_ops"][k],
            ipath + ".kraus_ops[" + std::to_string(k) + "]"));
      }
      // Physics re-validation: completeness.
      try {
        KrausSet probe_set(cfg.operators.kraus_ops);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(ipath + ".kraus_ops", e.what());
      }
    }
    auto load_unitary = [&](const char* key) -> std::optional<CMatrix> {
      if (!inst.contains(key)) return std::nullopt;
      CMatrix u = operator_from_json(inst[key], ipath + "." + key);
      if (!u.is_square()) {
        throw ConfigError(ipath + "." + key, "must be square");
      }
      const double res = unitarity_residual(u);
      if (res > 1e-10) {
        throw ConfigError(ipath + "." + key,
                          "not unitary: residual " + std::to_string(res));
      }
      return u;
    };
    cfg.operators.unitary = load_unitary("unitary");
    cfg.operators.reference_unitary = load_unitary("reference_unitary");
    if (inst.contains("observable")) {
      CMatrix a = operator_from_json(inst["observable"], ipath + ".observable");
      const double res = hermiticity_residual(a);
      if (res > 1e-10) {
        throw ConfigError(ipath + ".observable",
                          "not Hermitian: residual " + std::to_string(res));
      }
      cfg.operators.observable = std::move(a);
    }
    if (inst.contains("density")) {
      CMatrix rho = operator_from_json(inst["density"], ipath + ".density");
      try {
        DensityMatrix check(rho);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(ipath + ".density", e.what());
      }
      cfg.operators.density = std::move(rho);
    }
    // A reference unitary alone does not make the instance explicit.
    if (cfg.operators.kraus_ops.empty() && !cfg.operators.unitary &&
        !cfg.operators.observable && !cfg.operators.density) {
      cfg.explicit_instance = false;
    }
  }
  if (j.contains("probe_state") && !j["probe_state"].is_null()) {
    cfg.probe_state = operator_from_json(j["probe_state"], path + ".probe_state");
  }
  if (j.contains("env_state") && !j["env_state"].is_null()) {
    cfg.env_state = operator_from_json(j["env_state"], path + ".env_state");
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("config", "cannot open file '" + file + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return config_from_json(j);
}

void save_config(const ExperimentConfig& cfg, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw ConfigError("config", "cannot write file '" + file + "'");
  out << config_to_json(cfg).dump(2) << "\n";
}

namespace {

json residuals_to_json(const Residuals& r) {
  json j = json::object();
  if (r.hermiticity) j["hermiticity"] = *r.hermiticity;
  if (r.trace_deviation) j["trace_deviation"] = *r.trace_deviation;
  if (r.completeness) j["completeness"] = *r.completeness;
  if (r.unitarity) j["unitarity"] = *r.unitarity;
  return j;
}

json flags_to_json(const std::vector<ElementFlag>& flags) {
  json arr = json::array();
  for (const ElementFlag& f : flags) {
    arr.push_back(json{{"row", f.row},
                       {"col", f.col},
                       {"denominator_magnitude", f.denominator_magnitude},
                       {"stderr_estimate", f.stderr_estimate}});
  }
  return arr;
}

}  // namespace

json report_to_json(const ExperimentReport& report, bool include_timing) {
  json j;
  j["version"] = report.version;
  j["config"] = config_to_json(report.config);

  json results;
  json per_seed = json::array();
  for (const SeedOutcome& o : report.per_seed) {
    json s;
    s["seed"] = o.seed;
    s["ok"] = o.ok;
    if (!o.ok) {
      s["error"] = o.error;
      per_seed.push_back(std::move(s));
      continue;
    }
    s["frobenius_error"] = o.frobenius_error;
    s["max_element_error"] = o.max_element_error;
    s["settings_used"] = o.settings_used;
    s["residuals"] = residuals_to_json(o.residuals);
    if (o.fidelity) s["fidelity"] = *o.fidelity;
    if (o.first_order_max_error) {
      s["first_order_max_error"] = *o.first_order_max_error;
    }
    if (o.refined_max_error) s["refined_max_error"] = *o.refined_max_error;
    json est = json::array(), orc = json::array();
    for (const CMatrix& e : o.estimates) est.push_back(operator_to_json(e));
    for (const CMatrix& t : o.oracles) orc.push_back(operator_to_json(t));
    s["estimates"] = std::move(est);
    s["oracles"] = std::move(orc);
    s["flagged_elements"] = flags_to_json(o.flags);
    per_seed.push_back(std::move(s));
  }
  results["per_seed"] = std::move(per_seed);

  json aggregate = json::object();
  if (report.max_frobenius_error) {
    aggregate["max_frobenius_error"] = *report.max_frobenius_error;
  }
  if (report.mean_frobenius_error) {
    aggregate["mean_frobenius_error"] = *report.mean_frobenius_error;
  }
  if (report.max_element_error) {
    aggregate["max_element_error"] = *report.max_element_error;
  }
  results["aggregate"] = std::move(aggregate);

  json points = json::array();
  for (const SweepPoint& p : report.sweep_points) {
    json pj;
    pj["value"] = p.value;
    if (p.first_order_error) pj["first_order_error"] = *p.first_order_error;
    if (p.refined_error) pj["refined_error"] = *p.refined_error;
    if (!p.per_seed_first_order.empty()) {
      pj["per_seed_first_order"] = p.per_seed_first_order;
    }
    if (!p.per_seed_refined.empty()) {
      pj["per_seed_refined"] = p.per_seed_refined;
    }
    if (p.rmse) pj["rmse"] = *p.rmse;
    if (!p.per_seed_rmse.empty()) pj["per_seed_rmse"] = p.per_seed_rmse;
    points.push_back(std::move(pj));
  }
  results["sweep_points"] = std::move(points);
  results["slopes"] = report.slopes;
  j["results"] = std::move(results);

  if (include_timing) {
    j["timing"] = json{{"wall_ms", report.wall_ms}};
  }
  return j;
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "seed,sweep_value,series,i,j,k,re_est,im_est,re_true,im_true,abs_err\n";

  const bool is_dtheta =
      report.config.sweep &&
      report.config.sweep->axis == SweepSpec::Axis::DeltaTheta;
  const bool is_shots = report.config.sweep &&
                        report.config.sweep->axis == SweepSpec::Axis::Shots;

  if (is_dtheta) {
    for (const SweepPoint& p : report.sweep_points) {
      for (std::size_t si = 0; si < p.per_seed_first_order.size(); ++si) {
        out << report.config.seeds[si] << "," << fmt17(p.value)
            << ",first_order,,,,,,,," << fmt17(p.per_seed_first_order[si])
            << "\n";
        out << report.config.seeds[si] << "," << fmt17(p.value)
            << ",refined,,,,,,,," << fmt17(p.per_seed_refined[si]) << "\n";
      }
    }
    return out.str();
  }
  if (is_shots) {
    for (const SweepPoint& p : report.sweep_points) {
      for (std::size_t si = 0; si < p.per_seed_rmse.size(); ++si) {
        out << report.config.seeds[si] << "," << fmt17(p.value)
            << ",rmse,,,,,,,," << fmt17(p.per_seed_rmse[si]) << "\n";
      }
    }
    return out.str();
  }

  for (const SeedOutcome& o : report.per_seed) {
    if (!o.ok) continue;
    for (std::size_t t = 0; t < o.estimates.size(); ++t) {
      const CMatrix& est = o.estimates[t];
      const CMatrix& truth = o.oracles[t];
      const bool indexed = o.estimates.size() > 1;
      for (int i = 0; i < est.rows(); ++i) {
        for (int jcol = 0; jcol < est.cols(); ++jcol) {
          out << o.seed << ",,estimate," << i << "," << jcol << ",";
          if (indexed) out << t;
          out << "," << fmt17(est(i, jcol).real()) << ","
              << fmt17(est(i, jcol).imag()) << ","
              << fmt17(truth(i, jcol).real()) << ","
              << fmt17(truth(i, jcol).imag()) << ","
              << fmt17(std::abs(est(i, jcol) - truth(i, jcol))) << "\n";
        }
      }
    }
  }
  return out.str();
}

}  // namespace krauscope
