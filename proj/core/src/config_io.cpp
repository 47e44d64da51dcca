// Copyright 2026 The liempc Authors
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

#include "liempc/config_io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace liempc {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!keys.count(item.key())) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

template <typename T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <int N>
Eigen::Matrix<double, N, 1> vec(const json& j, const char* key, const Eigen::Matrix<double, N, 1>& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  Eigen::Matrix<double, N, 1> out;
  if (v.is_number()) {
    out.setConstant(v.get<double>());
    return out;
  }
  if (!v.is_array() || static_cast<int>(v.size()) != N) {
    throw ConfigError(std::string("'") + key + "' must be a number or an array of " + std::to_string(N));
  }
  for (int i = 0; i < N; ++i) out[i] = v[i].get<double>();
  return out;
}

// A diagonal given as an array of N, or a full N x N matrix.
template <int N>
Eigen::Matrix<double, N, N> mat(const json& j, const char* key, const Eigen::Matrix<double, N, N>& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (v.is_array() && static_cast<int>(v.size()) == N && v[0].is_number()) {
    Eigen::Matrix<double, N, 1> d;
    for (int i = 0; i < N; ++i) d[i] = v[i].get<double>();
    return d.asDiagonal();
  }
  if (v.is_array() && static_cast<int>(v.size()) == N && v[0].is_array()) {
    Eigen::Matrix<double, N, N> m;
    for (int r = 0; r < N; ++r) {
      if (static_cast<int>(v[r].size()) != N) throw ConfigError(std::string("'") + key + "': ragged matrix");
      for (int c = 0; c < N; ++c) m(r, c) = v[r][c].get<double>();
    }
    return m;
  }
  throw ConfigError(std::string("'") + key + "' must be a diagonal or a square matrix");
}

json to_array(const Eigen::MatrixXd& m) {
  json a = json::array();
  if (m.cols() == 1) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(m(i, 0));
    return a;
  }
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    a.push_back(row);
  }
  return a;
}

void check_version(const json& j, const std::string& where) {
  const int version = get<int>(j, "schema_version", kScenarioSchemaVersion);
  if (version != kScenarioSchemaVersion) {
    throw ConfigError(where + ": unsupported schema_version " + std::to_string(version));
  }
}

json read_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return json::parse(is, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return p;
  const std::filesystem::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal().string();
}

VesselParams vessel_value(const json& j, const std::filesystem::path& base, const VesselParams& fallback) {
  if (j.is_string()) return load_vessel_params(resolve(base, j.get<std::string>()));
  if (j.is_null()) return fallback;
  return vessel_params_from_json(j);
}

}  // namespace

VesselParams vessel_params_from_json(const json& j) {
  check_keys(j, "vessel", {"schema_version", "mass", "cog_offset", "inertia", "added_mass", "linear_damping",
                           "quadratic_damping", "thruster_lever_arm", "thrust_min", "thrust_max"});
  check_version(j, "vessel");
  const VesselParams d = default_vessel_params();
  VesselParams p;
  p.mass = get<double>(j, "mass", d.mass);
  p.cog_offset = vec<3>(j, "cog_offset", d.cog_offset);
  p.inertia = mat<3>(j, "inertia", d.inertia);
  p.added_mass = mat<6>(j, "added_mass", d.added_mass);
  p.linear_damping = vec<6>(j, "linear_damping", d.linear_damping);
  p.quadratic_damping = vec<6>(j, "quadratic_damping", d.quadratic_damping);
  p.thruster_lever_arm = get<double>(j, "thruster_lever_arm", d.thruster_lever_arm);
  p.thrust_min = get<double>(j, "thrust_min", d.thrust_min);
  p.thrust_max = get<double>(j, "thrust_max", d.thrust_max);
  p.validate();
  return p;
}

json vessel_params_to_json(const VesselParams& p) {
  json j;
  j["schema_version"] = kScenarioSchemaVersion;
  j["mass"] = p.mass;
  j["cog_offset"] = to_array(p.cog_offset);
  j["inertia"] = to_array(p.inertia);
  j["added_mass"] = to_array(p.added_mass);
  j["linear_damping"] = to_array(p.linear_damping);
  j["quadratic_damping"] = to_array(p.quadratic_damping);
  j["thruster_lever_arm"] = p.thruster_lever_arm;
  j["thrust_min"] = p.thrust_min;
  j["thrust_max"] = p.thrust_max;
  return j;
}

VesselParams load_vessel_params(const std::filesystem::path& path) {
  return vessel_params_from_json(read_json(path));
}

DisturbanceSpec disturbance_from_json(const json& j) {
  check_keys(j, "disturbance", {"label", "kind", "wrench", "wind_velocity", "drag_gain", "amplitude",
                                "frequency_hz", "phase", "current"});
  DisturbanceSpec d;
  d.kind = disturbance_kind_from_string(get<std::string>(j, "kind", "none"));
  d.wrench = vec<6>(j, "wrench", d.wrench);
  d.wind_velocity = vec<3>(j, "wind_velocity", d.wind_velocity);
  d.drag_gain = get<double>(j, "drag_gain", d.drag_gain);
  d.amplitude = vec<6>(j, "amplitude", d.amplitude);
  d.frequency_hz = vec<6>(j, "frequency_hz", d.frequency_hz);
  d.phase = vec<6>(j, "phase", d.phase);
  d.current = vec<6>(j, "current", d.current);
  d.validate();
  return d;
}

MpcConfig mpc_config_from_json(const json& j, Scenario* scenario) {
  check_keys(j, "mpc", {"horizon", "output_weight", "terminal_output_weight", "input_weight", "terminal",
                        "tuning_surge_speed", "max_fault_hold", "qp"});
  MpcConfig c;
  c.horizon = get<int>(j, "horizon", c.horizon);
  c.output_weight = vec<12>(j, "output_weight", c.output_weight);
  c.terminal_output_weight = vec<12>(j, "terminal_output_weight", c.terminal_output_weight);
  c.input_weight = vec<2>(j, "input_weight", c.input_weight);
  c.max_fault_hold = get<int>(j, "max_fault_hold", c.max_fault_hold);
  const std::string terminal = get<std::string>(j, "terminal", "output");
  if (terminal == "output") {
    scenario->terminal_mode = TerminalWeightMode::kOutput;
  } else if (terminal == "dare") {
    scenario->terminal_mode = TerminalWeightMode::kDare;
  } else {
    throw ConfigError("mpc.terminal must be 'output' or 'dare'");
  }
  scenario->tuning_surge_speed = get<double>(j, "tuning_surge_speed", scenario->tuning_surge_speed);
  if (j.contains("qp")) {
    const json& q = j.at("qp");
    check_keys(q, "mpc.qp", {"rho", "sigma", "alpha", "eps_abs", "eps_rel", "max_iterations",
                             "scaling_iterations", "polish", "check_interval"});
    c.qp.rho = get<double>(q, "rho", c.qp.rho);
    c.qp.sigma = get<double>(q, "sigma", c.qp.sigma);
    c.qp.alpha = get<double>(q, "alpha", c.qp.alpha);
    c.qp.eps_abs = get<double>(q, "eps_abs", c.qp.eps_abs);
    c.qp.eps_rel = get<double>(q, "eps_rel", c.qp.eps_rel);
    c.qp.max_iterations = get<int>(q, "max_iterations", c.qp.max_iterations);
    c.qp.scaling_iterations = get<int>(q, "scaling_iterations", c.qp.scaling_iterations);
    c.qp.polish = get<bool>(q, "polish", c.qp.polish);
    c.qp.check_interval = get<int>(q, "check_interval", c.qp.check_interval);
  }
  return c;
}

PidConfig pid_config_from_json(const json& j) {
  check_keys(j, "pid", {"along_track_gain", "cross_track_gain", "heading_gain", "min_surge_speed",
                        "max_surge_speed", "max_yaw_rate", "surge", "yaw"});
  PidConfig c;
  c.along_track_gain = get<double>(j, "along_track_gain", c.along_track_gain);
  c.cross_track_gain = get<double>(j, "cross_track_gain", c.cross_track_gain);
  c.heading_gain = get<double>(j, "heading_gain", c.heading_gain);
  c.min_surge_speed = get<double>(j, "min_surge_speed", c.min_surge_speed);
  c.max_surge_speed = get<double>(j, "max_surge_speed", c.max_surge_speed);
  c.max_yaw_rate = get<double>(j, "max_yaw_rate", c.max_yaw_rate);
  for (auto [key, gains] : {std::pair{"surge", &c.surge}, std::pair{"yaw", &c.yaw}}) {
    if (!j.contains(key)) continue;
    const json& g = j.at(key);
    check_keys(g, std::string("pid.") + key, {"kp", "ki", "kd", "integral_limit", "output_limit"});
    gains->kp = get<double>(g, "kp", gains->kp);
    gains->ki = get<double>(g, "ki", gains->ki);
    gains->kd = get<double>(g, "kd", gains->kd);
    gains->integral_limit = get<double>(g, "integral_limit", gains->integral_limit);
    gains->output_limit = get<double>(g, "output_limit", gains->output_limit);
  }
  c.validate();
  return c;
}

L1Config l1_config_from_json(const json& j) {
  check_keys(j, "l1", {"predictor_poles", "bandwidth", "predictor_step", "estimate_bound"});
  L1Config c;
  c.predictor_poles = vec<6>(j, "predictor_poles", c.predictor_poles);
  c.bandwidth = get<double>(j, "bandwidth", c.bandwidth);
  c.predictor_step = get<double>(j, "predictor_step", c.predictor_step);
  c.estimate_bound = vec<6>(j, "estimate_bound", c.estimate_bound);
  c.validate();
  return c;
}

Scenario scenario_from_json(const json& j, const std::filesystem::path& base_dir) {
  check_keys(j, "scenario",
             {"schema_version", "name", "trajectory", "control_rate_hz", "plant_dt", "vessel", "model",
              "disturbances", "wind_sweep", "controllers", "mpc", "learner", "l1", "pid", "trials", "seed",
              "initial_offset", "offset_radius", "derivative_noise_std", "collect_rounds"});
  if (!j.contains("schema_version")) throw ConfigError("scenario: schema_version is required");
  check_version(j, "scenario");
  Scenario s;
  s.name = get<std::string>(j, "name", s.name);

  if (j.contains("trajectory")) {
    const json& t = j.at("trajectory");
    check_keys(t, "trajectory", {"kind", "duration", "surge_speed", "zigzag_yaw_amplitude",
                                 "zigzag_time_scale", "lawnmower_legs", "lawnmower_turn_rate",
                                 "lawnmower_transit_length", "custom_file"});
    TrajectorySpec& ts = s.trajectory;
    ts.kind = trajectory_kind_from_string(get<std::string>(t, "kind", "zigzag"));
    ts.duration = get<double>(t, "duration", ts.duration);
    ts.surge_speed = get<double>(t, "surge_speed", ts.surge_speed);
    ts.zigzag_yaw_amplitude = get<double>(t, "zigzag_yaw_amplitude", ts.zigzag_yaw_amplitude);
    ts.zigzag_time_scale = get<double>(t, "zigzag_time_scale", ts.zigzag_time_scale);
    ts.lawnmower_legs = get<int>(t, "lawnmower_legs", ts.lawnmower_legs);
    ts.lawnmower_turn_rate = get<double>(t, "lawnmower_turn_rate", ts.lawnmower_turn_rate);
    ts.lawnmower_transit_length = get<double>(t, "lawnmower_transit_length", ts.lawnmower_transit_length);
    ts.custom_file = resolve(base_dir, get<std::string>(t, "custom_file", ""));
  }
  s.control_rate_hz = get<double>(j, "control_rate_hz", s.control_rate_hz);
  s.plant_dt = get<double>(j, "plant_dt", s.plant_dt);
  s.plant = vessel_value(j.value("vessel", json()), base_dir, s.plant);
  s.model = j.contains("model") ? vessel_value(j.at("model"), base_dir, s.plant) : s.plant;

  if (j.contains("disturbances") && j.contains("wind_sweep")) {
    throw ConfigError("scenario: give either disturbances or wind_sweep, not both");
  }
  if (j.contains("disturbances")) {
    s.disturbances.clear();
    for (const json& d : j.at("disturbances")) {
      const DisturbanceSpec spec = disturbance_from_json(d);
      s.disturbances.push_back({get<std::string>(d, "label", to_string(spec.kind)), spec});
    }
  }
  if (j.contains("wind_sweep")) {
    const json& w = j.at("wind_sweep");
    check_keys(w, "wind_sweep", {"speeds", "direction_deg", "drag_gain"});
    const double dir = get<double>(w, "direction_deg", 90.0) * std::numbers::pi / 180.0;
    const double gain = get<double>(w, "drag_gain", 1.0);
    s.disturbances.clear();
    for (double speed : w.at("speeds").get<std::vector<double>>()) {
      DisturbanceSpec d;
      d.kind = DisturbanceKind::kWindField;
      d.wind_velocity = Vec3(speed * std::cos(dir), speed * std::sin(dir), 0.0);
      d.drag_gain = gain;
      d.validate();
      std::ostringstream label;
      label << speed << " m/s";
      s.disturbances.push_back({label.str(), d});
    }
  }
  if (j.contains("controllers")) {
    s.controllers.clear();
    for (const json& c : j.at("controllers")) {
      if (c.is_string()) {
        const std::string kind = c.get<std::string>();
        s.controllers.push_back({kind, controller_kind_from_string(kind)});
        continue;
      }
      check_keys(c, "controller", {"name", "kind"});
      const std::string kind = get<std::string>(c, "kind", "mpc");
      s.controllers.push_back({get<std::string>(c, "name", kind), controller_kind_from_string(kind)});
    }
  }
  if (j.contains("mpc")) s.mpc = mpc_config_from_json(j.at("mpc"), &s);
  if (j.contains("learner")) {
    const json& l = j.at("learner");
    check_keys(l, "learner", {"feature_map", "buffer_size", "step_size", "smoothness"});
    s.learner.buffer_size = get<int>(l, "buffer_size", s.learner.buffer_size);
    s.learner.step_size = get<double>(l, "step_size", s.learner.step_size);
    s.learner.smoothness = get<double>(l, "smoothness", s.learner.smoothness);
    s.feature_map_path = resolve(base_dir, get<std::string>(l, "feature_map", ""));
  }
  if (j.contains("l1")) s.l1 = l1_config_from_json(j.at("l1"));
  if (j.contains("pid")) s.pid = pid_config_from_json(j.at("pid"));
  s.trials = get<int>(j, "trials", s.trials);
  s.seed = get<std::uint64_t>(j, "seed", s.seed);
  s.initial_offset = get<bool>(j, "initial_offset", s.initial_offset);
  s.offset_radius = get<double>(j, "offset_radius", s.offset_radius);
  s.derivative_noise_std = get<double>(j, "derivative_noise_std", s.derivative_noise_std);
  s.collect_rounds = get<int>(j, "collect_rounds", s.collect_rounds);
  s.mpc.dt = s.control_dt();
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_json(path), path.parent_path());
}

}  // namespace liempc
