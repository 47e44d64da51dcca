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

#include "liempc/harness.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

namespace liempc {

int Scenario::plant_steps_per_control() const {
  return static_cast<int>(std::lround(control_dt() / plant_dt));
}

int Scenario::control_steps() const {
  return static_cast<int>(std::lround(trajectory.duration * control_rate_hz));
}

void Scenario::validate() const {
  if (!(trajectory.duration > 0.0)) throw ConfigError("scenario: duration must be positive");
  if (!(control_rate_hz > 0.0) || !(plant_dt > 0.0)) {
    throw ConfigError("scenario: control rate and plant dt must be positive");
  }
  const double ratio = control_dt() / plant_dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1) {
    throw ConfigError("scenario: control period must be an integer multiple of plant dt");
  }
  if (disturbances.empty()) throw ConfigError("scenario: at least one disturbance level required");
  if (controllers.empty()) throw ConfigError("scenario: at least one controller required");
  if (trials < 1) throw ConfigError("scenario: trials must be >= 1");
  if (collect_rounds < 1) throw ConfigError("scenario: collect_rounds must be >= 1");
  if (!(offset_radius >= 0.0) || !(derivative_noise_std >= 0.0)) {
    throw ConfigError("scenario: offset radius and noise must be >= 0");
  }
  plant.validate();
  model.validate();
  for (const DisturbanceLevel& d : disturbances) d.spec.validate();
  mpc.validate();
  learner.validate();
  l1.validate();
  pid.validate();
  for (const DisturbanceLevel& d : disturbances) {
    if (d.label.empty() || d.label.find_first_of(",\n") != std::string::npos) {
      throw ConfigError("scenario: disturbance labels must be non-empty without commas");
    }
  }
  for (const ControllerSpec& c : controllers) {
    if (c.name.empty() || c.name.find_first_of(",\n/") != std::string::npos) {
      throw ConfigError("scenario: controller names must be non-empty without commas or '/'");
    }
    if (c.kind == ControllerKind::kOnlineMpc && feature_map_path.empty()) {
      throw ConfigError("scenario: online-mpc requires learner.feature_map");
    }
  }
}

Vec3 initial_offset(double u, double theta, double radius) {
  const double r = radius * std::sqrt(u);
  return {r * std::cos(theta), r * std::sin(theta), 0.0};
}

Vec3 sample_initial_offset(CounterRng& rng, double radius) {
  const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double u = rng.uniform();
  return initial_offset(u, theta, radius);
}

std::shared_ptr<const FeatureMap> load_features(const Scenario& scenario) {
  if (scenario.feature_map_path.empty()) return nullptr;
  return std::make_shared<const FeatureMap>(read_feature_map_file(scenario.feature_map_path));
}

namespace {

Vec3 planar(const Pose& x) { return {x.position().x(), x.position().y(), x.yaw()}; }

struct TrialSetup {
  std::shared_ptr<const ReferenceTrajectory> reference;
  PlantState initial;
};

TrialSetup setup_trial(const Scenario& s, int trial, std::shared_ptr<const ReferenceTrajectory> reference) {
  TrialSetup t;
  t.reference = reference ? std::move(reference)
                          : std::make_shared<const ReferenceTrajectory>(
                                make_reference(s.trajectory, s.control_dt()));
  CounterRng rng(s.seed, static_cast<std::uint64_t>(trial));
  const Vec3 offset = s.initial_offset ? sample_initial_offset(rng, s.offset_radius) : Vec3::Zero();
  const ReferenceSample start = t.reference->at(0);
  t.initial.pose = Pose(start.pose.rotation(), start.pose.position() + offset);
  t.initial.twist = start.twist;
  t.initial.time = 0.0;
  return t;
}

// Noise draws use a stream disjoint from the initial-offset stream.
constexpr std::uint64_t kNoiseStreamBase = 1ULL << 32;

}  // namespace

RunResult run_trial(const Scenario& s, int controller_index, int disturbance_index, int trial,
                    std::shared_ptr<const ReferenceTrajectory> reference,
                    std::shared_ptr<const FeatureMap> features) {
  s.validate();
  if (controller_index < 0 || controller_index >= static_cast<int>(s.controllers.size()) ||
      disturbance_index < 0 || disturbance_index >= static_cast<int>(s.disturbances.size())) {
    throw std::out_of_range("run_trial: cell index out of range");
  }
  const ControllerSpec& spec = s.controllers[controller_index];
  const DisturbanceLevel& level = s.disturbances[disturbance_index];
  TrialSetup setup = setup_trial(s, trial, std::move(reference));
  if (!features && spec.kind == ControllerKind::kOnlineMpc) features = load_features(s);

  ControllerResources res{setup.reference, features, s.seed,
                          kNoiseStreamBase + static_cast<std::uint64_t>(trial)};
  std::unique_ptr<Controller> controller = make_controller(s, spec.kind, res);

  const VesselModel plant(s.plant);
  const ThrusterAllocation allocation(s.plant);
  const int steps = s.control_steps();
  const int substeps = s.plant_steps_per_control();
  const double dt = s.control_dt();

  RunResult result;
  result.controller = spec.name;
  result.disturbance = level.label;
  result.trial = trial;
  result.log.reserve(steps);
  result.compute_ms.reserve(steps);

  PlantState state = setup.initial;
  double l1_error = 0.0;
  for (int k = 0; k < steps; ++k) {
    state.time = k * dt;
    const CycleRecord rec = controller->control(state, k);
    StepLog entry;
    entry.time = state.time;
    entry.input = learner_input(state.pose, state.twist, state.time);
    entry.reference = planar(setup.reference->at(k).pose);
    entry.actual = planar(state.pose);
    entry.twist = state.twist;
    entry.thrusts = rec.thrusts;
    entry.residual = rec.residual;
    entry.forecast = rec.forecast;
    entry.solver_fault = rec.solver_fault;
    entry.qp_iterations = rec.qp_iterations;
    result.log.push_back(entry);
    result.compute_ms.push_back(rec.compute_ms);
    l1_error = std::max(l1_error, rec.l1_prediction_error);

    const Wrench wrench = allocation.wrench(rec.thrusts);
    for (int i = 0; i < substeps; ++i) state = step(plant, state, wrench, level.spec, s.plant_dt);
  }
  result.summary = summarize(result.log, allocation.thrust_min(), allocation.thrust_max());
  result.summary.aborted = controller->aborted();
  result.summary.l1_max_prediction_error = l1_error;
  return result;
}

namespace {

template <typename Fn>
void parallel_for(int n, int jobs, Fn fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

ExperimentResult run_experiment(const Scenario& s, int jobs, bool keep_logs) {
  s.validate();
  const auto reference =
      std::make_shared<const ReferenceTrajectory>(make_reference(s.trajectory, s.control_dt()));
  std::shared_ptr<const FeatureMap> features;
  for (const ControllerSpec& c : s.controllers) {
    if (c.kind == ControllerKind::kOnlineMpc) features = load_features(s);
  }
  const int levels = static_cast<int>(s.disturbances.size());
  const int cells = static_cast<int>(s.controllers.size()) * levels * s.trials;
  ExperimentResult out;
  out.runs.resize(cells);
  parallel_for(cells, jobs, [&](int i) {
    const int trial = i % s.trials;
    const int level = (i / s.trials) % levels;
    const int controller = i / (s.trials * levels);
    RunResult r = run_trial(s, controller, level, trial, reference, features);
    if (!keep_logs) r.log.clear();
    out.runs[i] = std::move(r);
  });
  return out;
}

ResidualDataset collect_dataset(const Scenario& s, int jobs) {
  s.validate();
  const auto reference =
      std::make_shared<const ReferenceTrajectory>(make_reference(s.trajectory, s.control_dt()));
  const int rounds = s.collect_rounds;
  std::vector<ResidualDataset> parts(rounds);

  parallel_for(rounds, jobs, [&](int r) {
    const DisturbanceLevel& level = s.disturbances[r % s.disturbances.size()];
    const TrialSetup setup = setup_trial(s, r, reference);
    ErrorStateMpc mpc(VesselModel(s.model), resolved_mpc_config(s), reference);
    const VesselModel plant(s.plant);
    const ThrusterAllocation allocation(s.plant);
    const int steps = s.control_steps();
    const int substeps = s.plant_steps_per_control();
    const double dt = s.control_dt();
    CounterRng noise(s.seed, kNoiseStreamBase + static_cast<std::uint64_t>(r));

    PlantState state = setup.initial;
    for (int k = 0; k < steps; ++k) {
      state.time = k * dt;
      const ControlOutput out = mpc.control_step(state, k);
      const PlantState before = state;
      const Wrench wrench = allocation.wrench(out.thrusts);
      for (int i = 0; i < substeps; ++i) state = step(plant, state, wrench, level.spec, s.plant_dt);
      Vec12 x;
      Vec12 x_next;
      try {
        x = error_state(before.pose, reference->at(k).pose, before.twist).stacked();
        x_next = error_state(state.pose, reference->at(k + 1).pose, state.twist).stacked();
      } catch (const AngleNearPi&) {
        continue;  // no residual across a pi-rotation error
      }
      const Vec13 z = learner_input(before.pose, before.twist, before.time);
      Vec12 h = measure_residual(x, x_next, out.thrusts, mpc.model_at(k), dt);
      if (s.derivative_noise_std > 0.0) {
        for (int i = 0; i < 12; ++i) h[i] += s.derivative_noise_std * noise.normal();
      }
      parts[r].add(z, h);
    }
  });

  ResidualDataset data;
  data.scenario = s.name;
  data.seed = s.seed;
  for (const ResidualDataset& p : parts) data.append(p);
  return data;
}

void write_run_log(std::ostream& os, const RunResult& run) {
  os << "time,ref_x,ref_y,ref_yaw,x,y,yaw,wx,wy,wz,vx,vy,vz,f_left,f_right,solver_fault,qp_iterations";
  for (int i = 1; i <= 12; ++i) os << ",h" << i;
  for (int i = 1; i <= 12; ++i) os << ",forecast" << i;
  os << "\n" << std::setprecision(10);
  for (const StepLog& l : run.log) {
    os << l.time;
    for (int i = 0; i < 3; ++i) os << "," << l.reference[i];
    for (int i = 0; i < 3; ++i) os << "," << l.actual[i];
    for (int i = 0; i < 6; ++i) os << "," << l.twist[i];
    os << "," << l.thrusts[0] << "," << l.thrusts[1] << "," << l.solver_fault << "," << l.qp_iterations;
    for (int i = 0; i < 12; ++i) os << "," << l.residual[i];
    for (int i = 0; i < 12; ++i) os << "," << l.forecast[i];
    os << "\n";
  }
}

}  // namespace liempc
