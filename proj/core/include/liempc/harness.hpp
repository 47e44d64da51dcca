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

#ifndef LIEMPC_HARNESS_HPP_
#define LIEMPC_HARNESS_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "liempc/error_mpc.hpp"
#include "liempc/feature_extractor.hpp"
#include "liempc/feature_map.hpp"
#include "liempc/l1_adaptive.hpp"
#include "liempc/online_learner.hpp"
#include "liempc/pid.hpp"
#include "liempc/reference.hpp"
#include "liempc/rng.hpp"
#include "liempc/vessel.hpp"

namespace liempc {

enum class ControllerKind { kPid, kMpc, kL1Mpc, kOnlineMpc };

std::string to_string(ControllerKind kind);
ControllerKind controller_kind_from_string(const std::string& name);

struct ControllerSpec {
  std::string name;
  ControllerKind kind = ControllerKind::kMpc;
};

struct DisturbanceLevel {
  std::string label;
  DisturbanceSpec spec;
};

enum class TerminalWeightMode { kOutput, kDare };

inline constexpr int kScenarioSchemaVersion = 1;

struct Scenario {
  std::string name = "scenario";
  TrajectorySpec trajectory;
  double control_rate_hz = 50.0;
  double plant_dt = 1e-3;
  VesselParams plant = default_vessel_params();
  VesselParams model = default_vessel_params();  // controller's nominal model
  std::vector<DisturbanceLevel> disturbances{{"none", {}}};
  std::vector<ControllerSpec> controllers{{"mpc", ControllerKind::kMpc}};
  MpcConfig mpc;
  TerminalWeightMode terminal_mode = TerminalWeightMode::kOutput;
  double tuning_surge_speed = 0.5;
  LearnerConfig learner;
  std::string feature_map_path;                  // resolved, may be empty
  L1Config l1;
  PidConfig pid;
  int trials = 10;
  std::uint64_t seed = 1;
  bool initial_offset = true;
  double offset_radius = 1.0;                    // m
  double derivative_noise_std = 0.0;             // on the measured state derivative
  int collect_rounds = 10;

  double control_dt() const { return 1.0 / control_rate_hz; }
  int plant_steps_per_control() const;
  int control_steps() const;
  void validate() const;
};

// Delta p = r [sqrt(u) cos(theta), sqrt(u) sin(theta), 0].
Vec3 initial_offset(double u, double theta, double radius = 1.0);
Vec3 sample_initial_offset(CounterRng& rng, double radius = 1.0);

struct CycleRecord {
  Vec2 thrusts = Vec2::Zero();
  Vec12 residual = Vec12::Zero();   // measured for the previous interval
  Vec12 forecast = Vec12::Zero();   // one-step forecast used this cycle
  double compute_ms = 0.0;
  bool solver_fault = false;
  int qp_iterations = 0;
  double learner_loss = 0.0;
  double l1_prediction_error = 0.0;
};

class Controller {
 public:
  virtual ~Controller() = default;
  virtual CycleRecord control(const PlantState& measurement, int k) = 0;
  virtual bool aborted() const { return false; }
};

struct ControllerResources {
  std::shared_ptr<const ReferenceTrajectory> reference;
  std::shared_ptr<const FeatureMap> features;   // required for online-mpc
  std::uint64_t noise_seed = 0;
  std::uint64_t noise_stream = 0;
};

// The scenario's MPC configuration with the terminal weight resolved.
MpcConfig resolved_mpc_config(const Scenario& scenario);

std::unique_ptr<Controller> make_controller(const Scenario& scenario, ControllerKind kind,
                                            const ControllerResources& resources);

struct StepLog {
  double time = 0.0;
  Vec13 input = Vec13::Zero();    // learner input at the cycle start
  Vec3 reference = Vec3::Zero();  // x, y, yaw
  Vec3 actual = Vec3::Zero();
  Twist twist = Twist::Zero();
  Vec2 thrusts = Vec2::Zero();
  Vec12 residual = Vec12::Zero();
  Vec12 forecast = Vec12::Zero();
  bool solver_fault = false;
  int qp_iterations = 0;
};

struct RunSummary {
  double rmse = 0.0;              // sqrt(mean ||e||^2)
  double rmse_literal = 0.0;      // sqrt(mean ||e||)
  double mean_error = 0.0;
  double max_error = 0.0;
  double saturation_fraction = 0.0;
  bool aborted = false;
  int solver_faults = 0;
  double l1_max_prediction_error = 0.0;
};

struct RunResult {
  std::string controller;
  std::string disturbance;
  int trial = 0;
  std::vector<StepLog> log;
  std::vector<double> compute_ms;   // per cycle; not part of the deterministic log
  RunSummary summary;
};

struct PlanarRmse {
  double standard = 0.0;
  double literal = 0.0;
};

// Over log entries [first, end).
PlanarRmse compute_rmse(const std::vector<StepLog>& log, std::size_t first);
// Second half of the run.
PlanarRmse compute_rmse(const std::vector<StepLog>& log);
RunSummary summarize(const std::vector<StepLog>& log, double thrust_min, double thrust_max);

std::shared_ptr<const FeatureMap> load_features(const Scenario& scenario);

RunResult run_trial(const Scenario& scenario, int controller_index, int disturbance_index, int trial,
                    std::shared_ptr<const ReferenceTrajectory> reference = nullptr,
                    std::shared_ptr<const FeatureMap> features = nullptr);

struct ExperimentResult {
  std::vector<RunResult> runs;  // controller-major, then disturbance, then trial
};

// Runs every (controller, disturbance, trial) cell on  worker threads.
ExperimentResult run_experiment(const Scenario& scenario, int jobs, bool keep_logs = true);

// Nominal-MPC closed loop logging (Z_t, h_t) per control cycle; round r
// uses disturbance level r mod levels and trial index r.
ResidualDataset collect_dataset(const Scenario& scenario, int jobs = 1);

void write_run_log(std::ostream& os, const RunResult& run);

}  // namespace liempc

#endif  // LIEMPC_HARNESS_HPP_
