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

#include <chrono>
#include <optional>

#include "liempc/harness.hpp"
#include "liempc/tuning.hpp"

namespace liempc {

std::string to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kPid:
      return "pid";
    case ControllerKind::kMpc:
      return "mpc";
    case ControllerKind::kL1Mpc:
      return "l1-mpc";
    case ControllerKind::kOnlineMpc:
      return "online-mpc";
  }
  return "mpc";
}

ControllerKind controller_kind_from_string(const std::string& name) {
  if (name == "pid") return ControllerKind::kPid;
  if (name == "mpc") return ControllerKind::kMpc;
  if (name == "l1-mpc") return ControllerKind::kL1Mpc;
  if (name == "online-mpc") return ControllerKind::kOnlineMpc;
  throw ConfigError("unknown controller kind '" + name + "'");
}

MpcConfig resolved_mpc_config(const Scenario& scenario) {
  MpcConfig config = scenario.mpc;
  config.dt = scenario.control_dt();
  if (scenario.terminal_mode == TerminalWeightMode::kDare) {
    const PlanarTuning t =
        tune_straight_line(VesselModel(scenario.model), config, scenario.tuning_surge_speed);
    config.terminal_state_weight = t.terminal_state_weight;
  } else {
    config.terminal_state_weight.reset();
  }
  return config;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

class PidController : public Controller {
 public:
  PidController(const Scenario& s, const ControllerResources& r)
      : pid_(s.pid, s.model), reference_(r.reference), dt_(s.control_dt()) {}

  CycleRecord control(const PlantState& measurement, int k) override {
    const auto start = Clock::now();
    CycleRecord rec;
    const Vec3 e = planar_tracking_error(measurement.pose, reference_->at(k).pose);
    rec.thrusts = pid_.step(e, measurement.twist, dt_);
    rec.compute_ms = elapsed_ms(start);
    return rec;
  }

 private:
  TwoLayerPid pid_;
  std::shared_ptr<const ReferenceTrajectory> reference_;
  double dt_;
};

// Shared by the MPC variants: measures the residual of the previous
// interval against the nominal error model.
class MpcControllerBase : public Controller {
 public:
  MpcControllerBase(const Scenario& s, const ControllerResources& r)
      : mpc_(VesselModel(s.model), resolved_mpc_config(s), r.reference),
        dt_(s.control_dt()),
        noise_std_(s.derivative_noise_std),
        noise_(r.noise_seed, r.noise_stream) {}

  bool aborted() const override { return mpc_.aborted(); }

 protected:
  // Returns the residual for the interval ending at this measurement, if
  // one can be formed.
  std::optional<Vec12> measure(const PlantState& measurement, int k) {
    std::optional<Vec12> x;
    try {
      x = error_state(measurement.pose, mpc_.reference().at(k).pose, measurement.twist).stacked();
    } catch (const AngleNearPi&) {
    }
    std::optional<Vec12> residual;
    if (x && previous_) {
      residual = measure_residual(previous_->x, *x, previous_->thrusts, mpc_.model_at(previous_->k), dt_);
      if (noise_std_ > 0.0) {
        for (int i = 0; i < 12; ++i) (*residual)[i] += noise_std_ * noise_.normal();
      }
    }
    pending_x_ = x;
    return residual;
  }

  void remember(int k, const Vec2& thrusts) {
    if (pending_x_) {
      previous_ = Previous{*pending_x_, thrusts, k};
    } else {
      previous_.reset();
    }
  }

  struct Previous {
    Vec12 x;
    Vec2 thrusts;
    int k;
  };

  ErrorStateMpc mpc_;
  double dt_;
  double noise_std_;
  CounterRng noise_;
  std::optional<Vec12> pending_x_;
  std::optional<Previous> previous_;
};

class NominalMpcController : public MpcControllerBase {
 public:
  using MpcControllerBase::MpcControllerBase;

  CycleRecord control(const PlantState& measurement, int k) override {
    const auto start = Clock::now();
    CycleRecord rec;
    if (auto h = measure(measurement, k)) rec.residual = *h;
    const ControlOutput out = mpc_.control_step(measurement, k);
    rec.thrusts = out.thrusts;
    rec.solver_fault = out.diagnostics.solver_fault;
    rec.qp_iterations = out.diagnostics.qp_iterations;
    remember(k, rec.thrusts);
    rec.compute_ms = elapsed_ms(start);
    return rec;
  }
};

class OnlineMpcController : public MpcControllerBase {
 public:
  OnlineMpcController(const Scenario& s, const ControllerResources& r)
      : MpcControllerBase(s, r), learner_(*r.features, s.learner) {}

  CycleRecord control(const PlantState& measurement, int k) override {
    const auto start = Clock::now();
    CycleRecord rec;
    if (auto h = measure(measurement, k)) {
      rec.residual = *h;
      rec.learner_loss = learner_.update(*h, previous_input_);
    }

    const std::vector<PredictedState> predicted = mpc_.predicted_states(measurement, k);
    std::vector<Vec13> inputs;
    inputs.reserve(predicted.size());
    for (const PredictedState& p : predicted) inputs.push_back(learner_input(p.pose, p.twist, p.time));
    const std::vector<Vec12> forecast = learner_.forecast(inputs);
    rec.forecast = forecast.front();

    const ControlOutput out = mpc_.control_step(measurement, k, forecast);
    rec.thrusts = out.thrusts;
    rec.solver_fault = out.diagnostics.solver_fault;
    rec.qp_iterations = out.diagnostics.qp_iterations;
    remember(k, rec.thrusts);
    previous_input_ = inputs.front();
    rec.compute_ms = elapsed_ms(start);
    return rec;
  }

 private:
  OnlineLearner learner_;
  Vec13 previous_input_ = Vec13::Zero();
};

class L1MpcController : public MpcControllerBase {
 public:
  L1MpcController(const Scenario& s, const ControllerResources& r)
      : MpcControllerBase(s, r), l1_(VesselModel(s.model), l1_config(s)) {}

  CycleRecord control(const PlantState& measurement, int k) override {
    const auto start = Clock::now();
    CycleRecord rec;
    if (auto h = measure(measurement, k)) rec.residual = *h;
    if (first_) {
      l1_.reset(measurement.twist);
      first_ = false;
    } else {
      l1_.adapt(measurement.twist);
    }
    const ControlOutput out = mpc_.control_step(measurement, k);
    const ThrusterAllocation& alloc = mpc_.allocation();
    const Wrench corrected = l1_.correct(alloc.wrench(out.thrusts));
    rec.thrusts = alloc.saturate(alloc.allocate(corrected));
    l1_.propagate(alloc.wrench(rec.thrusts), dt_);
    rec.solver_fault = out.diagnostics.solver_fault;
    rec.qp_iterations = out.diagnostics.qp_iterations;
    rec.l1_prediction_error = l1_.prediction_error();
    remember(k, rec.thrusts);
    rec.compute_ms = elapsed_ms(start);
    return rec;
  }

 private:
  static L1Config l1_config(const Scenario& s) {
    L1Config c = s.l1;
    c.sample_period = s.control_dt();
    return c;
  }

  L1Adaptive l1_;
  bool first_ = true;
};

}  // namespace

std::unique_ptr<Controller> make_controller(const Scenario& scenario, ControllerKind kind,
                                            const ControllerResources& resources) {
  if (!resources.reference) throw ConfigError("controller: reference trajectory required");
  switch (kind) {
    case ControllerKind::kPid:
      return std::make_unique<PidController>(scenario, resources);
    case ControllerKind::kMpc:
      return std::make_unique<NominalMpcController>(scenario, resources);
    case ControllerKind::kL1Mpc:
      return std::make_unique<L1MpcController>(scenario, resources);
    case ControllerKind::kOnlineMpc:
      if (!resources.features) throw ConfigError("online-mpc requires a feature map");
      return std::make_unique<OnlineMpcController>(scenario, resources);
  }
  throw ConfigError("unknown controller kind");
}

}  // namespace liempc
