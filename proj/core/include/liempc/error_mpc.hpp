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

// Convex error-state MPC on SE(3).
//
// State x = [psi; xi] with psi = log(X_d^-1 X) and xi the body twist. Around
// the reference twist xi_d the continuous model is
//
//   x_dot = A x + B tau + h + h_res
//   A = [-ad_{xi_d}  I; 0  M^-1 H],  B = [0; M^-1 T],  h = [-xi_d; M^-1 b]
//
// where H, b linearize the hydrodynamic wrench, T is the thruster map and
// h_res is the residual supplied by a learner. Steps are discretized with
// forward Euler at the control period and the tracking output
// y = [psi; psi_dot] = G x - d is penalized over the horizon. Decision
// variables are the two propeller thrusts per step; the QP is condensed
// onto them and carries only box constraints.

#ifndef LIEMPC_ERROR_MPC_HPP_
#define LIEMPC_ERROR_MPC_HPP_

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "liempc/liegroup.hpp"
#include "liempc/qp_solver.hpp"
#include "liempc/reference.hpp"
#include "liempc/types.hpp"
#include "liempc/vessel.hpp"

namespace liempc {

struct ErrorState {
  Vec6 psi = Vec6::Zero();
  Twist xi = Twist::Zero();

  Vec12 stacked() const {
    Vec12 x;
    x << psi, xi;
    return x;
  }
};

// psi = log(X_d^-1 X); throws AngleNearPi near a half-turn error.
ErrorState error_state(const Pose& x, const Pose& x_d, const Twist& xi);

// First-order expansion of f(xi) = ad_xi^T M xi - D(xi) xi around xi_d:
// f(xi) ~ H xi + b.
struct HydroLinearization {
  Mat6 jacobian;
  Wrench offset;
};

HydroLinearization linearize_hydro(const VesselModel& model, const Twist& xi_d);

struct ContinuousErrorModel {
  Mat12 a;
  Mat12x2 b;
  Vec12 h;
};

ContinuousErrorModel continuous_error_model(const VesselModel& model,
                                            const ThrusterAllocation& allocation,
                                            const Twist& xi_d);

// G = [I 0; -ad_{xi_d} I] and d = [0; xi_d], so G x - d = [psi; psi_dot].
Mat12 output_matrix(const Twist& xi_d);
Vec12 output_offset(const Twist& xi_d);

// Thrusts that hold the reference acceleration with zero error.
Vec2 feedforward_thrusts(const VesselModel& model, const ThrusterAllocation& allocation,
                         const Twist& xi_d, const Twist& xi_d_next, double dt);

struct MpcConfig {
  int horizon = 30;
  double dt = 0.02;
  Vec12 output_weight = Vec12::Ones();           // Q, diagonal, on y
  Vec12 terminal_output_weight = Vec12::Ones();  // P, diagonal, on y_N
  // When set, replaces the terminal output weight with a state-space weight
  // on x_N - [0; xi_d] (e.g. a Riccati solution).
  std::optional<Mat12> terminal_state_weight;
  Vec2 input_weight = Vec2::Constant(1e-3);      // R on thrust - feedforward
  QpSettings qp;
  int max_fault_hold = 5;

  void validate() const;
};

struct LinearizedModel {
  std::vector<Mat12> a;          // A_k = I + A dt
  std::vector<Mat12x2> b;        // B_k = B dt
  std::vector<Vec12> h;          // h_k = h dt
  std::vector<Vec12> h_residual; // h_res,k = h_res dt
  std::vector<Mat12> g;          // output maps for k = 0..N
  std::vector<Vec12> d;
};

struct HorizonProblem {
  LinearizedModel model;
  QuadraticProgram qp;
  Vec12 x0 = Vec12::Zero();
  std::vector<Vec2> feedforward;
  Vec2 input_weight = Vec2::Zero();
  // Stage cost (x_k - x_ref,k)^T W_k (x_k - x_ref,k) for k = 1..N (index 0
  // unused) with x_ref,k = [0; xi_d,k].
  std::vector<Mat12> stage_weight;
  std::vector<Vec12> stage_target;

  // Rolls the discrete model out for stacked inputs u (2N).
  std::vector<Vec12> predict(const Eigen::VectorXd& u) const;

  // Objective including constant terms.
  double cost(const Eigen::VectorXd& u) const;
};

HorizonProblem build_horizon(const VesselModel& model, const ThrusterAllocation& allocation,
                             const MpcConfig& config, const ReferenceTrajectory& reference,
                             int k0, const Vec12& x0, std::span<const Vec12> residual_forecast = {});

struct MpcDiagnostics {
  double cost = 0.0;
  QpStatus status = QpStatus::kSolved;
  int qp_iterations = 0;
  bool solver_fault = false;
  int consecutive_faults = 0;
  bool saturated = false;
  double forecast_norm = 0.0;
  double solve_time_ms = 0.0;
};

struct ControlOutput {
  Wrench wrench = Wrench::Zero();
  Vec2 thrusts = Vec2::Zero();
  MpcDiagnostics diagnostics;
};

// Clips thrusts to the propeller limits and recomputes the realized wrench.
ControlOutput apply_thrust_limits(const ThrusterAllocation& allocation, const Vec2& thrusts);

// Inputs to the residual learner along the horizon.
struct PredictedState {
  Pose pose;
  Twist twist = Twist::Zero();
  double time = 0.0;
};

class ErrorStateMpc {
 public:
  ErrorStateMpc(const VesselModel& model, MpcConfig config,
                std::shared_ptr<const ReferenceTrajectory> reference);

  // Solves the horizon QP at reference index k and returns the first input.
  // A QP that is not solved holds the previous thrusts for up to
  // max_fault_hold cycles, then commands zero thrust.
  ControlOutput control_step(const PlantState& measurement, int k,
                             std::span<const Vec12> residual_forecast = {});

  // X_{k+j|k}, j = 0..N-1: the measurement at j = 0, then the previous
  // cycle's optimal states shifted by one step (reference on cycle 0).
  std::vector<PredictedState> predicted_states(const PlantState& measurement, int k) const;

  ContinuousErrorModel model_at(int k) const;

  const MpcConfig& config() const { return config_; }
  const VesselModel& vessel() const { return model_; }
  const ThrusterAllocation& allocation() const { return allocation_; }
  const ReferenceTrajectory& reference() const { return *reference_; }
  const HorizonProblem& last_problem() const { return last_problem_; }
  bool aborted() const { return consecutive_faults_ > config_.max_fault_hold; }

 private:
  VesselModel model_;
  ThrusterAllocation allocation_;
  MpcConfig config_;
  std::shared_ptr<const ReferenceTrajectory> reference_;
  QpSolver solver_;
  HorizonProblem last_problem_;
  std::vector<Vec12> last_states_;
  int last_k_ = -1;
  Vec2 last_thrusts_ = Vec2::Zero();
  int consecutive_faults_ = 0;
  std::optional<QpWarmStart> warm_;
};

}  // namespace liempc

#endif  // LIEMPC_ERROR_MPC_HPP_
