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

#include "liempc/error_mpc.hpp"

#include <chrono>
#include <cmath>

namespace liempc {

ErrorState error_state(const Pose& x, const Pose& x_d, const Twist& xi) {
  ErrorState e;
  e.psi = log_se3(x_d.inverse() * x);
  e.xi = xi;
  return e;
}

HydroLinearization linearize_hydro(const VesselModel& model, const Twist& xi_d) {
  const Mat6& m = model.mass_matrix();
  const VesselParams& p = model.params();
  const Vec6 momentum = m * xi_d;

  // d/dxi (ad_xi^T w) for fixed w = [w1; w2] is [w1^ w2^; w2^ 0].
  Mat6 coadjoint = Mat6::Zero();
  const Mat3 w1 = hat3(momentum.head<3>());
  const Mat3 w2 = hat3(momentum.tail<3>());
  coadjoint.topLeftCorner<3, 3>() = w1;
  coadjoint.topRightCorner<3, 3>() = w2;
  coadjoint.bottomLeftCorner<3, 3>() = w2;

  const Vec6 damping_slope =
      -p.linear_damping.array() - 2.0 * p.quadratic_damping.array() * xi_d.array().abs();

  HydroLinearization lin;
  lin.jacobian = ad(xi_d).transpose() * m + coadjoint;
  lin.jacobian.diagonal() -= damping_slope;
  lin.offset = model.hydro_wrench(xi_d) - lin.jacobian * xi_d;
  return lin;
}

ContinuousErrorModel continuous_error_model(const VesselModel& model,
                                            const ThrusterAllocation& allocation,
                                            const Twist& xi_d) {
  const HydroLinearization lin = linearize_hydro(model, xi_d);
  const Mat6& m_inv = model.mass_inverse();
  ContinuousErrorModel c;
  c.a.setZero();
  c.a.topLeftCorner<6, 6>() = -ad(xi_d);
  c.a.topRightCorner<6, 6>().setIdentity();
  c.a.bottomRightCorner<6, 6>() = m_inv * lin.jacobian;
  c.b.setZero();
  c.b.bottomRows<6>() = m_inv * allocation.matrix();
  c.h << -xi_d, m_inv * lin.offset;
  return c;
}

Mat12 output_matrix(const Twist& xi_d) {
  Mat12 g = Mat12::Identity();
  g.bottomLeftCorner<6, 6>() = -ad(xi_d);
  return g;
}

Vec12 output_offset(const Twist& xi_d) {
  Vec12 d;
  d << Vec6::Zero(), xi_d;
  return d;
}

Vec2 feedforward_thrusts(const VesselModel& model, const ThrusterAllocation& allocation,
                         const Twist& xi_d, const Twist& xi_d_next, double dt) {
  const Twist accel = (xi_d_next - xi_d) / dt;
  const Wrench required = model.mass_matrix() * accel - model.hydro_wrench(xi_d);
  return allocation.saturate(allocation.allocate(required));
}

void MpcConfig::validate() const {
  if (horizon < 1) throw ConfigError("mpc: horizon must be >= 1");
  if (!(dt > 0.0)) throw ConfigError("mpc: dt must be positive");
  if ((output_weight.array() < 0.0).any() || (terminal_output_weight.array() < 0.0).any() ||
      (input_weight.array() < 0.0).any()) {
    throw ConfigError("mpc: weights must be positive semidefinite");
  }
  if (terminal_state_weight) {
    const Mat12& p = *terminal_state_weight;
    if ((p - p.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
      throw ConfigError("mpc: terminal state weight must be symmetric");
    }
  }
  if (max_fault_hold < 0) throw ConfigError("mpc: max_fault_hold must be >= 0");
}

std::vector<Vec12> HorizonProblem::predict(const Eigen::VectorXd& u) const {
  const int n = static_cast<int>(model.a.size());
  std::vector<Vec12> x(n + 1);
  x[0] = x0;
  for (int k = 0; k < n; ++k) {
    x[k + 1] = model.a[k] * x[k] + model.b[k] * u.segment<2>(2 * k) + model.h[k] + model.h_residual[k];
  }
  return x;
}

double HorizonProblem::cost(const Eigen::VectorXd& u) const {
  const int n = static_cast<int>(model.a.size());
  const std::vector<Vec12> x = predict(u);
  double j = 0.0;
  for (int k = 1; k <= n; ++k) {
    const Vec12 e = x[k] - stage_target[k];
    j += e.dot(stage_weight[k] * e);
  }
  for (int k = 0; k < n; ++k) {
    const Vec2 du = u.segment<2>(2 * k) - feedforward[k];
    j += du.dot(input_weight.cwiseProduct(du));
  }
  return j;
}

HorizonProblem build_horizon(const VesselModel& model, const ThrusterAllocation& allocation,
                             const MpcConfig& config, const ReferenceTrajectory& reference,
                             int k0, const Vec12& x0, std::span<const Vec12> residual_forecast) {
  const int n = config.horizon;
  const double dt = config.dt;
  HorizonProblem prob;
  prob.x0 = x0;
  prob.input_weight = config.input_weight;
  LinearizedModel& lm = prob.model;
  lm.a.resize(n);
  lm.b.resize(n);
  lm.h.resize(n);
  lm.h_residual.resize(n);
  lm.g.resize(n + 1);
  lm.d.resize(n + 1);
  prob.feedforward.resize(n);
  prob.stage_weight.assign(n + 1, Mat12::Zero());
  prob.stage_target.assign(n + 1, Vec12::Zero());

  std::vector<Twist> xi_ref(n + 2);
  for (int k = 0; k < n + 2; ++k) xi_ref[k] = reference.at(k0 + k).twist;

  for (int k = 0; k < n; ++k) {
    const ContinuousErrorModel c = continuous_error_model(model, allocation, xi_ref[k]);
    lm.a[k] = Mat12::Identity() + c.a * dt;
    lm.b[k] = c.b * dt;
    lm.h[k] = c.h * dt;
    lm.h_residual[k] =
        k < static_cast<int>(residual_forecast.size()) ? Vec12(residual_forecast[k] * dt) : Vec12::Zero();
    prob.feedforward[k] = feedforward_thrusts(model, allocation, xi_ref[k], xi_ref[k + 1], dt);
  }
  const Mat12 q = config.output_weight.asDiagonal();
  const Mat12 p = config.terminal_output_weight.asDiagonal();
  for (int k = 0; k <= n; ++k) {
    lm.g[k] = output_matrix(xi_ref[k]);
    lm.d[k] = output_offset(xi_ref[k]);
    if (k == 0) continue;
    // y = G x - d = G (x - [0; xi_d]).
    prob.stage_target[k] << Vec6::Zero(), xi_ref[k];
    if (k < n) {
      prob.stage_weight[k] = lm.g[k].transpose() * q * lm.g[k];
    } else if (config.terminal_state_weight) {
      prob.stage_weight[k] = *config.terminal_state_weight;
    } else {
      prob.stage_weight[k] = lm.g[k].transpose() * p * lm.g[k];
    }
  }

  // Free response (all inputs zero).
  std::vector<Vec12> free(n + 1);
  free[0] = x0;
  for (int k = 0; k < n; ++k) {
    free[k + 1] = lm.a[k].lazyProduct(free[k]) + lm.h[k] + lm.h_residual[k];
  }

  // Condensing. Column block i of the state sensitivity starts at x_{i+1} =
  // B_i; its adjoint lambda_m = W_m V_m + A_m^T lambda_{m+1} gives
  // H(r, i) = B_r^T lambda_{r+1}. The small fixed-size products are forced
  // onto the coefficient-based path.
  const int nu = 2 * n;
  QuadraticProgram& qp = prob.qp;
  qp.hessian.setZero(nu, nu);
  qp.gradient.setZero(nu);
  std::vector<Mat12> a_t(n);
  for (int m = 0; m < n; ++m) a_t[m] = lm.a[m].transpose();
  std::vector<Mat12x2> v(n + 1);
  std::vector<Mat12x2> lambda(n + 2);
  for (int i = 0; i < n; ++i) {
    v[i + 1] = lm.b[i];
    for (int m = i + 1; m < n; ++m) v[m + 1] = lm.a[m].lazyProduct(v[m]);
    lambda[n] = prob.stage_weight[n].lazyProduct(v[n]);
    for (int m = n - 1; m >= 1; --m) {
      lambda[m] = a_t[m].lazyProduct(lambda[m + 1]);
      if (m >= i + 1) lambda[m] += prob.stage_weight[m].lazyProduct(v[m]);
    }
    for (int r = 0; r <= i; ++r) {
      const Eigen::Matrix2d block = 2.0 * lm.b[r].transpose().lazyProduct(lambda[r + 1]);
      qp.hessian.block<2, 2>(2 * r, 2 * i) = block;
      qp.hessian.block<2, 2>(2 * i, 2 * r) = block.transpose();
    }
  }
  std::vector<Vec12> mus(n + 1);
  mus[n] = prob.stage_weight[n].lazyProduct(free[n] - prob.stage_target[n]);
  for (int m = n - 1; m >= 1; --m) {
    mus[m] = prob.stage_weight[m].lazyProduct(free[m] - prob.stage_target[m]) +
             a_t[m].lazyProduct(mus[m + 1]);
  }
  const Eigen::Matrix2d r = config.input_weight.asDiagonal();
  for (int i = 0; i < n; ++i) {
    qp.gradient.segment<2>(2 * i) =
        2.0 * (lm.b[i].transpose().lazyProduct(mus[i + 1]) - r * prob.feedforward[i]);
    qp.hessian.block<2, 2>(2 * i, 2 * i) += 2.0 * r;
  }
  // Symmetrize away round-off from the two triangle writes.
  qp.hessian = (0.5 * (qp.hessian + qp.hessian.transpose())).eval();
  qp.constraint_matrix = Eigen::MatrixXd::Identity(nu, nu);
  qp.lower = Eigen::VectorXd::Constant(nu, allocation.thrust_min());
  qp.upper = Eigen::VectorXd::Constant(nu, allocation.thrust_max());
  return prob;
}

ControlOutput apply_thrust_limits(const ThrusterAllocation& allocation, const Vec2& thrusts) {
  ControlOutput out;
  out.thrusts = allocation.saturate(thrusts);
  out.wrench = allocation.wrench(out.thrusts);
  out.diagnostics.saturated = allocation.saturated(out.thrusts);
  return out;
}

ErrorStateMpc::ErrorStateMpc(const VesselModel& model, MpcConfig config,
                             std::shared_ptr<const ReferenceTrajectory> reference)
    : model_(model),
      allocation_(model.params()),
      config_(std::move(config)),
      reference_(std::move(reference)),
      solver_(config_.qp) {
  config_.validate();
  if (!reference_) throw ConfigError("mpc: reference trajectory required");
}

ContinuousErrorModel ErrorStateMpc::model_at(int k) const {
  return continuous_error_model(model_, allocation_, reference_->at(k).twist);
}

std::vector<PredictedState> ErrorStateMpc::predicted_states(const PlantState& measurement, int k) const {
  const int n = config_.horizon;
  std::vector<PredictedState> out(n);
  const bool have_previous = last_k_ == k - 1 && static_cast<int>(last_states_.size()) == n + 1;
  for (int j = 0; j < n; ++j) {
    const double t = (k + j) * config_.dt;
    if (j == 0) {
      out[j] = {measurement.pose, measurement.twist, measurement.time};
      continue;
    }
    const ReferenceSample ref = reference_->at(k + j);
    if (have_previous) {
      const Vec12& x = last_states_[j + 1];
      out[j] = {ref.pose * exp_se3(x.head<6>()), x.tail<6>(), t};
    } else {
      out[j] = {ref.pose, ref.twist, t};
    }
  }
  return out;
}

ControlOutput ErrorStateMpc::control_step(const PlantState& measurement, int k,
                                          std::span<const Vec12> residual_forecast) {
  const auto start = std::chrono::steady_clock::now();
  ControlOutput out;
  double forecast_norm = 0.0;
  for (const Vec12& h : residual_forecast) forecast_norm = std::max(forecast_norm, h.norm());

  bool fault = false;
  QpSolution sol;
  try {
    const Vec12 x0 = error_state(measurement.pose, reference_->at(k).pose, measurement.twist).stacked();
    last_problem_ = build_horizon(model_, allocation_, config_, *reference_, k, x0, residual_forecast);
    sol = solver_.solve(last_problem_.qp, warm_ ? &*warm_ : nullptr);
    fault = sol.status != QpStatus::kSolved || !sol.primal.allFinite();
  } catch (const AngleNearPi&) {
    fault = true;
  }

  if (!fault) {
    consecutive_faults_ = 0;
    out = apply_thrust_limits(allocation_, sol.primal.head<2>());
    out.diagnostics.cost = last_problem_.cost(sol.primal);
    last_states_ = last_problem_.predict(sol.primal);
    last_k_ = k;
    // Shifted warm start for the next cycle.
    QpWarmStart next;
    const int nu = static_cast<int>(sol.primal.size());
    next.primal.resize(nu);
    next.dual.resize(nu);
    next.primal.head(nu - 2) = sol.primal.tail(nu - 2);
    next.primal.tail<2>() = sol.primal.tail<2>();
    next.dual.head(nu - 2) = sol.dual.tail(nu - 2);
    next.dual.tail<2>() = sol.dual.tail<2>();
    warm_ = std::move(next);
  } else {
    ++consecutive_faults_;
    warm_.reset();
    last_k_ = -1;
    const Vec2 hold = consecutive_faults_ <= config_.max_fault_hold ? last_thrusts_ : Vec2::Zero();
    out = apply_thrust_limits(allocation_, hold);
  }
  last_thrusts_ = out.thrusts;
  out.diagnostics.status = sol.status;
  out.diagnostics.qp_iterations = sol.iterations;
  out.diagnostics.solver_fault = fault;
  out.diagnostics.consecutive_faults = consecutive_faults_;
  out.diagnostics.forecast_norm = forecast_norm;
  out.diagnostics.solve_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace liempc
