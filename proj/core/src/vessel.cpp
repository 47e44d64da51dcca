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

#include "liempc/vessel.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace liempc {

Mat6 VesselParams::rigid_body_mass() const {
  Mat6 m = Mat6::Zero();
  const Mat3 r_hat = hat3(cog_offset);
  m.topLeftCorner<3, 3>() = inertia;
  m.topRightCorner<3, 3>() = mass * r_hat;
  m.bottomLeftCorner<3, 3>() = -mass * r_hat;
  m.bottomRightCorner<3, 3>() = mass * Mat3::Identity();
  return m;
}

Mat6 VesselParams::mass_matrix() const { return rigid_body_mass() + added_mass; }

void VesselParams::validate() const {
  if (!(mass > 0.0)) throw ConfigError("vessel: mass must be positive");
  if (!(thrust_min < 0.0 && thrust_max > 0.0)) {
    throw ConfigError("vessel: thrust limits must satisfy thrust_min < 0 < thrust_max");
  }
  if (!(thruster_lever_arm > 0.0)) throw ConfigError("vessel: lever arm must be positive");
  if ((linear_damping.array() > 0.0).any() || (quadratic_damping.array() > 0.0).any()) {
    throw ConfigError("vessel: damping derivatives must be <= 0 (dissipative hull)");
  }
  const Mat6 m = mass_matrix();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + m.cwiseAbs().maxCoeff())) {
    throw ConfigError("vessel: mass matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat6> eig(m, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw SingularMass("vessel: mass matrix is singular or not positive definite");
  }
}

VesselParams default_vessel_params() {
  VesselParams p;
  p.mass = 28.0;
  p.cog_offset = Vec3::Zero();
  p.inertia = Vec3(2.5, 3.5, 5.5).asDiagonal();
  Vec6 added;
  added << 0.5, 1.0, 1.5, 2.0, 14.0, 30.0;
  p.added_mass = added.asDiagonal();
  p.linear_damping << -6.0, -8.0, -6.0, -10.0, -40.0, -100.0;
  p.quadratic_damping << -2.0, -2.0, -4.0, -15.0, -60.0, -100.0;
  p.thruster_lever_arm = 0.3;
  p.thrust_min = -26.0;
  p.thrust_max = 50.0;
  return p;
}

void DisturbanceSpec::validate() const {
  if ((frequency_hz.array() < 0.0).any()) {
    throw ConfigError("disturbance: frequencies must be >= 0");
  }
  if (drag_gain < 0.0) throw ConfigError("disturbance: drag gain must be >= 0");
}

std::string to_string(DisturbanceKind kind) {
  switch (kind) {
    case DisturbanceKind::kNone:
      return "none";
    case DisturbanceKind::kConstantWorldWrench:
      return "constant_world_wrench";
    case DisturbanceKind::kWindField:
      return "wind_field";
    case DisturbanceKind::kSinusoidalWrench:
      return "sinusoidal_wrench";
    case DisturbanceKind::kCurrent:
      return "current";
  }
  return "none";
}

DisturbanceKind disturbance_kind_from_string(const std::string& name) {
  if (name == "none") return DisturbanceKind::kNone;
  if (name == "constant_world_wrench") return DisturbanceKind::kConstantWorldWrench;
  if (name == "wind_field") return DisturbanceKind::kWindField;
  if (name == "sinusoidal_wrench") return DisturbanceKind::kSinusoidalWrench;
  if (name == "current") return DisturbanceKind::kCurrent;
  throw ConfigError("unknown disturbance kind '" + name + "'");
}

Wrench disturbance_body_wrench(const DisturbanceSpec& dist, const PlantState& state) {
  const Mat3& r = state.pose.rotation();
  Wrench w = Wrench::Zero();
  switch (dist.kind) {
    case DisturbanceKind::kNone:
    case DisturbanceKind::kCurrent:
      break;
    case DisturbanceKind::kConstantWorldWrench:
      w.head<3>() = r.transpose() * dist.wrench.head<3>();
      w.tail<3>() = r.transpose() * dist.wrench.tail<3>();
      break;
    case DisturbanceKind::kWindField: {
      const Vec3 v_world = r * state.twist.tail<3>();
      const Vec3 v_rel = dist.wind_velocity - v_world;
      const Vec3 f_world = dist.drag_gain * v_rel.norm() * v_rel;
      w.tail<3>() = r.transpose() * f_world;
      break;
    }
    case DisturbanceKind::kSinusoidalWrench:
      for (int i = 0; i < 6; ++i) {
        w(i) = dist.amplitude(i) *
               std::sin(2.0 * std::numbers::pi * dist.frequency_hz(i) * state.time + dist.phase(i));
      }
      break;
  }
  return w;
}

Twist relative_twist(const DisturbanceSpec& dist, const Twist& xi) {
  return dist.kind == DisturbanceKind::kCurrent ? Twist(xi - dist.current) : xi;
}

ThrusterAllocation::ThrusterAllocation(double lever_arm, double thrust_min, double thrust_max)
    : lever_arm_(lever_arm), thrust_min_(thrust_min), thrust_max_(thrust_max) {
  matrix_.setZero();
  matrix_(kYaw, 0) = -lever_arm;
  matrix_(kYaw, 1) = lever_arm;
  matrix_(kSurge, 0) = 1.0;
  matrix_(kSurge, 1) = 1.0;
}

Vec2 ThrusterAllocation::allocate(const Wrench& wrench) const {
  const double surge = wrench(kSurge);
  const double diff = wrench(kYaw) / lever_arm_;
  return Vec2(0.5 * (surge - diff), 0.5 * (surge + diff));
}

Vec2 ThrusterAllocation::saturate(const Vec2& thrusts) const {
  return thrusts.cwiseMax(thrust_min_).cwiseMin(thrust_max_);
}

bool ThrusterAllocation::saturated(const Vec2& thrusts, double tol) const {
  return (thrusts.array() >= thrust_max_ - tol).any() || (thrusts.array() <= thrust_min_ + tol).any();
}

VesselModel::VesselModel(const VesselParams& params) : params_(params) {
  params_.validate();
  mass_ = params_.mass_matrix();
  mass_ = 0.5 * (mass_ + mass_.transpose()).eval();
  mass_inverse_ = mass_.llt().solve(Mat6::Identity());
}

Wrench VesselModel::coriolis_wrench(const Twist& xi) const {
  // ad_xi^T [h; p] = [h x w + p x v; p x w] with [h; p] = M xi.
  const Vec6 momentum = mass_ * xi;
  const Vec3 h = momentum.head<3>();
  const Vec3 p = momentum.tail<3>();
  const Vec3 w = xi.head<3>();
  const Vec3 v = xi.tail<3>();
  Wrench out;
  out << h.cross(w) + p.cross(v), p.cross(w);
  return out;
}

Mat6 VesselModel::damping_matrix(const Twist& xi_r) const {
  const Vec6 diag = -params_.linear_damping.array() - params_.quadratic_damping.array() * xi_r.array().abs();
  return diag.asDiagonal();
}

Wrench VesselModel::hydro_wrench(const Twist& xi, const Twist& xi_r) const {
  const Vec6 damping = (-params_.linear_damping.array() -
                        params_.quadratic_damping.array() * xi_r.array().abs()) *
                       xi_r.array();
  return coriolis_wrench(xi) - damping;
}

Twist VesselModel::acceleration(const Twist& xi, const Twist& xi_r, const Wrench& total_external) const {
  return mass_inverse_ * (hydro_wrench(xi, xi_r) + total_external);
}

StateRate VesselModel::continuous_dynamics(const PlantState& state, const Wrench& tau,
                                           const DisturbanceSpec& dist) const {
  StateRate rate;
  rate.pose_rate = state.pose.matrix() * hat6(state.twist);
  const Twist xi_r = relative_twist(dist, state.twist);
  rate.twist_rate = acceleration(state.twist, xi_r, tau + disturbance_body_wrench(dist, state));
  return rate;
}

StateRate continuous_dynamics(const VesselParams& params, const PlantState& state,
                              const Wrench& tau, const DisturbanceSpec& dist) {
  return VesselModel(params).continuous_dynamics(state, tau, dist);
}

Wrench coriolis_wrench(const VesselParams& params, const Twist& xi) {
  return VesselModel(params).coriolis_wrench(xi);
}

Mat6 damping_matrix(const VesselParams& params, const Twist& xi_r) {
  const Vec6 diag = -params.linear_damping.array() - params.quadratic_damping.array() * xi_r.array().abs();
  return diag.asDiagonal();
}

Mat3 orthonormalize(const Mat3& r) {
  Eigen::JacobiSVD<Mat3> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 out = svd.matrixU() * svd.matrixV().transpose();
  if (out.determinant() < 0.0) {
    Mat3 u = svd.matrixU();
    u.col(2) = -u.col(2);
    out = u * svd.matrixV().transpose();
  }
  return out;
}

namespace {

struct Derivative {
  Mat3 rotation;
  Vec3 position;
  Twist twist;
};

Derivative evaluate(const VesselModel& model, const PlantState& s, const Wrench& tau,
                    const WrenchField& field, const Twist& current, bool has_current) {
  Derivative d;
  const Mat3& r = s.pose.rotation();
  d.rotation = r * hat3(s.twist.head<3>());
  d.position = r * s.twist.tail<3>();
  const Twist xi_r = has_current ? Twist(s.twist - current) : s.twist;
  Wrench external = tau;
  if (field) external += field(s);
  d.twist = model.acceleration(s.twist, xi_r, external);
  return d;
}

PlantState advance(const PlantState& s, const Derivative& d, double h) {
  PlantState out;
  out.pose = Pose(s.pose.rotation() + h * d.rotation, s.pose.position() + h * d.position);
  out.twist = s.twist + h * d.twist;
  out.time = s.time + h;
  return out;
}

PlantState rk4(const VesselModel& model, const PlantState& s, const Wrench& tau,
               const WrenchField& field, const Twist& current, bool has_current, double dt) {
  if (!(dt > 0.0)) throw Error("step: dt must be positive");
  const Derivative k1 = evaluate(model, s, tau, field, current, has_current);
  const Derivative k2 = evaluate(model, advance(s, k1, 0.5 * dt), tau, field, current, has_current);
  const Derivative k3 = evaluate(model, advance(s, k2, 0.5 * dt), tau, field, current, has_current);
  const Derivative k4 = evaluate(model, advance(s, k3, dt), tau, field, current, has_current);
  const double w = dt / 6.0;
  PlantState out;
  const Mat3 r = s.pose.rotation() + w * (k1.rotation + 2.0 * k2.rotation + 2.0 * k3.rotation + k4.rotation);
  const Vec3 p = s.pose.position() + w * (k1.position + 2.0 * k2.position + 2.0 * k3.position + k4.position);
  out.pose = Pose(orthonormalize(r), p);
  out.twist = s.twist + w * (k1.twist + 2.0 * k2.twist + 2.0 * k3.twist + k4.twist);
  out.time = s.time + dt;
  return out;
}

}  // namespace

PlantState step(const VesselModel& model, const PlantState& state, const Wrench& tau,
                const DisturbanceSpec& dist, double dt) {
  WrenchField field;
  if (dist.kind != DisturbanceKind::kNone && dist.kind != DisturbanceKind::kCurrent) {
    field = [&dist](const PlantState& s) { return disturbance_body_wrench(dist, s); };
  }
  return rk4(model, state, tau, field, dist.current, dist.kind == DisturbanceKind::kCurrent, dt);
}

PlantState step(const VesselModel& model, const PlantState& state, const Wrench& tau,
                const WrenchField& field, const Twist& current, double dt) {
  return rk4(model, state, tau, field, current, !current.isZero(0.0), dt);
}

}  // namespace liempc
