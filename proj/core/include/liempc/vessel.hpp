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

// Six-DOF surface-vessel dynamics in the body frame with the twist ordered
// [angular; linear]:
//
//   M xi_dot = ad_xi^T M xi - D(xi_r) xi_r + tau + tau_disturbance
//   X_dot    = X xi^
//
// M = M_RB + M_AM. Hydrostatic restoring forces are omitted (neutral
// buoyancy), and the Coriolis contribution of rigid body and added mass is
// taken together through the ad^T term.

#ifndef LIEMPC_VESSEL_HPP_
#define LIEMPC_VESSEL_HPP_

#include <functional>
#include <string>

#include <Eigen/Cholesky>

#include "liempc/liegroup.hpp"
#include "liempc/types.hpp"

namespace liempc {

// Damping coefficients are hydrodynamic derivatives in the usual marine
// convention (negative for a dissipative hull) and ordered like a twist:
// {K_p, M_q, N_r, X_u, Y_v, Z_w} and {K_|p|p, ..., Z_|w|w}.
struct VesselParams {
  double mass = 28.0;                       // kg
  Vec3 cog_offset = Vec3::Zero();           // m, origin -> centre of gravity
  Mat3 inertia = Mat3::Identity();          // kg m^2 about the origin
  Mat6 added_mass = Mat6::Zero();           // positive-definite M_AM
  Vec6 linear_damping = Vec6::Zero();
  Vec6 quadratic_damping = Vec6::Zero();
  double thruster_lever_arm = 0.3;          // m, half-beam
  double thrust_min = -26.0;                // N per propeller
  double thrust_max = 50.0;                 // N per propeller

  Mat6 rigid_body_mass() const;
  Mat6 mass_matrix() const;

  // Throws ConfigError on a violated invariant, SingularMass on an
  // ill-conditioned mass matrix.
  void validate() const;
};

// Parameters shipped in config/vessel_default.json.
VesselParams default_vessel_params();

struct PlantState {
  Pose pose;
  Twist twist = Twist::Zero();
  double time = 0.0;
};

enum class DisturbanceKind {
  kNone,
  kConstantWorldWrench,
  kWindField,
  kSinusoidalWrench,
  kCurrent,
};

struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::kNone;
  Wrench wrench = Wrench::Zero();           // world-frame [moment; force]
  Vec3 wind_velocity = Vec3::Zero();        // m/s, world frame
  double drag_gain = 0.0;                   // N s^2 / m^2
  Vec6 amplitude = Vec6::Zero();            // body-frame, per axis
  Vec6 frequency_hz = Vec6::Zero();
  Vec6 phase = Vec6::Zero();
  Twist current = Twist::Zero();            // body-frame current twist

  void validate() const;
};

std::string to_string(DisturbanceKind kind);
DisturbanceKind disturbance_kind_from_string(const std::string& name);

// Body-frame disturbance wrench for the given plant state.
Wrench disturbance_body_wrench(const DisturbanceSpec& dist, const PlantState& state);

// Relative twist used by the damping term.
Twist relative_twist(const DisturbanceSpec& dist, const Twist& xi);

// Arbitrary body-frame wrench field, used by the integrator.
using WrenchField = std::function<Wrench(const PlantState&)>;

// Two fixed parallel propellers: surge = F_L + F_R,
// yaw moment = (F_R - F_L) * lever_arm.
class ThrusterAllocation {
 public:
  ThrusterAllocation(double lever_arm, double thrust_min, double thrust_max);
  explicit ThrusterAllocation(const VesselParams& params)
      : ThrusterAllocation(params.thruster_lever_arm, params.thrust_min, params.thrust_max) {}

  // 6x2 map from [F_L; F_R] to the body wrench.
  const Mat6x2& matrix() const { return matrix_; }
  Wrench wrench(const Vec2& thrusts) const { return matrix_ * thrusts; }

  // Least-squares thrusts for the surge/yaw part of a wrench (unsaturated).
  Vec2 allocate(const Wrench& wrench) const;
  Vec2 saturate(const Vec2& thrusts) const;
  bool saturated(const Vec2& thrusts, double tol = 1e-6) const;

  double thrust_min() const { return thrust_min_; }
  double thrust_max() const { return thrust_max_; }
  double lever_arm() const { return lever_arm_; }

 private:
  double lever_arm_;
  double thrust_min_;
  double thrust_max_;
  Mat6x2 matrix_;
};

struct StateRate {
  Mat4 pose_rate;
  Twist twist_rate;
};

// Validated vessel model with the mass matrix factorized once.
class VesselModel {
 public:
  explicit VesselModel(const VesselParams& params);

  const VesselParams& params() const { return params_; }
  const Mat6& mass_matrix() const { return mass_; }
  const Mat6& mass_inverse() const { return mass_inverse_; }

  // ad_xi^T M xi; power neutral: xi . result == 0.
  Wrench coriolis_wrench(const Twist& xi) const;

  // Positive diagonal: -(linear_i) - quadratic_i |xi_r,i|.
  Mat6 damping_matrix(const Twist& xi_r) const;

  // Unforced hydrodynamic wrench ad_xi^T M xi - D(xi_r) xi_r.
  Wrench hydro_wrench(const Twist& xi, const Twist& xi_r) const;
  Wrench hydro_wrench(const Twist& xi) const { return hydro_wrench(xi, xi); }

  Twist acceleration(const Twist& xi, const Twist& xi_r, const Wrench& total_external) const;

  StateRate continuous_dynamics(const PlantState& state, const Wrench& tau,
                                const DisturbanceSpec& dist) const;

  double kinetic_energy(const Twist& xi) const { return 0.5 * xi.dot(mass_ * xi); }

 private:
  VesselParams params_;
  Mat6 mass_;
  Mat6 mass_inverse_;
};

StateRate continuous_dynamics(const VesselParams& params, const PlantState& state,
                              const Wrench& tau, const DisturbanceSpec& dist);
Wrench coriolis_wrench(const VesselParams& params, const Twist& xi);
Mat6 damping_matrix(const VesselParams& params, const Twist& xi_r);

// One RK4 step of length dt with tau held constant. The rotation is
// re-orthonormalized afterwards and time advances by dt.
PlantState step(const VesselModel& model, const PlantState& state, const Wrench& tau,
                const DisturbanceSpec& dist, double dt);

// Same integrator driven by an explicit body-frame wrench field; the current
// is taken from `dist` only for the damping term.
PlantState step(const VesselModel& model, const PlantState& state, const Wrench& tau,
                const WrenchField& field, const Twist& current, double dt);

// Nearest rotation (polar factor) of an almost-orthogonal matrix.
Mat3 orthonormalize(const Mat3& r);

}  // namespace liempc

#endif  // LIEMPC_VESSEL_HPP_
