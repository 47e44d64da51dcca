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

#ifndef LIEMPC_PID_HPP_
#define LIEMPC_PID_HPP_

#include "liempc/liegroup.hpp"
#include "liempc/types.hpp"
#include "liempc/vessel.hpp"

namespace liempc {

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double integral_limit = 1.0;   // |integral of error| clamp
  double output_limit = 1e9;     // |output| clamp
};

struct PidConfig {
  // Outer loop: pose error -> reference surge speed and yaw rate.
  double along_track_gain = 0.5;
  double cross_track_gain = 0.8;
  double heading_gain = 1.5;
  double min_surge_speed = -0.5;
  double max_surge_speed = 1.0;
  double max_yaw_rate = 0.5;
  // Inner loops: surge speed -> common thrust, yaw rate -> differential thrust.
  PidGains surge{60.0, 10.0, 0.0, 5.0, 100.0};
  PidGains yaw{40.0, 4.0, 0.0, 5.0, 150.0};

  void validate() const;
};

// [along-track; cross-track; heading] error of the reference relative to
// the vessel, expressed in the vessel's horizontal frame. Cross-track is
// positive with the target to port.
Vec3 planar_tracking_error(const Pose& actual, const Pose& reference);

class PidLoop {
 public:
  explicit PidLoop(PidGains gains) : gains_(gains) {}

  // Backward-difference derivative; the first call has zero derivative.
  double step(double error, double dt);
  void reset();
  double integral() const { return integral_; }

 private:
  PidGains gains_;
  double integral_ = 0.0;
  double previous_error_ = 0.0;
  bool started_ = false;
};

class TwoLayerPid {
 public:
  TwoLayerPid(PidConfig config, const VesselParams& params);

  // Returns [F_L; F_R], saturated.
  Vec2 step(const Vec3& pose_error, const Twist& twist, double dt);

  Vec2 reference_twist(const Vec3& pose_error) const;  // [v_x; omega_z]
  const PidLoop& surge_loop() const { return surge_; }
  const PidLoop& yaw_loop() const { return yaw_; }

 private:
  PidConfig config_;
  ThrusterAllocation allocation_;
  PidLoop surge_;
  PidLoop yaw_;
};

}  // namespace liempc

#endif  // LIEMPC_PID_HPP_
