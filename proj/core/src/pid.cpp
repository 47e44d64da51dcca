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

#include "liempc/pid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace liempc {

void PidConfig::validate() const {
  for (const PidGains* g : {&surge, &yaw}) {
    if (!std::isfinite(g->kp) || !std::isfinite(g->ki) || !std::isfinite(g->kd)) {
      throw ConfigError("pid: gains must be finite");
    }
    if (!(g->integral_limit > 0.0) || !(g->output_limit > 0.0)) {
      throw ConfigError("pid: clamps must be positive");
    }
  }
  if (!(max_surge_speed >= min_surge_speed) || !(max_yaw_rate > 0.0)) {
    throw ConfigError("pid: bad outer-loop limits");
  }
}

Vec3 planar_tracking_error(const Pose& actual, const Pose& reference) {
  const double yaw = actual.yaw();
  const Vec3 dp = reference.position() - actual.position();
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  const double dyaw = std::remainder(reference.yaw() - yaw, 2.0 * std::numbers::pi);
  return {c * dp.x() + s * dp.y(), -s * dp.x() + c * dp.y(), dyaw};
}

double PidLoop::step(double error, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("PidLoop::step: dt must be positive");
  integral_ = std::clamp(integral_ + error * dt, -gains_.integral_limit, gains_.integral_limit);
  const double derivative = started_ ? (error - previous_error_) / dt : 0.0;
  previous_error_ = error;
  started_ = true;
  const double u = gains_.kp * error + gains_.ki * integral_ + gains_.kd * derivative;
  return std::clamp(u, -gains_.output_limit, gains_.output_limit);
}

void PidLoop::reset() {
  integral_ = 0.0;
  previous_error_ = 0.0;
  started_ = false;
}

TwoLayerPid::TwoLayerPid(PidConfig config, const VesselParams& params)
    : config_(config), allocation_(params), surge_(config.surge), yaw_(config.yaw) {
  config_.validate();
}

Vec2 TwoLayerPid::reference_twist(const Vec3& e) const {
  const double v = std::clamp(config_.along_track_gain * e[0], config_.min_surge_speed,
                              config_.max_surge_speed);
  const double w = std::clamp(config_.cross_track_gain * e[1] + config_.heading_gain * e[2],
                              -config_.max_yaw_rate, config_.max_yaw_rate);
  return {v, w};
}

Vec2 TwoLayerPid::step(const Vec3& pose_error, const Twist& twist, double dt) {
  const Vec2 ref = reference_twist(pose_error);
  const double common = surge_.step(ref[0] - twist[kSurge], dt);
  // Yaw moment = lever * (F_R - F_L) = lever * differential.
  const double differential = yaw_.step(ref[1] - twist[kYaw], dt) / allocation_.lever_arm();
  return allocation_.saturate(Vec2(0.5 * (common - differential), 0.5 * (common + differential)));
}

}  // namespace liempc
