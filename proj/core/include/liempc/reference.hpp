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

#ifndef LIEMPC_REFERENCE_HPP_
#define LIEMPC_REFERENCE_HPP_

#include <string>
#include <vector>

#include "liempc/liegroup.hpp"
#include "liempc/types.hpp"

namespace liempc {

struct ReferenceSample {
  Pose pose;
  Twist twist = Twist::Zero();
};

// Desired poses and body twists sampled at the control period. Sample k
// holds X_d at t = k dt and the twist applied over [t, t + dt).
class ReferenceTrajectory {
 public:
  ReferenceTrajectory() = default;
  ReferenceTrajectory(std::vector<ReferenceSample> samples, double dt);

  // Integrates piecewise-constant twists from `start` with exact exp steps.
  static ReferenceTrajectory FromTwists(const Pose& start, const std::vector<Twist>& twists, double dt);

  double dt() const { return dt_; }
  int size() const { return static_cast<int>(samples_.size()); }
  double duration() const { return dt_ * (size() - 1); }

  // Past the end the final pose is held with zero twist.
  ReferenceSample at(int k) const;
  const std::vector<ReferenceSample>& samples() const { return samples_; }

  // Largest ||log(X_k^-1 X_k+1) - xi_k dt|| over the trajectory.
  double max_consistency_error() const;

 private:
  std::vector<ReferenceSample> samples_;
  double dt_ = 0.02;
};

enum class TrajectoryKind { kZigzag, kLawnmower, kCustomFile };

std::string to_string(TrajectoryKind kind);
TrajectoryKind trajectory_kind_from_string(const std::string& name);

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::kZigzag;
  double duration = 128.0;                  // s
  double surge_speed = 0.5;                 // m/s
  // zigzag: yaw rate amplitude * cos(t / period_scale)
  double zigzag_yaw_amplitude = 0.1;        // rad/s
  double zigzag_time_scale = 100.0;         // s
  // lawnmower
  int lawnmower_legs = 4;
  double lawnmower_turn_rate = 0.3;         // rad/s
  double lawnmower_transit_length = 2.0;    // m between parallel legs
  // custom-file: CSV with header, columns t,wx,wy,wz,vx,vy,vz
  std::string custom_file;
};

// Samples the trajectory on [0, duration] at dt (duration / dt + 1 samples).
ReferenceTrajectory make_reference(const TrajectorySpec& spec, double dt);

}  // namespace liempc

#endif  // LIEMPC_REFERENCE_HPP_
