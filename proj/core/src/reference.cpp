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

#include "liempc/reference.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace liempc {

namespace {

// Piecewise-constant yaw-rate schedule (surge held constant).
struct Segment {
  double duration;
  double yaw_rate;
};

std::vector<Segment> lawnmower_segments(const TrajectorySpec& spec) {
  const double turn_time = (std::numbers::pi / 2.0) / spec.lawnmower_turn_rate;
  const int legs = spec.lawnmower_legs;
  const double transit_time = spec.lawnmower_transit_length / spec.surge_speed;
  const double fixed = (legs - 1) * (2.0 * turn_time + transit_time);
  const double leg_time = (spec.duration - fixed) / legs;
  if (legs < 1 || !(leg_time > 0.0)) {
    throw ConfigError("lawnmower: duration too short for the requested legs");
  }
  std::vector<Segment> out;
  for (int leg = 0; leg < legs; ++leg) {
    out.push_back({leg_time, 0.0});
    if (leg + 1 == legs) break;
    const double rate = (leg % 2 == 0 ? 1.0 : -1.0) * spec.lawnmower_turn_rate;
    out.push_back({turn_time, rate});
    out.push_back({transit_time, 0.0});
    out.push_back({turn_time, rate});
  }
  return out;
}

// Average of the schedule over [t0, t1].
double average_rate(const std::vector<Segment>& segments, double t0, double t1) {
  double acc = 0.0;
  double start = 0.0;
  for (const auto& s : segments) {
    const double end = start + s.duration;
    const double lo = std::max(start, t0);
    const double hi = std::min(end, t1);
    if (hi > lo) acc += s.yaw_rate * (hi - lo);
    start = end;
  }
  return acc / (t1 - t0);
}

std::vector<Twist> load_custom_twists(const std::string& path, double dt, int count) {
  std::ifstream is(path);
  if (!is) throw ConfigError("custom trajectory: cannot open " + path);
  std::string line;
  std::getline(is, line);  // header
  std::vector<double> times;
  std::vector<Twist> twists;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != 7) throw ConfigError("custom trajectory: expected 7 columns");
    times.push_back(row[0]);
    Twist xi;
    xi << row[1], row[2], row[3], row[4], row[5], row[6];
    twists.push_back(xi);
  }
  if (twists.empty()) throw ConfigError("custom trajectory: no samples");
  // Zero-order hold on the file's time stamps.
  std::vector<Twist> out(count);
  std::size_t j = 0;
  for (int k = 0; k < count; ++k) {
    const double t = k * dt;
    while (j + 1 < times.size() && times[j + 1] <= t + 1e-12) ++j;
    out[k] = twists[j];
  }
  return out;
}

}  // namespace

ReferenceTrajectory::ReferenceTrajectory(std::vector<ReferenceSample> samples, double dt)
    : samples_(std::move(samples)), dt_(dt) {
  if (!(dt_ > 0.0)) throw ConfigError("reference: dt must be positive");
  if (samples_.empty()) throw ConfigError("reference: no samples");
}

ReferenceTrajectory ReferenceTrajectory::FromTwists(const Pose& start, const std::vector<Twist>& twists,
                                                    double dt) {
  std::vector<ReferenceSample> samples;
  samples.reserve(twists.size() + 1);
  Pose x = start;
  for (const Twist& xi : twists) {
    samples.push_back({x, xi});
    x = x * exp_se3(xi * dt);
  }
  samples.push_back({x, Twist::Zero()});
  return ReferenceTrajectory(std::move(samples), dt);
}

ReferenceSample ReferenceTrajectory::at(int k) const {
  if (k < 0) k = 0;
  if (k >= size()) return {samples_.back().pose, Twist::Zero()};
  return samples_[k];
}

double ReferenceTrajectory::max_consistency_error() const {
  double worst = 0.0;
  for (int k = 0; k + 1 < size(); ++k) {
    const Twist step = log_se3(samples_[k].pose.inverse() * samples_[k + 1].pose);
    worst = std::max(worst, (step - samples_[k].twist * dt_).norm());
  }
  return worst;
}

std::string to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::kZigzag:
      return "zigzag";
    case TrajectoryKind::kLawnmower:
      return "lawnmower";
    case TrajectoryKind::kCustomFile:
      return "custom-file";
  }
  return "zigzag";
}

TrajectoryKind trajectory_kind_from_string(const std::string& name) {
  if (name == "zigzag") return TrajectoryKind::kZigzag;
  if (name == "lawnmower") return TrajectoryKind::kLawnmower;
  if (name == "custom-file") return TrajectoryKind::kCustomFile;
  throw ConfigError("unknown trajectory kind '" + name + "'");
}

ReferenceTrajectory make_reference(const TrajectorySpec& spec, double dt) {
  if (!(spec.duration > 0.0) || !(dt > 0.0)) throw ConfigError("reference: duration and dt must be positive");
  const int count = static_cast<int>(std::lround(spec.duration / dt));
  std::vector<Twist> twists(count, Twist::Zero());
  switch (spec.kind) {
    case TrajectoryKind::kZigzag:
      for (int k = 0; k < count; ++k) {
        const double t = k * dt;
        twists[k](kYaw) = spec.zigzag_yaw_amplitude * std::cos(t / spec.zigzag_time_scale);
        twists[k](kSurge) = spec.surge_speed;
      }
      break;
    case TrajectoryKind::kLawnmower: {
      const auto segments = lawnmower_segments(spec);
      for (int k = 0; k < count; ++k) {
        twists[k](kYaw) = average_rate(segments, k * dt, (k + 1) * dt);
        twists[k](kSurge) = spec.surge_speed;
      }
      break;
    }
    case TrajectoryKind::kCustomFile:
      twists = load_custom_twists(spec.custom_file, dt, count);
      break;
  }
  return ReferenceTrajectory::FromTwists(Pose::Identity(), twists, dt);
}

}  // namespace liempc
