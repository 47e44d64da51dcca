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

#ifndef LIEMPC_TUNING_HPP_
#define LIEMPC_TUNING_HPP_

#include <array>

#include "liempc/dare.hpp"
#include "liempc/error_mpc.hpp"
#include "liempc/vessel.hpp"

namespace liempc {

// Error-state indices of the planar subsystem: yaw, x and y pose error,
// yaw rate, surge and sway. Roll, pitch and heave are not reachable from
// the two thrusters, so the full 12-state pair is not stabilizable.
inline constexpr std::array<int, 6> kPlanarIndices = {2, 3, 4, 8, 9, 10};

struct PlanarTuning {
  Eigen::MatrixXd a;            // 6 x 6 discrete
  Eigen::MatrixXd b;            // 6 x 2
  Eigen::MatrixXd q;            // planar block of G^T Q G
  Eigen::MatrixXd r;
  TuningResult dare;
  Mat12 terminal_state_weight;  // P embedded, G^T P_y G elsewhere
};

// Linearizes the error model at a straight line with constant surge speed
// and solves the DARE on the planar subsystem with the MPC's weights.
PlanarTuning tune_straight_line(const VesselModel& model, const MpcConfig& config,
                                double surge_speed = 0.5, const DareOptions& options = {});

}  // namespace liempc

#endif  // LIEMPC_TUNING_HPP_
