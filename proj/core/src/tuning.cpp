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

#include "liempc/tuning.hpp"

namespace liempc {

PlanarTuning tune_straight_line(const VesselModel& model, const MpcConfig& config,
                                double surge_speed, const DareOptions& options) {
  const ThrusterAllocation allocation(model.params());
  Twist xi_d = Twist::Zero();
  xi_d[kSurge] = surge_speed;
  const ContinuousErrorModel c = continuous_error_model(model, allocation, xi_d);
  const Mat12 a = Mat12::Identity() + c.a * config.dt;
  const Mat12x2 b = c.b * config.dt;
  const Mat12 g = output_matrix(xi_d);
  const Mat12 w = g.transpose() * config.output_weight.asDiagonal() * g;
  const Mat12 w_terminal = g.transpose() * config.terminal_output_weight.asDiagonal() * g;

  constexpr int n = static_cast<int>(kPlanarIndices.size());
  PlanarTuning t;
  t.a.resize(n, n);
  t.b.resize(n, 2);
  t.q.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      t.a(i, j) = a(kPlanarIndices[i], kPlanarIndices[j]);
      t.q(i, j) = w(kPlanarIndices[i], kPlanarIndices[j]);
    }
    t.b.row(i) = b.row(kPlanarIndices[i]);
  }
  t.r = config.input_weight.asDiagonal();
  t.dare = solve_dare(t.a, t.b, t.q, t.r, options);

  t.terminal_state_weight = w_terminal;
  for (int i : kPlanarIndices) {
    t.terminal_state_weight.row(i).setZero();
    t.terminal_state_weight.col(i).setZero();
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      t.terminal_state_weight(kPlanarIndices[i], kPlanarIndices[j]) = t.dare.p(i, j);
    }
  }
  return t;
}

}  // namespace liempc
