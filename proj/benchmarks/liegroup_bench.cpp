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

#include <vector>

#include <benchmark/benchmark.h>

#include "liempc/liegroup.hpp"
#include "liempc/rng.hpp"
#include "liempc/vessel.hpp"

namespace liempc {
namespace {

std::vector<Twist> Twists(int n, double scale) {
  CounterRng rng(3, 0);
  std::vector<Twist> out(n);
  for (Twist& xi : out) {
    for (int i = 0; i < 6; ++i) xi(i) = rng.uniform(-scale, scale);
  }
  return out;
}

void BM_ExpSe3(benchmark::State& state) {
  const auto twists = Twists(256, 1.0);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(exp_se3(twists[i++ & 255]));
  }
}
BENCHMARK(BM_ExpSe3);

void BM_LogSe3(benchmark::State& state) {
  std::vector<Pose> poses;
  for (const Twist& xi : Twists(256, 1.0)) poses.push_back(exp_se3(xi));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_se3(poses[i++ & 255]));
  }
}
BENCHMARK(BM_LogSe3);

void BM_Adjoint(benchmark::State& state) {
  const Pose x = exp_se3(Twists(1, 1.0).front());
  for (auto _ : state) benchmark::DoNotOptimize(adjoint(x));
}
BENCHMARK(BM_Adjoint);

void BM_ContinuousDynamics(benchmark::State& state) {
  const VesselParams params = default_vessel_params();
  PlantState s;
  s.twist = Twists(1, 0.5).front();
  DisturbanceSpec wind;
  wind.kind = DisturbanceKind::kWindField;
  wind.wind_velocity = Vec3(0.0, 3.0, 0.0);
  wind.drag_gain = 1.0;
  const Wrench tau = Wrench::Constant(5.0);
  for (auto _ : state) benchmark::DoNotOptimize(continuous_dynamics(params, s, tau, wind));
}
BENCHMARK(BM_ContinuousDynamics);

// One control interval of plant integration: 20 RK4 steps of 1 ms.
void BM_PlantInterval(benchmark::State& state) {
  const VesselModel model(default_vessel_params());
  PlantState s;
  s.twist = Twists(1, 0.5).front();
  const Wrench tau = Wrench::Constant(5.0);
  for (auto _ : state) {
    PlantState x = s;
    for (int i = 0; i < 20; ++i) x = step(model, x, tau, DisturbanceSpec{}, 1e-3);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_PlantInterval);

}  // namespace
}  // namespace liempc

BENCHMARK_MAIN();
