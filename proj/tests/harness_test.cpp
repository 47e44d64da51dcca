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

#include "liempc/harness.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "liempc/config_io.hpp"
#include "liempc/reference.hpp"
#include "liempc/rng.hpp"

namespace liempc {
namespace {

TEST(RngTest, SameSeedAndStreamRepeat) {
  CounterRng a(5, 3), b(5, 3), c(5, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs |= x != c.next_u64();
  }
  EXPECT_TRUE(differs);
}

TEST(RngTest, UniformMoments) {
  CounterRng rng(9, 0);
  double sum = 0.0, sq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.005);
  EXPECT_NEAR(sq / n - (sum / n) * (sum / n), 1.0 / 12.0, 0.002);
}

TEST(InitialOffsetTest, Endpoints) {
  EXPECT_EQ(initial_offset(0.0, 1.234), Vec3::Zero());
  const Vec3 p = initial_offset(1.0, 0.0);
  EXPECT_EQ(p, Vec3(1.0, 0.0, 0.0));
  EXPECT_NEAR(initial_offset(0.25, 0.5 * std::numbers::pi).y(), 0.5, 1e-15);
}

TEST(InitialOffsetTest, MeanRadiusIsTwoThirds) {
  CounterRng rng(2026, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const Vec3 p = sample_initial_offset(rng);
    ASSERT_LE(p.norm(), 1.0);
    ASSERT_EQ(p.z(), 0.0);
    sum += p.norm();
  }
  EXPECT_NEAR(sum / n, 2.0 / 3.0, 0.01);
}

TEST(ReferenceTest, ZigzagStartsAtFullYawRate) {
  TrajectorySpec spec;
  const ReferenceTrajectory ref = make_reference(spec, 0.02);
  EXPECT_EQ(ref.at(0).twist(kYaw), 0.1);
  EXPECT_EQ(ref.at(0).twist(kSurge), 0.5);
  EXPECT_EQ(ref.size(), 6401);
  EXPECT_NEAR(ref.at(2500).twist(kYaw), 0.1 * std::cos(50.0 / 100.0), 1e-15);
  EXPECT_LE(ref.max_consistency_error(), 1e-12);
}

double YawChange(const ReferenceTrajectory& ref, int from, int to) {
  return std::remainder(ref.at(to).pose.yaw() - ref.at(from).pose.yaw(), 2.0 * std::numbers::pi);
}

TEST(ReferenceTest, LawnmowerTurnsAreQuarterTurns) {
  TrajectorySpec spec;
  spec.kind = TrajectoryKind::kLawnmower;
  const double dt = 0.02;
  const ReferenceTrajectory ref = make_reference(spec, dt);
  EXPECT_LE(ref.max_consistency_error(), 1e-12);

  const double turn = (std::numbers::pi / 2.0) / spec.lawnmower_turn_rate;
  const double transit = spec.lawnmower_transit_length / spec.surge_speed;
  const double leg = (spec.duration - (spec.lawnmower_legs - 1) * (2 * turn + transit)) / spec.lawnmower_legs;
  double t = 0.0;
  for (int corner = 0; corner < spec.lawnmower_legs - 1; ++corner) {
    const double sign = corner % 2 == 0 ? 1.0 : -1.0;
    t += leg;
    for (int half = 0; half < 2; ++half) {
      const int from = static_cast<int>(std::floor(t / dt));
      const int to = static_cast<int>(std::ceil((t + turn) / dt));
      EXPECT_NEAR(YawChange(ref, from, to), sign * std::numbers::pi / 2.0, 1e-6) << corner << " " << half;
      t += turn + (half == 0 ? transit : 0.0);
    }
  }
  // Legs alternate direction: the last leg is antiparallel to the first.
  EXPECT_NEAR(std::abs(YawChange(ref, 0, ref.size() - 1)), spec.lawnmower_legs % 2 == 0 ? std::numbers::pi : 0.0,
              1e-6);
}

std::vector<StepLog> PlanarErrors(const std::vector<double>& errors) {
  std::vector<StepLog> log(errors.size());
  for (std::size_t k = 0; k < errors.size(); ++k) {
    log[k].reference = Vec3(k * 0.1, 2.0, 0.3);
    log[k].actual = log[k].reference + Vec3(0.6 * errors[k], -0.8 * errors[k], 0.5);
  }
  return log;
}

TEST(RmseTest, PerfectTrackingIsZero) {
  const PlanarRmse r = compute_rmse(PlanarErrors(std::vector<double>(10, 0.0)), 0);
  EXPECT_EQ(r.standard, 0.0);
  EXPECT_EQ(r.literal, 0.0);
}

TEST(RmseTest, ConstantErrorCoincides) {
  const PlanarRmse r = compute_rmse(PlanarErrors(std::vector<double>(10, 1.0)), 0);
  EXPECT_NEAR(r.standard, 1.0, 1e-15);
  EXPECT_NEAR(r.literal, 1.0, 1e-15);
}

TEST(RmseTest, AlternatingErrorSeparatesDefinitions) {
  const PlanarRmse r = compute_rmse(PlanarErrors({0, 2, 0, 2, 0, 2, 0, 2}), 0);
  EXPECT_NEAR(r.standard, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r.literal, 1.0, 1e-15);
}

TEST(RmseTest, DefaultWindowIsTheSecondHalf) {
  const PlanarRmse r = compute_rmse(PlanarErrors({5, 5, 5, 5, 1, 1, 1, 1}));
  EXPECT_NEAR(r.standard, 1.0, 1e-15);
}

Scenario ShortScenario(double duration) {
  Scenario s = load_scenario(LIEMPC_CONFIG_DIR "/scenarios/zigzag_wind.json");
  s.trajectory.duration = duration;
  s.disturbances = {{"none", {}}};
  s.model = s.plant;
  s.trials = 1;
  return s;
}

int IndexOf(const Scenario& s, ControllerKind kind) {
  for (std::size_t i = 0; i < s.controllers.size(); ++i) {
    if (s.controllers[i].kind == kind) return static_cast<int>(i);
  }
  throw std::logic_error("controller missing from scenario");
}

void ExpectIdenticalLogs(const RunResult& a, const RunResult& b) {
  ASSERT_EQ(a.log.size(), b.log.size());
  for (std::size_t k = 0; k < a.log.size(); ++k) {
    ASSERT_EQ(a.log[k].actual, b.log[k].actual) << k;
    ASSERT_EQ(a.log[k].twist, b.log[k].twist) << k;
    ASSERT_EQ(a.log[k].thrusts, b.log[k].thrusts) << k;
    ASSERT_EQ(a.log[k].residual, b.log[k].residual) << k;
    ASSERT_EQ(a.log[k].forecast, b.log[k].forecast) << k;
  }
  EXPECT_EQ(a.summary.rmse, b.summary.rmse);
}

TEST(RunTrialTest, LogLengthAndDeterminism) {
  Scenario s = ShortScenario(10.0);
  DisturbanceSpec wind;
  wind.kind = DisturbanceKind::kWindField;
  wind.wind_velocity = Vec3(0.0, 2.0, 0.0);
  wind.drag_gain = 1.0;
  s.disturbances = {{"wind", wind}};
  for (int c = 0; c < static_cast<int>(s.controllers.size()); ++c) {
    const RunResult a = run_trial(s, c, 0, 3);
    const RunResult b = run_trial(s, c, 0, 3);
    EXPECT_EQ(static_cast<int>(a.log.size()), 500) << s.controllers[c].name;
    ExpectIdenticalLogs(a, b);
  }
}

TEST(RunTrialTest, TrialsDifferOnlyThroughTheSeed) {
  const Scenario s = ShortScenario(4.0);
  const int mpc = IndexOf(s, ControllerKind::kMpc);
  const RunResult a = run_trial(s, mpc, 0, 0);
  const RunResult b = run_trial(s, mpc, 0, 1);
  EXPECT_NE(a.log.front().actual, b.log.front().actual);
}

TEST(RunTrialTest, LearnerIsNeutralWithoutDisturbance) {
  const Scenario s = ShortScenario(40.0);
  const double mpc = run_trial(s, IndexOf(s, ControllerKind::kMpc), 0, 0).summary.rmse;
  const double online = run_trial(s, IndexOf(s, ControllerKind::kOnlineMpc), 0, 0).summary.rmse;
  EXPECT_LE(online, mpc + 1e-3);
}

TEST(RunTrialTest, LearnerReducesOffsetUnderLateralForce) {
  Scenario s = ShortScenario(60.0);
  DisturbanceSpec push;
  push.kind = DisturbanceKind::kConstantWorldWrench;
  push.wrench(3 + 1) = 10.0;  // world y force
  s.disturbances = {{"push", push}};
  const double mpc = run_trial(s, IndexOf(s, ControllerKind::kMpc), 0, 0).summary.rmse;
  const double online = run_trial(s, IndexOf(s, ControllerKind::kOnlineMpc), 0, 0).summary.rmse;
  EXPECT_GT(mpc, online);
}

TEST(CollectTest, RowCount) {
  Scenario s = ShortScenario(10.0);
  s.collect_rounds = 3;
  const ResidualDataset data = collect_dataset(s);
  EXPECT_EQ(data.size(), 3 * 10 * 50);
  EXPECT_EQ(data.scenario, s.name);
}

TEST(CollectTest, UndisturbedResidualIsSmall) {
  // The plant is integrated with RK4 at 1 ms and the model is an explicit
  // Euler step at 20 ms, so the residual is a discretization error, not
  // zero.
  Scenario s = ShortScenario(20.0);
  s.initial_offset = false;
  s.collect_rounds = 1;
  const ResidualDataset data = collect_dataset(s);
  double worst = 0.0;
  for (const Vec12& h : data.residuals) worst = std::max(worst, h.cwiseAbs().maxCoeff());
  EXPECT_LE(worst, 0.05);

  DisturbanceSpec push;
  push.kind = DisturbanceKind::kConstantWorldWrench;
  push.wrench(3 + 1) = 10.0;
  s.disturbances = {{"push", push}};
  const ResidualDataset pushed = collect_dataset(s);
  double pushed_worst = 0.0;
  for (const Vec12& h : pushed.residuals) pushed_worst = std::max(pushed_worst, h.cwiseAbs().maxCoeff());
  EXPECT_GT(pushed_worst, 5.0 * worst);
}

TEST(CollectTest, SinusoidalDisturbanceShowsUpAtItsFrequency) {
  Scenario s = ShortScenario(64.0);
  s.initial_offset = false;
  s.collect_rounds = 1;
  const double f0 = 0.25;
  DisturbanceSpec wave;
  wave.kind = DisturbanceKind::kSinusoidalWrench;
  wave.amplitude(kSway) = 5.0;
  wave.frequency_hz(kSway) = f0;
  s.disturbances = {{"wave", wave}};
  const ResidualDataset data = collect_dataset(s);
  const int n = data.size();
  ASSERT_EQ(n, 3200);
  // Plain DFT of the sway-velocity residual.
  const int channel = 6 + kSway;
  double mean = 0.0;
  for (const Vec12& h : data.residuals) mean += h[channel] / n;
  int peak = 0;
  double peak_power = 0.0;
  for (int bin = 1; bin <= n / 2; ++bin) {
    std::complex<double> acc = 0.0;
    for (int t = 0; t < n; ++t) {
      acc += (data.residuals[t][channel] - mean) * std::polar(1.0, -2.0 * std::numbers::pi * bin * t / n);
    }
    if (std::norm(acc) > peak_power) {
      peak_power = std::norm(acc);
      peak = bin;
    }
  }
  const double resolution = 1.0 / (n * s.control_dt());
  EXPECT_NEAR(peak * resolution, f0, resolution);
}

}  // namespace
}  // namespace liempc
