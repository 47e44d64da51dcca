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

#include "liempc/online_learner.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "liempc/error_mpc.hpp"
#include "liempc/feature_map.hpp"
#include "liempc/rng.hpp"

namespace liempc {
namespace {

Vec13 TimeInput(double t) {
  Vec13 z = Vec13::Zero();
  z[kTimeIndex] = t;
  return z;
}

FeatureMap MixedMap() {
  return FeatureMap({{kTimeIndex, Trig::kSin, 0.7},
                     {kTimeIndex, Trig::kCos, 0.7},
                     {kTimeIndex, Trig::kSin, 2.3},
                     {9, Trig::kCos, 1.1},
                     {2, Trig::kSin, 0.4},
                     {kTimeIndex, Trig::kCos, 0.0}});
}

Vec13 RandomInput(CounterRng& rng, double t) {
  Vec13 z;
  for (int i = 0; i < kInputDim; ++i) z[i] = rng.uniform(-1.0, 1.0);
  z[kTimeIndex] = t;
  return z;
}

Vec12 RandomResidual(CounterRng& rng) {
  Vec12 h;
  for (int i = 0; i < 12; ++i) h[i] = rng.normal();
  return h;
}

TEST(FeatureMapTest, ZeroInput) {
  const FeatureMap map = MixedMap();
  const Eigen::VectorXd phi = map.evaluate(Vec13::Zero());
  for (int k = 0; k < map.size(); ++k) {
    EXPECT_EQ(phi(k), map[k].trig == Trig::kSin ? 0.0 : 1.0);
  }
}

TEST(FeatureMapTest, QuarterPeriodSinIsOne) {
  const FeatureMap map({{4, Trig::kSin, 2.5}});
  Vec13 z = Vec13::Zero();
  z[4] = std::numbers::pi / (2.0 * 2.5);
  EXPECT_NEAR(map.evaluate(z)(0), 1.0, 1e-15);
}

TEST(FeatureMapTest, ElementwiseRecomputation) {
  const FeatureMap map = MixedMap();
  CounterRng rng(51, 0);
  const Vec13 z = RandomInput(rng, 12.3);
  const Eigen::VectorXd phi = map.evaluate(z);
  for (int k = 0; k < map.size(); ++k) {
    const double arg = map[k].frequency * z[map[k].variable];
    EXPECT_EQ(phi(k), map[k].trig == Trig::kSin ? std::sin(arg) : std::cos(arg));
  }
}

TEST(FeatureMapTest, TextRoundTripIsLossless) {
  CounterRng rng(52, 0);
  std::vector<Feature> features;
  for (int k = 0; k < 30; ++k) {
    features.push_back({static_cast<int>(rng.below(kInputDim)), rng.below(2) ? Trig::kSin : Trig::kCos,
                        rng.uniform(0.01, 10.0)});
  }
  const FeatureMap map(features);
  std::stringstream ss;
  write_feature_map(ss, map);
  EXPECT_EQ(read_feature_map(ss), map);
}

TEST(MeasureResidualTest, ZeroWhenPlantIsTheDiscreteModel) {
  const VesselModel model(default_vessel_params());
  const ThrusterAllocation alloc(default_vessel_params());
  Twist xi_d = Twist::Zero();
  xi_d(kSurge) = 0.5;
  xi_d(kYaw) = 0.05;
  const ContinuousErrorModel m = continuous_error_model(model, alloc, xi_d);
  CounterRng rng(53, 0);
  const double dt = 0.02;
  for (int i = 0; i < 20; ++i) {
    Vec12 x = 0.1 * RandomResidual(rng);
    const Vec2 u(rng.uniform(-20, 40), rng.uniform(-20, 40));
    const Vec12 next = x + dt * (m.a * x + m.b * u + m.h);
    EXPECT_LT(measure_residual(x, next, u, m, dt).cwiseAbs().maxCoeff(), 1e-9);
  }
}

// Integrates the nonlinear plant from the reference with an extra body
// force and measures the residual of the error model over one interval.
Vec12 InjectedResidual(const Wrench& force, double dt) {
  const VesselParams params = default_vessel_params();
  const VesselModel model(params);
  const ThrusterAllocation alloc(params);
  Twist xi_d = Twist::Zero();
  xi_d(kSurge) = 0.5;
  const Vec2 u = feedforward_thrusts(model, alloc, xi_d, xi_d, dt);
  const ContinuousErrorModel m = continuous_error_model(model, alloc, xi_d);
  PlantState s;
  s.twist = xi_d;
  const Pose start_ref = s.pose;
  const WrenchField field = [&](const PlantState&) { return force; };
  const int substeps = 20;
  PlantState next = s;
  for (int i = 0; i < substeps; ++i) {
    next = step(model, next, alloc.wrench(u), field, Twist::Zero(), dt / substeps);
  }
  const Pose ref_next = start_ref * exp_se3(xi_d * dt);
  const Vec12 x0 = error_state(s.pose, start_ref, s.twist).stacked();
  const Vec12 x1 = error_state(next.pose, ref_next, next.twist).stacked();
  return measure_residual(x0, x1, u, m, dt);
}

TEST(MeasureResidualTest, InjectedBodyForce) {
  const VesselModel model(default_vessel_params());
  Wrench f = Wrench::Zero();
  f(kSway) = 3.0;
  f(kSurge) = -2.0;
  const Vec6 expected = model.mass_inverse() * f;
  const Vec12 h = InjectedResidual(f, 0.02);
  EXPECT_LT((h.tail<6>() - expected).cwiseAbs().maxCoeff(), 0.05 * expected.cwiseAbs().maxCoeff());
}

TEST(MeasureResidualTest, DiscretizationErrorIsFirstOrder) {
  const VesselModel model(default_vessel_params());
  Wrench f = Wrench::Zero();
  f(kSway) = 3.0;
  const Vec6 expected = model.mass_inverse() * f;
  double previous = 0.0;
  for (double dt : {0.04, 0.02, 0.01}) {
    const double err = (InjectedResidual(f, dt).tail<6>() - expected).norm();
    if (previous > 0.0) {
      const double ratio = previous / err;
      EXPECT_GT(ratio, 1.6) << dt;
      EXPECT_LT(ratio, 2.5) << dt;
    }
    previous = err;
  }
}

TEST(OnlineLearnerTest, ZeroInitialisationIsNeutral) {
  OnlineLearner learner(MixedMap(), {});
  CounterRng rng(54, 0);
  std::vector<Vec13> inputs;
  for (int j = 0; j < 30; ++j) inputs.push_back(RandomInput(rng, 0.02 * j));
  for (const Vec12& f : learner.forecast(inputs)) EXPECT_EQ(f, Vec12::Zero());
}

TEST(OnlineLearnerTest, ZeroResidualsAreStationary) {
  OnlineLearner learner(MixedMap(), {});
  CounterRng rng(55, 0);
  for (int t = 0; t < 40; ++t) learner.update(Vec12::Zero(), RandomInput(rng, 0.02 * t));
  EXPECT_EQ(learner.weights(), Eigen::MatrixXd::Zero(MixedMap().size(), 12));
}

TEST(OnlineLearnerTest, SingleSampleLeastSquaresStep) {
  LearnerConfig config;
  config.smoothness = 0.0;
  config.step_size = 0.01;
  OnlineLearner learner(MixedMap(), config);
  CounterRng rng(56, 0);
  Eigen::MatrixXd w0(MixedMap().size(), 12);
  for (int i = 0; i < w0.rows(); ++i) {
    for (int j = 0; j < 12; ++j) w0(i, j) = rng.normal();
  }
  learner.set_weights(w0);
  const Vec13 z = RandomInput(rng, 1.0);
  const Vec12 h = RandomResidual(rng);
  learner.update(h, z);
  const Eigen::VectorXd phi = MixedMap().evaluate(z);
  const Vec12 prediction = w0.transpose() * phi;
  const Eigen::MatrixXd expected = w0 - config.step_size * 2.0 * phi * (prediction - h).transpose();
  EXPECT_LT((learner.weights() - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(OnlineLearnerTest, GradientMatchesFiniteDifferences) {
  LearnerConfig config;
  config.buffer_size = 3;
  config.smoothness = 1e-4;
  OnlineLearner learner(MixedMap(), config);
  CounterRng rng(57, 0);
  for (int t = 0; t < 5; ++t) learner.update(RandomResidual(rng), RandomInput(rng, 0.02 * t));
  ASSERT_EQ(learner.buffer().size(), 3u);
  Eigen::MatrixXd w(MixedMap().size(), 12);
  for (int i = 0; i < w.rows(); ++i) {
    for (int j = 0; j < 12; ++j) w(i, j) = rng.normal();
  }
  const Eigen::MatrixXd g = learner.gradient(w);
  const double h = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < w.rows(); ++i) {
    for (int j = 0; j < 12; ++j) {
      Eigen::MatrixXd wp = w, wm = w;
      wp(i, j) += h;
      wm(i, j) -= h;
      worst = std::max(worst, std::abs((learner.loss(wp) - learner.loss(wm)) / (2 * h) - g(i, j)));
    }
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(OnlineLearnerTest, BufferIsBoundedAndTimeMustIncrease) {
  OnlineLearner learner(MixedMap(), {});
  for (int t = 0; t < 50; ++t) learner.update(Vec12::Zero(), TimeInput(0.02 * (t + 1)));
  EXPECT_EQ(learner.buffer().size(), 30u);
  EXPECT_THROW(learner.update(Vec12::Zero(), TimeInput(0.02)), std::invalid_argument);
}

// One-step forecast error after `cycles` updates on a planted sinusoid of
// time whose frequency is in the map.
double PlantedSinusoidError(double step_size, int cycles) {
  LearnerConfig config;
  config.step_size = step_size;
  OnlineLearner learner(MixedMap(), config);
  const double amplitude = 0.5;
  const double f = 2.3;
  const double dt = 0.02;
  auto h = [&](double t) {
    Vec12 r = Vec12::Zero();
    r(9) = amplitude * std::sin(f * t);
    return r;
  };
  for (int c = 0; c < cycles; ++c) learner.update(h(c * dt), TimeInput(c * dt));
  double worst = 0.0;
  for (int j = 0; j < 50; ++j) {
    const double t = (cycles + j) * dt;
    worst = std::max(worst, std::abs(learner.predict(TimeInput(t))(9) - h(t)(9)));
  }
  return worst / amplitude;
}

TEST(OnlineLearnerTest, PlantedSinusoidErrorShrinksWithUpdates) {
  // The one-step error decreases with the number of cycles at the default
  // step size, and converges at a larger one.
  const double early = PlantedSinusoidError(1e-4, 100);
  const double late = PlantedSinusoidError(1e-4, 500);
  EXPECT_LT(late, early);
  EXPECT_LE(PlantedSinusoidError(0.05, 2000), 0.1);
}

TEST(OnlineLearnerTest, ConstantResidualCapturedByBiasFeature) {
  LearnerConfig config;
  config.step_size = 0.05;
  OnlineLearner learner(MixedMap(), config);  // includes cos(0 * t)
  Vec12 c = Vec12::Zero();
  c(10) = 0.3;
  for (int t = 0; t < 3000; ++t) learner.update(c, TimeInput(0.02 * t));
  EXPECT_NEAR(learner.predict(TimeInput(0.02 * 3000))(10), 0.3, 0.05 * 0.3);
}

}  // namespace
}  // namespace liempc
