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

#include "liempc/liegroup.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "liempc/rng.hpp"
#include "oracles.hpp"

namespace liempc {
namespace {

Twist RandomTwist(CounterRng& rng, double angle_max, double trans_max) {
  Vec3 axis(rng.normal(), rng.normal(), rng.normal());
  axis.normalize();
  Twist xi;
  xi << axis * rng.uniform(0.0, angle_max),
      Vec3(rng.uniform(-trans_max, trans_max), rng.uniform(-trans_max, trans_max),
           rng.uniform(-trans_max, trans_max));
  return xi;
}

Pose RandomPose(CounterRng& rng) { return exp_se3(RandomTwist(rng, 3.0, 5.0)); }

double MaxAbs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

TEST(Hat3Test, ZeroVector) { EXPECT_EQ(hat3(Vec3::Zero()), Mat3::Zero()); }

TEST(Hat3Test, UnitCrossProduct) {
  EXPECT_EQ(hat3(Vec3(0, 0, 1)) * Vec3(1, 0, 0), Vec3(0, 1, 0));
}

TEST(Hat3Test, SkewSymmetric) {
  const Mat3 m = hat3(Vec3(1, 2, 3));
  EXPECT_EQ(m + m.transpose(), Mat3::Zero());
  EXPECT_EQ(vee3(m), Vec3(1, 2, 3));
}

TEST(Hat6Test, ZeroAndInverse) {
  EXPECT_EQ(hat6(Twist::Zero()), Mat4::Zero());
  Twist xi;
  xi << 0.1, -0.2, 0.3, 1, 0, -1;
  EXPECT_EQ(vee6(hat6(xi)), xi);
}

TEST(Hat6Test, PureTranslation) {
  Twist xi;
  xi << 0, 0, 0, 1, 0, 0;
  Mat4 expected = Mat4::Zero();
  expected(0, 3) = 1.0;
  EXPECT_EQ(hat6(xi), expected);
}

TEST(ExpSe3Test, ZeroIsIdentity) {
  EXPECT_EQ(exp_se3(Twist::Zero()).matrix(), Mat4::Identity());
}

TEST(ExpSe3Test, QuarterTurnMatchesSeries) {
  Twist xi;
  xi << 0, 0, std::numbers::pi / 2, 0, 0, 0;
  const Mat4 expected = oracle::expm_series(oracle::twist_matrix(xi));
  EXPECT_LT(MaxAbs(exp_se3(xi).matrix() - expected), 1e-12);
  EXPECT_NEAR(exp_se3(xi).rotation()(1, 0), 1.0, 1e-15);
}

TEST(ExpSe3Test, PureTranslation) {
  Twist xi;
  xi << 0, 0, 0, 1, 2, 3;
  const Pose x = exp_se3(xi);
  EXPECT_EQ(x.rotation(), Mat3::Identity());
  EXPECT_EQ(x.position(), Vec3(1, 2, 3));
}

TEST(ExpSe3Test, MatchesSeriesOnRandomTwists) {
  CounterRng rng(11, 0);
  for (int i = 0; i < 200; ++i) {
    const Twist xi = RandomTwist(rng, 3.0, 2.0);
    const Mat4 expected = oracle::expm_series(oracle::twist_matrix(xi));
    EXPECT_LT(MaxAbs(exp_se3(xi).matrix() - expected), 1e-11) << xi.transpose();
  }
}

TEST(ExpSe3Test, SmallAngleBranchIsContinuous) {
  // Either side of the series switches the map must agree with the oracle.
  for (double angle : {0.5 * kSmallAngle, 2.0 * kSmallAngle, 1e-9, 1e-4, 6.6e-3, 6.7e-3, 0.1}) {
    Twist xi;
    xi << angle, -angle, 0.5 * angle, 0.3, -0.2, 0.1;
    const Mat4 expected = oracle::expm_series(oracle::twist_matrix(xi));
    EXPECT_LT(MaxAbs(exp_se3(xi).matrix() - expected), 1e-14) << angle;
  }
}

TEST(LogSe3Test, IdentityIsZero) { EXPECT_EQ(log_se3(Pose::Identity()), Twist::Zero()); }

TEST(LogSe3Test, RoundTripFixedTwist) {
  Twist xi;
  xi << 0.1, 0.2, -0.1, 0.5, 0, 0.2;
  EXPECT_LT(MaxAbs(log_se3(exp_se3(xi)) - xi), 1e-14);
}

TEST(LogSe3Test, RoundTripRandomTwists) {
  CounterRng rng(12, 0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Twist xi = RandomTwist(rng, std::numbers::pi - 1e-3, 5.0);
    worst = std::max(worst, MaxAbs(log_se3(exp_se3(xi)) - xi));
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(LogSe3Test, MatchesSeriesLogNearIdentity) {
  CounterRng rng(13, 0);
  for (int i = 0; i < 100; ++i) {
    const Pose x = exp_se3(RandomTwist(rng, 0.4, 0.3));
    const Mat4 expected = oracle::logm_series(x.matrix());
    EXPECT_LT(MaxAbs(hat6(log_se3(x)) - expected), 1e-12);
  }
}

TEST(LogSe3Test, NearHalfTurnThrows) {
  Twist xi;
  xi << std::numbers::pi - 1e-9, 0, 0, 0, 0, 0;
  const Pose x = exp_se3(xi);
  EXPECT_THROW(log_se3(x), AngleNearPi);
  EXPECT_NO_THROW(log_se3_unchecked(x));
  EXPECT_NEAR(log_se3_unchecked(x).head<3>().norm(), std::numbers::pi, 1e-6);
}

TEST(LeftJacobianTest, InverseIsInverse) {
  CounterRng rng(14, 0);
  for (int i = 0; i < 50; ++i) {
    const Vec3 w = RandomTwist(rng, 3.0, 0.0).head<3>();
    EXPECT_LT(MaxAbs(left_jacobian_so3(w) * left_jacobian_inverse_so3(w) - Mat3::Identity()), 1e-10);
  }
}

TEST(AdjointTest, IdentityAndHomomorphism) {
  EXPECT_EQ(adjoint(Pose::Identity()), Mat6::Identity());
  CounterRng rng(15, 0);
  for (int i = 0; i < 100; ++i) {
    const Pose x = RandomPose(rng);
    const Pose y = RandomPose(rng);
    EXPECT_LT(MaxAbs(adjoint(x * y) - adjoint(x) * adjoint(y)), 1e-9);
    EXPECT_LT(MaxAbs(adjoint(x.inverse()) - adjoint(x).inverse()), 1e-9);
  }
}

TEST(AdjointTest, ConjugatesTwists) {
  // X xi^ X^-1 = (Ad_X xi)^.
  CounterRng rng(16, 0);
  for (int i = 0; i < 50; ++i) {
    const Pose x = RandomPose(rng);
    const Twist xi = RandomTwist(rng, 1.0, 1.0);
    const Mat4 lhs = x.matrix() * hat6(xi) * x.inverse().matrix();
    EXPECT_LT(MaxAbs(lhs - hat6(adjoint(x) * xi)), 1e-12);
  }
}

TEST(LittleAdTest, ZeroAndSelfBracket) {
  EXPECT_EQ(ad(Twist::Zero()), Mat6::Zero());
  CounterRng rng(17, 0);
  for (int i = 0; i < 100; ++i) {
    const Twist xi = RandomTwist(rng, 3.0, 5.0);
    EXPECT_LT((ad(xi) * xi).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(LittleAdTest, MatrixCommutator) {
  // (ad_a b)^ = a^ b^ - b^ a^.
  CounterRng rng(18, 0);
  for (int i = 0; i < 50; ++i) {
    const Twist a = RandomTwist(rng, 2.0, 2.0);
    const Twist b = RandomTwist(rng, 2.0, 2.0);
    EXPECT_LT(MaxAbs(hat6(ad(a) * b) - (hat6(a) * hat6(b) - hat6(b) * hat6(a))), 1e-12);
  }
}

TEST(LittleAdTest, DerivativeOfAdjointAlongExp) {
  CounterRng rng(19, 0);
  const double h = 1e-5;
  for (int i = 0; i < 20; ++i) {
    const Twist xi = RandomTwist(rng, 1.5, 1.5);
    const Mat6 fd = (adjoint(exp_se3(h * xi)) - adjoint(exp_se3(-h * xi))) / (2.0 * h);
    EXPECT_LT(MaxAbs(fd - ad(xi)), 1e-6);
  }
}

TEST(PoseTest, FromMatrixRejectsNonOrthogonal) {
  Mat4 m = Mat4::Identity();
  m(0, 0) = 1.1;
  EXPECT_THROW(Pose::FromMatrix(m), Error);
}

TEST(PoseTest, YawOfPlanarRotation) {
  Twist xi;
  xi << 0, 0, 0.7, 0, 0, 0;
  EXPECT_NEAR(exp_se3(xi).yaw(), 0.7, 1e-15);
}

}  // namespace
}  // namespace liempc
