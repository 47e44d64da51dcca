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

#include <Eigen/LU>

namespace liempc {

namespace {

// sin(t)/t, (1-cos t)/t^2, (t-sin t)/t^3 with Taylor branches near zero.
struct RodriguesCoefficients {
  double a;
  double b;
  double c;
};

// Below this angle the closed forms lose digits to cancellation; the
// truncated series are accurate to round-off there.
constexpr double kSeriesAngle = 1e-2;

RodriguesCoefficients rodrigues(double theta) {
  const double t2 = theta * theta;
  if (theta < kSeriesAngle) {
    const double t4 = t2 * t2;
    const double t6 = t4 * t2;
    return {1.0 - t2 / 6.0 + t4 / 120.0 - t6 / 5040.0, 0.5 - t2 / 24.0 + t4 / 720.0 - t6 / 40320.0,
            1.0 / 6.0 - t2 / 120.0 + t4 / 5040.0 - t6 / 362880.0};
  }
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  return {s / theta, (1.0 - c) / t2, (theta - s) / (t2 * theta)};
}

double rotation_angle(const Mat3& r) {
  const double cos_theta = 0.5 * (r.trace() - 1.0);
  const Vec3 axis_sin = 0.5 * Vec3(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  return std::atan2(axis_sin.norm(), cos_theta);
}

}  // namespace

Pose Pose::FromMatrix(const Mat4& m) {
  const Mat3 r = m.topLeftCorner<3, 3>();
  if ((r * r.transpose() - Mat3::Identity()).norm() > 1e-9 ||
      std::abs(r.determinant() - 1.0) > 1e-9) {
    throw Error("Pose::FromMatrix: rotation block is not in SO(3)");
  }
  if (m.row(3).head<3>().norm() > 1e-12 || std::abs(m(3, 3) - 1.0) > 1e-12) {
    throw Error("Pose::FromMatrix: bottom row must be [0 0 0 1]");
  }
  return Pose(r, m.topRightCorner<3, 1>());
}

Mat4 Pose::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = position_;
  return m;
}

Pose Pose::inverse() const {
  const Mat3 rt = rotation_.transpose();
  return Pose(rt, -rt * position_);
}

double Pose::yaw() const { return std::atan2(rotation_(1, 0), rotation_(0, 0)); }

Mat3 hat3(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return m;
}

Vec3 vee3(const Mat3& m) { return Vec3(m(2, 1), m(0, 2), m(1, 0)); }

Mat4 hat6(const Twist& xi) {
  Mat4 m = Mat4::Zero();
  m.topLeftCorner<3, 3>() = hat3(xi.head<3>());
  m.topRightCorner<3, 1>() = xi.tail<3>();
  return m;
}

Twist vee6(const Mat4& m) {
  Twist xi;
  xi << vee3(m.topLeftCorner<3, 3>()), m.topRightCorner<3, 1>();
  return xi;
}

Mat3 exp_so3(const Vec3& w) {
  const auto k = rodrigues(w.norm());
  const Mat3 w_hat = hat3(w);
  return Mat3::Identity() + k.a * w_hat + k.b * w_hat * w_hat;
}

Mat3 left_jacobian_so3(const Vec3& w) {
  const auto k = rodrigues(w.norm());
  const Mat3 w_hat = hat3(w);
  return Mat3::Identity() + k.b * w_hat + k.c * w_hat * w_hat;
}

Mat3 left_jacobian_inverse_so3(const Vec3& w) {
  const double theta = w.norm();
  const Mat3 w_hat = hat3(w);
  double e;
  if (theta < kSeriesAngle) {
    const double t2 = theta * theta;
    e = 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0 + t2 * t2 * t2 / 1209600.0;
  } else {
    const auto k = rodrigues(theta);
    e = (1.0 - k.a / (2.0 * k.b)) / (theta * theta);
  }
  return Mat3::Identity() - 0.5 * w_hat + e * w_hat * w_hat;
}

Vec3 log_so3_unchecked(const Mat3& r) {
  const double theta = rotation_angle(r);
  const Vec3 skew = 0.5 * Vec3(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  if (theta < kSmallAngle) {
    return (1.0 + theta * theta / 6.0) * skew;
  }
  if (theta < std::numbers::pi - 1e-3) {
    return theta / std::sin(theta) * skew;
  }
  // Near pi the skew part vanishes; recover the axis from the symmetric part
  // (R + R^T)/2 = cos(t) I + (1 - cos(t)) n n^T.
  const Mat3 sym = 0.5 * (r + r.transpose()) - std::cos(theta) * Mat3::Identity();
  int col = 0;
  sym.diagonal().maxCoeff(&col);
  Vec3 axis = sym.col(col).normalized();
  if (axis.dot(skew) < 0.0) axis = -axis;
  return theta * axis;
}

Vec3 log_so3(const Mat3& r) {
  if (rotation_angle(r) > std::numbers::pi - kNearPiMargin) {
    throw AngleNearPi("log_so3: rotation angle within 1e-6 of pi");
  }
  return log_so3_unchecked(r);
}

Pose exp_se3(const Twist& xi) {
  const Vec3 w = xi.head<3>();
  const auto k = rodrigues(w.norm());
  const Mat3 w_hat = hat3(w);
  const Mat3 w_hat2 = w_hat * w_hat;
  const Mat3 r = Mat3::Identity() + k.a * w_hat + k.b * w_hat2;
  const Mat3 v = Mat3::Identity() + k.b * w_hat + k.c * w_hat2;
  return Pose(r, v * xi.tail<3>());
}

Twist log_se3_unchecked(const Pose& x) {
  const Vec3 w = log_so3_unchecked(x.rotation());
  Twist xi;
  xi << w, left_jacobian_inverse_so3(w) * x.position();
  return xi;
}

Twist log_se3(const Pose& x) {
  const Vec3 w = log_so3(x.rotation());
  Twist xi;
  xi << w, left_jacobian_inverse_so3(w) * x.position();
  return xi;
}

Mat6 adjoint(const Pose& x) {
  Mat6 m = Mat6::Zero();
  const Mat3& r = x.rotation();
  m.topLeftCorner<3, 3>() = r;
  m.bottomLeftCorner<3, 3>() = hat3(x.position()) * r;
  m.bottomRightCorner<3, 3>() = r;
  return m;
}

Mat6 ad(const Twist& xi) {
  Mat6 m = Mat6::Zero();
  const Mat3 w_hat = hat3(xi.head<3>());
  m.topLeftCorner<3, 3>() = w_hat;
  m.bottomLeftCorner<3, 3>() = hat3(xi.tail<3>());
  m.bottomRightCorner<3, 3>() = w_hat;
  return m;
}

}  // namespace liempc
