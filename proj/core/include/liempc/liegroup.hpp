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

// SE(3) / SO(3) group and algebra operations. Twists are ordered
// [angular; linear] throughout; rotations are stored as matrices.

#ifndef LIEMPC_LIEGROUP_HPP_
#define LIEMPC_LIEGROUP_HPP_

#include "liempc/types.hpp"

namespace liempc {

// Below this rotation angle exp/log switch to their Taylor expansions.
inline constexpr double kSmallAngle = 1e-6;

// log refuses rotations whose angle is within this margin of pi.
inline constexpr double kNearPiMargin = 1e-6;

// Rigid transform X = [R p; 0 1].
class Pose {
 public:
  Pose() : rotation_(Mat3::Identity()), position_(Vec3::Zero()) {}
  Pose(const Mat3& rotation, const Vec3& position)
      : rotation_(rotation), position_(position) {}

  static Pose Identity() { return Pose(); }

  // Validates orthogonality (1e-9) before accepting a homogeneous matrix.
  static Pose FromMatrix(const Mat4& m);

  const Mat3& rotation() const { return rotation_; }
  const Vec3& position() const { return position_; }

  Mat4 matrix() const;
  Pose inverse() const;
  Vec3 operator*(const Vec3& point) const { return rotation_ * point + position_; }
  Pose operator*(const Pose& other) const {
    return Pose(rotation_ * other.rotation_, rotation_ * other.position_ + position_);
  }

  // Heading (rotation about world z) for planar reporting.
  double yaw() const;

 private:
  Mat3 rotation_;
  Vec3 position_;
};

Mat3 hat3(const Vec3& w);
Vec3 vee3(const Mat3& m);

Mat4 hat6(const Twist& xi);
Twist vee6(const Mat4& m);

Mat3 exp_so3(const Vec3& w);

// Throws AngleNearPi when the angle is within kNearPiMargin of pi.
Vec3 log_so3(const Mat3& r);

// Same map without the precondition: at (or near) pi one of the two valid
// axes is returned. Used where a continuous flattening is not required.
Vec3 log_so3_unchecked(const Mat3& r);

// Left Jacobian of SO(3) and its inverse.
Mat3 left_jacobian_so3(const Vec3& w);
Mat3 left_jacobian_inverse_so3(const Vec3& w);

Pose exp_se3(const Twist& xi);
Twist log_se3(const Pose& x);
Twist log_se3_unchecked(const Pose& x);

// Ad_X = [R 0; p^ R  R].
Mat6 adjoint(const Pose& x);

// ad_xi = [w^ 0; v^ w^].
Mat6 ad(const Twist& xi);

}  // namespace liempc

#endif  // LIEMPC_LIEGROUP_HPP_
