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

#ifndef LIEMPC_TYPES_HPP_
#define LIEMPC_TYPES_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace liempc {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Vec13 = Eigen::Matrix<double, 13, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat12 = Eigen::Matrix<double, 12, 12>;
using Mat6x2 = Eigen::Matrix<double, 6, 2>;
using Mat12x2 = Eigen::Matrix<double, 12, 2>;

// Body-frame twist, ordered [angular; linear].
using Twist = Vec6;

// Body-frame wrench, ordered [moment; force] to pair with Twist.
using Wrench = Vec6;

inline auto angular(const Twist& xi) { return xi.head<3>(); }
inline auto linear(const Twist& xi) { return xi.tail<3>(); }

// Indices into a Twist / Wrench.
inline constexpr int kRoll = 0;
inline constexpr int kPitch = 1;
inline constexpr int kYaw = 2;
inline constexpr int kSurge = 3;
inline constexpr int kSway = 4;
inline constexpr int kHeave = 5;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// log map requested too close to a rotation of pi.
class AngleNearPi : public Error {
 public:
  using Error::Error;
};

class SingularMass : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  using Error::Error;
};

class Unstabilizable : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace liempc

#endif  // LIEMPC_TYPES_HPP_
