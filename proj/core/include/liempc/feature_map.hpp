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

#ifndef LIEMPC_FEATURE_MAP_HPP_
#define LIEMPC_FEATURE_MAP_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "liempc/liegroup.hpp"
#include "liempc/types.hpp"

namespace liempc {

// Learner input layout: [log(X) (6); twist (6); time (s)].
inline constexpr int kInputDim = 13;
inline constexpr int kTimeIndex = 12;

Vec13 learner_input(const Pose& pose, const Twist& twist, double time);

enum class Trig { kSin, kCos };

std::string to_string(Trig trig);
Trig trig_from_string(const std::string& name);

struct Feature {
  int variable = 0;  // 0-based index into the 13-D input
  Trig trig = Trig::kSin;
  double frequency = 0.0;

  double evaluate(const Vec13& z) const;
  bool operator==(const Feature&) const = default;
};

class FeatureMap {
 public:
  FeatureMap() = default;
  explicit FeatureMap(std::vector<Feature> features);

  int size() const { return static_cast<int>(features_.size()); }
  const std::vector<Feature>& features() const { return features_; }
  const Feature& operator[](int k) const { return features_[k]; }

  Eigen::VectorXd evaluate(const Vec13& z) const;
  void evaluate(const Vec13& z, Eigen::Ref<Eigen::VectorXd> out) const;

  bool operator==(const FeatureMap&) const = default;

 private:
  std::vector<Feature> features_;
};

// Text format, one feature per line: `index, variable, trig, frequency`,
// with the variable 1-based. Lines starting with '#' are comments.
void write_feature_map(std::ostream& os, const FeatureMap& map);
FeatureMap read_feature_map(std::istream& is);
void write_feature_map_file(const std::string& path, const FeatureMap& map);
FeatureMap read_feature_map_file(const std::string& path);

}  // namespace liempc

#endif  // LIEMPC_FEATURE_MAP_HPP_
