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

#ifndef LIEMPC_ONLINE_LEARNER_HPP_
#define LIEMPC_ONLINE_LEARNER_HPP_

#include <deque>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "liempc/error_mpc.hpp"
#include "liempc/feature_map.hpp"
#include "liempc/types.hpp"

namespace liempc {

// h = (x_next - x) / dt - (A x + B u + h_nominal). The error states are
// already Lie-algebra coordinates, so their difference is taken directly.
Vec12 measure_residual(const Vec12& x, const Vec12& x_next, const Vec2& thrusts,
                       const ContinuousErrorModel& model, double dt);

struct LearnerConfig {
  int buffer_size = 30;
  double step_size = 1e-4;
  double smoothness = 1e-4;

  void validate() const;
};

struct BufferedSample {
  Vec12 residual;
  Vec13 input;
  Eigen::VectorXd features;
  Vec12 prediction;           // made with the weights at insertion time
  Vec12 previous_prediction;  // prediction of the preceding sample (0 first)
};

class OnlineLearner {
 public:
  OnlineLearner(FeatureMap map, LearnerConfig config);

  // A^T phi(z).
  Vec12 predict(const Vec13& z) const;

  // Forecasts for a sequence of predicted inputs with the current weights.
  std::vector<Vec12> forecast(std::span<const Vec13> inputs) const;

  // Inserts the newest residual sample and takes one gradient step.
  // Returns the buffered loss evaluated before the step.
  double update(const Vec12& residual, const Vec13& z);

  // Buffered loss and its gradient for arbitrary weights, with the newest
  // sample's prediction taken live and older predictions as stored.
  double loss(const Eigen::MatrixXd& weights) const;
  Eigen::MatrixXd gradient(const Eigen::MatrixXd& weights) const;

  const Eigen::MatrixXd& weights() const { return weights_; }
  void set_weights(const Eigen::MatrixXd& weights);
  const std::deque<BufferedSample>& buffer() const { return buffer_; }
  const FeatureMap& feature_map() const { return map_; }
  const LearnerConfig& config() const { return config_; }
  long long num_updates() const { return num_updates_; }

 private:
  FeatureMap map_;
  LearnerConfig config_;
  Eigen::MatrixXd weights_;  // F x 12
  std::deque<BufferedSample> buffer_;
  Vec12 last_prediction_ = Vec12::Zero();
  double last_time_ = -std::numeric_limits<double>::infinity();
  long long num_updates_ = 0;
};

}  // namespace liempc

#endif  // LIEMPC_ONLINE_LEARNER_HPP_
