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

namespace liempc {

Vec12 measure_residual(const Vec12& x, const Vec12& x_next, const Vec2& thrusts,
                       const ContinuousErrorModel& model, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("measure_residual: dt must be positive");
  return (x_next - x) / dt - (model.a * x + model.b * thrusts + model.h);
}

void LearnerConfig::validate() const {
  if (buffer_size < 1) throw ConfigError("learner: buffer_size must be >= 1");
  if (!(step_size > 0.0)) throw ConfigError("learner: step_size must be positive");
  if (!(smoothness >= 0.0)) throw ConfigError("learner: smoothness must be >= 0");
}

OnlineLearner::OnlineLearner(FeatureMap map, LearnerConfig config)
    : map_(std::move(map)), config_(config), weights_(Eigen::MatrixXd::Zero(map_.size(), 12)) {
  config_.validate();
  if (map_.size() < 1) throw ConfigError("learner: empty feature map");
}

Vec12 OnlineLearner::predict(const Vec13& z) const {
  return weights_.transpose() * map_.evaluate(z);
}

std::vector<Vec12> OnlineLearner::forecast(std::span<const Vec13> inputs) const {
  std::vector<Vec12> out;
  out.reserve(inputs.size());
  Eigen::VectorXd phi(map_.size());
  for (const Vec13& z : inputs) {
    map_.evaluate(z, phi);
    out.push_back(weights_.transpose() * phi);
  }
  return out;
}

double OnlineLearner::loss(const Eigen::MatrixXd& weights) const {
  if (buffer_.empty()) return 0.0;
  double total = 0.0;
  const int s = static_cast<int>(buffer_.size());
  for (int j = 0; j < s; ++j) {
    const BufferedSample& b = buffer_[j];
    const Vec12 live = weights.transpose() * b.features;
    total += (b.residual - live).squaredNorm();
    const Vec12& current = j == s - 1 ? live : b.prediction;
    total += config_.smoothness * (current - b.previous_prediction).squaredNorm();
  }
  return total / s;
}

Eigen::MatrixXd OnlineLearner::gradient(const Eigen::MatrixXd& weights) const {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(weights.rows(), 12);
  if (buffer_.empty()) return g;
  const int s = static_cast<int>(buffer_.size());
  for (const BufferedSample& b : buffer_) {
    const Vec12 err = weights.transpose() * b.features - b.residual;
    g.noalias() += b.features * err.transpose();
  }
  const BufferedSample& newest = buffer_.back();
  const Vec12 jump = weights.transpose() * newest.features - newest.previous_prediction;
  g.noalias() += config_.smoothness * newest.features * jump.transpose();
  return (2.0 / s) * g;
}

double OnlineLearner::update(const Vec12& residual, const Vec13& z) {
  if (!residual.allFinite() || !z.allFinite()) {
    throw std::invalid_argument("learner: non-finite sample");
  }
  if (!(z[kTimeIndex] > last_time_)) {
    throw std::invalid_argument("learner: time must increase across updates");
  }
  last_time_ = z[kTimeIndex];

  BufferedSample b;
  b.residual = residual;
  b.input = z;
  b.features = map_.evaluate(z);
  b.prediction = weights_.transpose() * b.features;
  b.previous_prediction = last_prediction_;
  last_prediction_ = b.prediction;
  buffer_.push_back(std::move(b));
  while (static_cast<int>(buffer_.size()) > config_.buffer_size) buffer_.pop_front();

  const double l = loss(weights_);
  weights_ -= config_.step_size * gradient(weights_);
  ++num_updates_;
  return l;
}

void OnlineLearner::set_weights(const Eigen::MatrixXd& weights) {
  if (weights.rows() != map_.size() || weights.cols() != 12) {
    throw std::invalid_argument("learner: weight matrix must be F x 12");
  }
  weights_ = weights;
}

}  // namespace liempc
