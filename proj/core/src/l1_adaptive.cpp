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

#include "liempc/l1_adaptive.hpp"

#include <cmath>

namespace liempc {

void L1Config::validate() const {
  if (!((predictor_poles.array() > 0.0).all())) {
    throw ConfigError("l1: predictor poles must be positive (Hurwitz A_s)");
  }
  if (!(bandwidth >= 0.0)) throw ConfigError("l1: bandwidth must be >= 0");
  if (!(sample_period > 0.0) || !(predictor_step > 0.0)) {
    throw ConfigError("l1: periods must be positive");
  }
  if (!((estimate_bound.array() > 0.0).all())) throw ConfigError("l1: estimate bounds must be positive");
}

L1Adaptive::L1Adaptive(const VesselModel& model, L1Config config) : model_(model), config_(config) {
  config_.validate();
}

void L1Adaptive::reset(const Twist& twist) {
  predicted_ = twist;
  measured_ = twist;
  sigma_.setZero();
  estimate_.setZero();
  last_error_ = 0.0;
  initialized_ = true;
}

Twist L1Adaptive::rate(const Twist& xi_hat, const Twist& measured, const Wrench& tau) const {
  return model_.mass_inverse() * (model_.hydro_wrench(xi_hat) + tau) + sigma_ -
         config_.predictor_poles.cwiseProduct(xi_hat - measured);
}

void L1Adaptive::adapt(const Twist& measured) {
  if (!initialized_) reset(measured);
  measured_ = measured;
  const Vec6 error = predicted_ - measured;
  last_error_ = error.norm();
  // sigma = -Phi(T)^{-1} e^{A_s T} error with A_s = -diag(a):
  // Phi(T)^{-1} e^{A_s T} = a e^{-a T} / (1 - e^{-a T}).
  const double t = config_.sample_period;
  const Vec6 decay = (-config_.predictor_poles * t).array().exp();
  const Vec6 gain = config_.predictor_poles.cwiseProduct(decay).cwiseQuotient(
      (Vec6::Ones() - decay));
  sigma_ = -gain.cwiseProduct(error);
  // First-order low-pass on the wrench-equivalent estimate, exact for a
  // piecewise-constant input.
  const double blend = 1.0 - std::exp(-config_.bandwidth * t);
  estimate_ += blend * (model_.mass_matrix() * sigma_ - estimate_);
  estimate_ = estimate_.cwiseMax(-config_.estimate_bound).cwiseMin(config_.estimate_bound);
}

void L1Adaptive::propagate(const Wrench& realized, double dt) {
  const int n = std::max(1, static_cast<int>(std::lround(dt / config_.predictor_step)));
  const double h = dt / n;
  for (int i = 0; i < n; ++i) {
    const Twist k1 = rate(predicted_, measured_, realized);
    const Twist k2 = rate(predicted_ + 0.5 * h * k1, measured_, realized);
    const Twist k3 = rate(predicted_ + 0.5 * h * k2, measured_, realized);
    const Twist k4 = rate(predicted_ + h * k3, measured_, realized);
    predicted_ += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

Wrench L1Adaptive::step(const Wrench& nominal, const Twist& measured) {
  adapt(measured);
  return correct(nominal);
}

}  // namespace liempc
