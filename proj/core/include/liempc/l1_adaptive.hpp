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

#ifndef LIEMPC_L1_ADAPTIVE_HPP_
#define LIEMPC_L1_ADAPTIVE_HPP_

#include "liempc/types.hpp"
#include "liempc/vessel.hpp"

namespace liempc {

struct L1Config {
  Vec6 predictor_poles = Vec6::Constant(5.0);   // A_s = -diag(poles), rad/s
  double bandwidth = 2.0;                       // low-pass filter, rad/s
  double sample_period = 0.02;                  // adaptation period, s
  double predictor_step = 1e-3;                 // RK4 step of the predictor
  Vec6 estimate_bound = Vec6::Constant(100.0);  // |wrench estimate| clamp

  void validate() const;
};

// Piecewise-constant adaptation: a twist predictor driven by the nominal
// hydrodynamics, the realized wrench and the acceleration estimate sigma;
// sigma is reset from the prediction error each sample and low-pass
// filtered into a disturbance-wrench estimate that is subtracted from the
// nominal command.
class L1Adaptive {
 public:
  L1Adaptive(const VesselModel& model, L1Config config);

  void reset(const Twist& twist);

  // nominal - filtered disturbance estimate.
  Wrench correct(const Wrench& nominal) const { return nominal - estimate_; }

  // Updates the estimate from the measured twist at the end of a sample.
  void adapt(const Twist& measured);

  // Integrates the predictor over one sample with the wrench actually
  // applied to the plant.
  void propagate(const Wrench& realized, double dt);

  // adapt followed by correct. The caller propagates with the realized
  // wrench once it has been allocated and saturated.
  Wrench step(const Wrench& nominal, const Twist& measured);

  const Wrench& estimate() const { return estimate_; }
  const Vec6& sigma() const { return sigma_; }
  const Twist& predicted_twist() const { return predicted_; }
  double prediction_error() const { return last_error_; }

 private:
  Twist rate(const Twist& xi_hat, const Twist& measured, const Wrench& tau) const;

  VesselModel model_;
  L1Config config_;
  Twist predicted_ = Twist::Zero();
  Twist measured_ = Twist::Zero();
  Vec6 sigma_ = Vec6::Zero();
  Wrench estimate_ = Wrench::Zero();
  double last_error_ = 0.0;
  bool initialized_ = false;
};

}  // namespace liempc

#endif  // LIEMPC_L1_ADAPTIVE_HPP_
