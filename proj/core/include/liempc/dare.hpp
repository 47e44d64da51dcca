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

#ifndef LIEMPC_DARE_HPP_
#define LIEMPC_DARE_HPP_

#include <Eigen/Core>

#include "liempc/types.hpp"

namespace liempc {

struct DareOptions {
  double tolerance = 1e-10;
  int max_iterations = 100000;
  // An update size that has not halved within this many iterations is
  // treated as a plateau.
  int plateau_window = 5000;
};

struct TuningResult {
  Eigen::MatrixXd p;
  Eigen::MatrixXd k;
  Eigen::VectorXcd closed_loop_eigenvalues;
  double spectral_radius = 0.0;
  double residual = 0.0;
  int iterations = 0;
  // Advisory: closed-loop poles include complex pairs, or a real part is
  // within 0.05 of one.
  bool has_complex_pair = false;
  bool near_unit_real_part = false;
};

// Max-abs entry of A^T P A - P - A^T P B (R + B^T P B)^{-1} B^T P A + Q.
double riccati_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& q,
                        const Eigen::MatrixXd& r, const Eigen::MatrixXd& p);

// Fixed-point iteration of the Riccati recursion from P = Q, with
// K = (R + B^T P B)^{-1} B^T P A. Throws NotConverged or Unstabilizable.
TuningResult solve_dare(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& q,
                        const Eigen::MatrixXd& r, const DareOptions& options = {});

}  // namespace liempc

#endif  // LIEMPC_DARE_HPP_
