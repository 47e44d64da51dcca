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

#include "liempc/dare.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace liempc {

namespace {

void check_shapes(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& q,
                  const Eigen::MatrixXd& r) {
  const auto n = a.rows();
  if (a.cols() != n || b.rows() != n || q.rows() != n || q.cols() != n || r.rows() != b.cols() ||
      r.cols() != b.cols()) {
    throw std::invalid_argument("solve_dare: inconsistent matrix shapes");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (r + r.transpose()));
  if (llt.info() != Eigen::Success) throw std::invalid_argument("solve_dare: R must be positive definite");
}

Eigen::MatrixXd riccati_step(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                             const Eigen::MatrixXd& q, const Eigen::MatrixXd& r,
                             const Eigen::MatrixXd& p) {
  const Eigen::MatrixXd bp = b.transpose() * p;
  const Eigen::MatrixXd gain = (r + bp * b).ldlt().solve(bp * a);
  Eigen::MatrixXd next = a.transpose() * p * a - (bp * a).transpose() * gain + q;
  return 0.5 * (next + next.transpose());
}

}  // namespace

double riccati_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& q,
                        const Eigen::MatrixXd& r, const Eigen::MatrixXd& p) {
  return (riccati_step(a, b, q, r, p) - p).cwiseAbs().maxCoeff();
}

TuningResult solve_dare(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& q,
                        const Eigen::MatrixXd& r, const DareOptions& options) {
  check_shapes(a, b, q, r);
  TuningResult out;
  Eigen::MatrixXd p = q;
  double best = std::numeric_limits<double>::infinity();
  int best_at = 0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Eigen::MatrixXd next = riccati_step(a, b, q, r, p);
    const double change = (next - p).cwiseAbs().maxCoeff();
    p = next;
    if (!p.allFinite()) throw Unstabilizable("solve_dare: Riccati iteration diverged");
    // Accept on the residual of the returned P, not just the last update.
    if (change <= options.tolerance) {
      out.residual = riccati_residual(a, b, q, r, p);
      if (out.residual <= options.tolerance) {
        out.iterations = it;
        break;
      }
    }
    if (change < 0.5 * best) {
      best = change;
      best_at = it;
    } else if (it - best_at > options.plateau_window) {
      throw Unstabilizable("solve_dare: residual plateaued at " + std::to_string(change));
    }
    if (it == options.max_iterations) {
      throw NotConverged("solve_dare: no convergence after " + std::to_string(it) + " iterations");
    }
  }
  out.p = p;
  const Eigen::MatrixXd bp = b.transpose() * p;
  out.k = (r + bp * b).ldlt().solve(bp * a);
  const Eigen::MatrixXd closed = a - b * out.k;
  out.closed_loop_eigenvalues = closed.eigenvalues();
  for (Eigen::Index i = 0; i < out.closed_loop_eigenvalues.size(); ++i) {
    const std::complex<double> ev = out.closed_loop_eigenvalues[i];
    out.spectral_radius = std::max(out.spectral_radius, std::abs(ev));
    if (std::abs(ev.imag()) > 1e-9) out.has_complex_pair = true;
    if (ev.real() > 0.95) out.near_unit_real_part = true;
  }
  return out;
}

}  // namespace liempc
