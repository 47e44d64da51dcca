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

// Operator-splitting (ADMM) solver for convex QPs of the form
//
//   minimize    1/2 x^T P x + q^T x
//   subject to  l <= A x <= u
//
// with Ruiz equilibration, a fixed penalty, over-relaxation, solution
// polishing on the guessed active set and a primal-infeasibility certificate.
// The dual sign convention is y < 0 on an active lower bound and y > 0 on an
// active upper bound.

#ifndef LIEMPC_QP_SOLVER_HPP_
#define LIEMPC_QP_SOLVER_HPP_

#include <iosfwd>
#include <optional>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace liempc {

struct QuadraticProgram {
  Eigen::MatrixXd hessian;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd constraint_matrix;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int num_variables() const { return static_cast<int>(gradient.size()); }
  int num_constraints() const { return static_cast<int>(lower.size()); }

  // Throws std::invalid_argument on inconsistent shapes, an asymmetric
  // hessian (1e-10) or lower > upper.
  void validate() const;

  double objective(const Eigen::VectorXd& x) const {
    return 0.5 * x.dot(hessian * x) + gradient.dot(x);
  }
};

enum class QpStatus { kSolved, kMaxIterations, kPrimalInfeasible };

std::string to_string(QpStatus status);

struct QpSolution {
  Eigen::VectorXd primal;
  Eigen::VectorXd dual;
  QpStatus status = QpStatus::kMaxIterations;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool polished = false;
};

struct QpWarmStart {
  Eigen::VectorXd primal;
  Eigen::VectorXd dual;
};

struct QpSettings {
  double rho = 0.1;
  double sigma = 1e-6;
  double alpha = 1.6;
  double eps_abs = 1e-6;
  double eps_rel = 0.0;
  double eps_primal_infeasible = 1e-6;
  int max_iterations = 4000;
  int scaling_iterations = 10;
  bool polish = true;
  // Polishing and the infeasibility test run every `check_interval`
  // iterations (and on the first iteration of a warm-started solve).
  int check_interval = 10;
};

// KKT quality measures in the original (unscaled) problem.
struct KktResiduals {
  double stationarity = 0.0;            // ||P x + q + A^T y||_inf
  double primal_feasibility = 0.0;      // max bound violation of A x
  double complementarity = 0.0;         // max |y_i| * distance to its bound
  double dual_sign = 0.0;               // max wrong-signed multiplier
};

KktResiduals kkt_residuals(const QuadraticProgram& qp, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y);

// A solver instance owns the scaled problem data and a cached factorization
// of P + sigma I + rho A^T A; the cache is reused when the next problem has
// bitwise-identical P and A. Not safe for concurrent solves.
class QpSolver {
 public:
  explicit QpSolver(QpSettings settings = {});

  QpSolution solve(const QuadraticProgram& qp, const QpWarmStart* warm_start = nullptr);

  const QpSettings& settings() const { return settings_; }

  // Number of factorizations performed so far (cache diagnostics).
  int factorizations() const { return factorizations_; }

 private:
  void setup(const QuadraticProgram& qp);
  bool try_polish(const QuadraticProgram& qp, const Eigen::VectorXd& z_unscaled,
                  const Eigen::VectorXd& y_unscaled, QpSolution* out) const;

  QpSettings settings_;

  // Cache key.
  Eigen::MatrixXd cached_hessian_;
  Eigen::MatrixXd cached_constraints_;

  // Scaled data: P~ = c D P D, A~ = E A D.
  Eigen::VectorXd d_;
  Eigen::VectorXd e_;
  double cost_scale_ = 1.0;
  Eigen::MatrixXd p_scaled_;
  Eigen::MatrixXd a_scaled_;
  Eigen::LLT<Eigen::MatrixXd> kkt_;
  int factorizations_ = 0;
};

// Plain-text dump format, one problem per stream:
//
//   qp <n> <m>
//   hessian            n lines of n values (row-major)
//   gradient           1 line of n values
//   constraints        m lines of n values
//   lower              1 line of m values ("-inf" allowed)
//   upper              1 line of m values ("inf" allowed)
//   end
//
// Values are printed with 17 significant digits so a dump round-trips.
void write_qp(std::ostream& os, const QuadraticProgram& qp);
QuadraticProgram read_qp(std::istream& is);
void write_qp_file(const std::string& path, const QuadraticProgram& qp);
QuadraticProgram read_qp_file(const std::string& path);

}  // namespace liempc

#endif  // LIEMPC_QP_SOLVER_HPP_
