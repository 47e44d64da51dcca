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

#include "liempc/qp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/LU>
#include <Eigen/SparseCore>

namespace liempc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinScale = 1e-4;
constexpr double kMaxScale = 1e4;

double clamp_scale(double v) {
  if (!(v > kMinScale)) return 1.0;
  return std::min(v, kMaxScale);
}

double inf_norm(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

void QuadraticProgram::validate() const {
  const int n = num_variables();
  const int m = num_constraints();
  if (hessian.rows() != n || hessian.cols() != n) {
    throw std::invalid_argument("QuadraticProgram: hessian must be n x n");
  }
  if (constraint_matrix.rows() != m || constraint_matrix.cols() != n || upper.size() != m) {
    throw std::invalid_argument("QuadraticProgram: constraint shapes are inconsistent");
  }
  if (n > 0 && (hessian - hessian.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("QuadraticProgram: hessian is not symmetric");
  }
  for (int i = 0; i < m; ++i) {
    if (!(lower(i) <= upper(i))) {
      throw std::invalid_argument("QuadraticProgram: lower bound exceeds upper bound");
    }
  }
}

std::string to_string(QpStatus status) {
  switch (status) {
    case QpStatus::kSolved:
      return "solved";
    case QpStatus::kMaxIterations:
      return "max_iter";
    case QpStatus::kPrimalInfeasible:
      return "primal_infeasible";
  }
  return "unknown";
}

KktResiduals kkt_residuals(const QuadraticProgram& qp, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y) {
  KktResiduals r;
  r.stationarity = inf_norm(qp.hessian * x + qp.gradient + qp.constraint_matrix.transpose() * y);
  const Eigen::VectorXd ax = qp.constraint_matrix * x;
  for (int i = 0; i < ax.size(); ++i) {
    const double viol = std::max(qp.lower(i) - ax(i), ax(i) - qp.upper(i));
    r.primal_feasibility = std::max(r.primal_feasibility, std::max(viol, 0.0));
    if (y(i) > 0.0) {
      const double gap = std::isfinite(qp.upper(i)) ? std::abs(qp.upper(i) - ax(i)) : kInf;
      r.complementarity = std::max(r.complementarity, y(i) * gap);
      if (!std::isfinite(qp.upper(i))) r.dual_sign = std::max(r.dual_sign, y(i));
    } else if (y(i) < 0.0) {
      const double gap = std::isfinite(qp.lower(i)) ? std::abs(ax(i) - qp.lower(i)) : kInf;
      r.complementarity = std::max(r.complementarity, -y(i) * gap);
      if (!std::isfinite(qp.lower(i))) r.dual_sign = std::max(r.dual_sign, -y(i));
    }
  }
  return r;
}

QpSolver::QpSolver(QpSettings settings) : settings_(settings) {
  if (!(settings_.rho > 0.0) || !(settings_.sigma > 0.0) || !(settings_.alpha > 0.0 && settings_.alpha < 2.0)) {
    throw std::invalid_argument("QpSolver: invalid rho/sigma/alpha");
  }
}

void QpSolver::setup(const QuadraticProgram& qp) {
  const int n = qp.num_variables();
  const int m = qp.num_constraints();
  if (factorizations_ > 0 && cached_hessian_.rows() == n && cached_constraints_.rows() == m &&
      cached_constraints_.cols() == n && cached_hessian_ == qp.hessian &&
      cached_constraints_ == qp.constraint_matrix) {
    return;
  }
  cached_hessian_ = qp.hessian;
  cached_constraints_ = qp.constraint_matrix;

  // Ruiz equilibration of [P A^T; A 0].
  d_ = Eigen::VectorXd::Ones(n);
  e_ = Eigen::VectorXd::Ones(m);
  p_scaled_ = qp.hessian;
  a_scaled_ = qp.constraint_matrix;
  cost_scale_ = 1.0;
  for (int it = 0; it < settings_.scaling_iterations; ++it) {
    Eigen::VectorXd delta(n);
    for (int j = 0; j < n; ++j) {
      double norm = p_scaled_.col(j).cwiseAbs().maxCoeff();
      if (m > 0) norm = std::max(norm, a_scaled_.col(j).cwiseAbs().maxCoeff());
      delta(j) = 1.0 / std::sqrt(clamp_scale(norm));
    }
    Eigen::VectorXd eps(m);
    for (int i = 0; i < m; ++i) {
      eps(i) = 1.0 / std::sqrt(clamp_scale(a_scaled_.row(i).cwiseAbs().maxCoeff()));
    }
    p_scaled_ = delta.asDiagonal() * p_scaled_ * delta.asDiagonal();
    a_scaled_ = eps.asDiagonal() * a_scaled_ * delta.asDiagonal();
    d_ = d_.cwiseProduct(delta);
    e_ = e_.cwiseProduct(eps);
  }
  if (n > 0) {
    double mean_col = 0.0;
    for (int j = 0; j < n; ++j) mean_col += p_scaled_.col(j).cwiseAbs().maxCoeff();
    mean_col /= n;
    cost_scale_ = 1.0 / clamp_scale(mean_col);
  }
  p_scaled_ *= cost_scale_;

  Eigen::MatrixXd kkt = p_scaled_;
  kkt.diagonal().array() += settings_.sigma;
  // A is usually a sparse (often identity) box map; accumulate A^T A over
  // its nonzeros only.
  const Eigen::SparseMatrix<double> a_sparse = a_scaled_.sparseView();
  if (a_sparse.nonZeros() < static_cast<Eigen::Index>(m) * n / 4) {
    const Eigen::SparseMatrix<double> ata = a_sparse.transpose() * a_sparse;
    kkt += settings_.rho * Eigen::MatrixXd(ata);
  } else {
    kkt.noalias() += settings_.rho * a_scaled_.transpose() * a_scaled_;
  }
  kkt_.compute(kkt);
  ++factorizations_;
}

bool QpSolver::try_polish(const QuadraticProgram& qp, const Eigen::VectorXd& z,
                          const Eigen::VectorXd& y, QpSolution* out) const {
  const int n = qp.num_variables();
  const int m = qp.num_constraints();
  std::vector<int> active;
  std::vector<double> target;
  for (int i = 0; i < m; ++i) {
    const bool at_lower = std::isfinite(qp.lower(i)) && z(i) - qp.lower(i) < -y(i);
    const bool at_upper = std::isfinite(qp.upper(i)) && qp.upper(i) - z(i) < y(i);
    if (at_lower) {
      active.push_back(i);
      target.push_back(qp.lower(i));
    } else if (at_upper) {
      active.push_back(i);
      target.push_back(qp.upper(i));
    }
  }
  const int k = static_cast<int>(active.size());
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + k, n + k);
  Eigen::VectorXd rhs(n + k);
  kkt.topLeftCorner(n, n) = qp.hessian;
  rhs.head(n) = -qp.gradient;
  for (int r = 0; r < k; ++r) {
    kkt.block(n + r, 0, 1, n) = qp.constraint_matrix.row(active[r]);
    kkt.block(0, n + r, n, 1) = qp.constraint_matrix.row(active[r]).transpose();
    rhs(n + r) = target[r];
  }
  // Regularized factorization plus iterative refinement on the exact system.
  constexpr double kDelta = 1e-9;
  Eigen::MatrixXd reg = kkt;
  reg.diagonal().head(n).array() += kDelta;
  reg.diagonal().tail(k).array() -= kDelta;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(reg);
  Eigen::VectorXd sol = lu.solve(rhs);
  for (int it = 0; it < 5; ++it) {
    const Eigen::VectorXd res = rhs - kkt * sol;
    if (!sol.allFinite()) return false;
    if (inf_norm(res) < 1e-14) break;
    sol += lu.solve(res);
  }
  if (!sol.allFinite()) return false;

  Eigen::VectorXd x = sol.head(n);
  Eigen::VectorXd y_full = Eigen::VectorXd::Zero(m);
  for (int r = 0; r < k; ++r) y_full(active[r]) = sol(n + r);

  // Reject polished points whose multipliers have the wrong sign.
  double sign_violation = 0.0;
  for (int r = 0; r < k; ++r) {
    const int i = active[r];
    if (qp.lower(i) == qp.upper(i)) continue;
    const bool lower_side = target[r] == qp.lower(i);
    sign_violation = std::max(sign_violation, lower_side ? y_full(i) : -y_full(i));
  }
  const KktResiduals res = kkt_residuals(qp, x, y_full);
  const double tol = settings_.eps_abs;
  if (sign_violation > tol || res.stationarity > tol || res.primal_feasibility > tol ||
      res.complementarity > tol) {
    return false;
  }
  out->primal = std::move(x);
  out->dual = std::move(y_full);
  out->primal_residual = res.primal_feasibility;
  out->dual_residual = res.stationarity;
  out->polished = true;
  return true;
}

QpSolution QpSolver::solve(const QuadraticProgram& qp, const QpWarmStart* warm_start) {
  qp.validate();
  setup(qp);
  const int n = qp.num_variables();
  const int m = qp.num_constraints();
  const double rho = settings_.rho;
  const double sigma = settings_.sigma;
  const double alpha = settings_.alpha;

  const Eigen::VectorXd q = cost_scale_ * d_.cwiseProduct(qp.gradient);
  Eigen::VectorXd lo(m), hi(m);
  for (int i = 0; i < m; ++i) {
    lo(i) = std::isfinite(qp.lower(i)) ? e_(i) * qp.lower(i) : -kInf;
    hi(i) = std::isfinite(qp.upper(i)) ? e_(i) * qp.upper(i) : kInf;
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  const bool warm = warm_start != nullptr && warm_start->primal.size() == n &&
                    warm_start->dual.size() == m;
  if (warm) {
    x = warm_start->primal.cwiseQuotient(d_);
    z = (a_scaled_ * x).cwiseMax(lo).cwiseMin(hi);
    y = cost_scale_ * warm_start->dual.cwiseQuotient(e_);
  }

  auto unscale_x = [&](const Eigen::VectorXd& xs) { return Eigen::VectorXd(d_.cwiseProduct(xs)); };
  auto unscale_z = [&](const Eigen::VectorXd& zs) { return Eigen::VectorXd(zs.cwiseQuotient(e_)); };
  auto unscale_y = [&](const Eigen::VectorXd& ys) {
    return Eigen::VectorXd(e_.cwiseProduct(ys) / cost_scale_);
  };

  QpSolution best;
  double best_score = kInf;
  Eigen::VectorXd y_prev = y;
  Eigen::VectorXd rhs(n), x_tilde(n), z_tilde(m), z_relaxed(m), z_next(m);

  for (int iter = 1; iter <= settings_.max_iterations; ++iter) {
    rhs = sigma * x - q;
    if (m > 0) rhs.noalias() += a_scaled_.transpose() * (rho * z - y);
    x_tilde = kkt_.solve(rhs);
    z_tilde.noalias() = a_scaled_ * x_tilde;
    x = alpha * x_tilde + (1.0 - alpha) * x;
    z_relaxed = alpha * z_tilde + (1.0 - alpha) * z;
    z_next = (z_relaxed + y / rho).cwiseMax(lo).cwiseMin(hi);
    y_prev = y;
    y += rho * (z_relaxed - z_next);
    z = z_next;

    // Residuals of the original problem.
    const Eigen::VectorXd xu = unscale_x(x);
    const Eigen::VectorXd zu = unscale_z(z);
    const Eigen::VectorXd yu = unscale_y(y);
    const Eigen::VectorXd axu = qp.constraint_matrix * xu;
    const double r_prim = m > 0 ? inf_norm(axu - zu) : 0.0;
    const Eigen::VectorXd px = qp.hessian * xu;
    const Eigen::VectorXd aty = qp.constraint_matrix.transpose() * yu;
    const double r_dual = inf_norm(px + qp.gradient + aty);
    const double eps_prim =
        settings_.eps_abs + settings_.eps_rel * std::max(inf_norm(axu), inf_norm(zu));
    const double eps_dual =
        settings_.eps_abs +
        settings_.eps_rel * std::max({inf_norm(px), inf_norm(aty), inf_norm(qp.gradient)});

    const double score = std::max(r_prim, r_dual);
    if (score < best_score) {
      best_score = score;
      best.primal = xu;
      best.dual = yu;
      best.primal_residual = r_prim;
      best.dual_residual = r_dual;
    }

    if (r_prim <= eps_prim && r_dual <= eps_dual) {
      QpSolution sol;
      sol.primal = xu;
      sol.dual = yu;
      sol.iterations = iter;
      sol.primal_residual = r_prim;
      sol.dual_residual = r_dual;
      sol.status = QpStatus::kSolved;
      if (settings_.polish) {
        QpSolution polished;
        if (try_polish(qp, zu, yu, &polished)) {
          polished.iterations = iter;
          polished.status = QpStatus::kSolved;
          return polished;
        }
      }
      return sol;
    }

    const bool check = (warm && iter == 1) || iter % settings_.check_interval == 0;
    if (check && settings_.polish) {
      QpSolution polished;
      if (try_polish(qp, zu, yu, &polished)) {
        polished.iterations = iter;
        polished.status = QpStatus::kSolved;
        return polished;
      }
    }
    if (check && m > 0) {
      // Primal infeasibility certificate from the dual increment.
      const Eigen::VectorXd dy = unscale_y(y - y_prev);
      const double dy_norm = inf_norm(dy);
      if (dy_norm > 1e-12) {
        const double eps = settings_.eps_primal_infeasible * dy_norm;
        bool certificate = inf_norm(qp.constraint_matrix.transpose() * dy) <= eps;
        double support = 0.0;
        for (int i = 0; certificate && i < m; ++i) {
          if (dy(i) > eps) {
            if (!std::isfinite(qp.upper(i))) certificate = false;
            else support += qp.upper(i) * dy(i);
          } else if (dy(i) < -eps) {
            if (!std::isfinite(qp.lower(i))) certificate = false;
            else support += qp.lower(i) * dy(i);
          }
        }
        if (certificate && support < -eps) {
          QpSolution sol = best;
          sol.iterations = iter;
          sol.status = QpStatus::kPrimalInfeasible;
          sol.dual = dy / dy_norm;
          return sol;
        }
      }
    }
  }
  best.iterations = settings_.max_iterations;
  best.status = QpStatus::kMaxIterations;
  return best;
}

}  // namespace liempc
