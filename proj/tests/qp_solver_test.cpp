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
#include <cstring>
#include <filesystem>
#include <limits>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "liempc/rng.hpp"
#include "oracles.hpp"

namespace liempc {
namespace {

const double kInf = std::numeric_limits<double>::infinity();

QuadraticProgram Scalar(double p, double q, double lo, double hi) {
  QuadraticProgram qp;
  qp.hessian = Eigen::MatrixXd::Constant(1, 1, p);
  qp.gradient = Eigen::VectorXd::Constant(1, q);
  qp.constraint_matrix = Eigen::MatrixXd::Identity(1, 1);
  qp.lower = Eigen::VectorXd::Constant(1, lo);
  qp.upper = Eigen::VectorXd::Constant(1, hi);
  return qp;
}

QuadraticProgram RandomBoxQp(CounterRng& rng, int n) {
  Eigen::MatrixXd l(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) l(i, j) = rng.normal();
  }
  QuadraticProgram qp;
  qp.hessian = l * l.transpose() / n + 0.1 * Eigen::MatrixXd::Identity(n, n);
  qp.gradient.resize(n);
  for (int i = 0; i < n; ++i) qp.gradient(i) = 2.0 * rng.normal();
  qp.constraint_matrix = Eigen::MatrixXd::Identity(n, n);
  qp.lower = Eigen::VectorXd::Constant(n, -1.0);
  qp.upper = Eigen::VectorXd::Constant(n, 1.0);
  return qp;
}

std::vector<std::filesystem::path> CorpusFiles() {
  std::vector<std::filesystem::path> files;
  const std::filesystem::path dir = std::filesystem::path(LIEMPC_TEST_DATA_DIR) / "qp_corpus";
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".qp") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

TEST(QpSolverTest, UnconstrainedScalar) {
  QpSolver solver;
  const QpSolution s = solver.solve(Scalar(1.0, -1.0, -kInf, kInf));
  ASSERT_EQ(s.status, QpStatus::kSolved);
  EXPECT_NEAR(s.primal(0), 1.0, 1e-8);
}

TEST(QpSolverTest, ActiveLowerBound) {
  QpSolver solver;
  const QpSolution s = solver.solve(Scalar(1.0, 0.0, 2.0, kInf));
  ASSERT_EQ(s.status, QpStatus::kSolved);
  EXPECT_NEAR(s.primal(0), 2.0, 1e-8);
  EXPECT_LT(s.dual(0), 0.0);  // active lower bound
}

TEST(QpSolverTest, DetectsPrimalInfeasibility) {
  QuadraticProgram qp;
  qp.hessian = Eigen::MatrixXd::Identity(1, 1);
  qp.gradient = Eigen::VectorXd::Zero(1);
  qp.constraint_matrix = Eigen::MatrixXd::Ones(2, 1);
  qp.lower = Eigen::Vector2d(1.0, -kInf);
  qp.upper = Eigen::Vector2d(kInf, 0.0);
  QpSolver solver;
  EXPECT_EQ(solver.solve(qp).status, QpStatus::kPrimalInfeasible);
}

TEST(QpSolverTest, ValidateRejectsBadShapes) {
  QuadraticProgram qp = Scalar(1.0, 0.0, 1.0, 0.0);
  EXPECT_THROW(qp.validate(), std::invalid_argument);
}

TEST(QpSolverTest, MatchesProjectedGradientOracle) {
  CounterRng rng(31, 0);
  QpSolver solver;
  for (int trial = 0; trial < 20; ++trial) {
    const QuadraticProgram qp = RandomBoxQp(rng, 20);
    const QpSolution s = solver.solve(qp);
    ASSERT_EQ(s.status, QpStatus::kSolved);
    const Eigen::VectorXd x = oracle::projected_gradient_box(qp.hessian, qp.gradient, qp.lower, qp.upper);
    EXPECT_LT((s.primal - x).cwiseAbs().maxCoeff(), 1e-5) << "trial " << trial;
  }
}

TEST(QpSolverTest, BitwiseDeterministic) {
  CounterRng rng(32, 0);
  const QuadraticProgram qp = RandomBoxQp(rng, 30);
  QpSolver a, b;
  const QpSolution sa = a.solve(qp);
  const QpSolution sb = b.solve(qp);
  ASSERT_EQ(sa.primal.size(), sb.primal.size());
  EXPECT_EQ(std::memcmp(sa.primal.data(), sb.primal.data(), sizeof(double) * sa.primal.size()), 0);
  EXPECT_EQ(std::memcmp(sa.dual.data(), sb.dual.data(), sizeof(double) * sa.dual.size()), 0);
  EXPECT_EQ(sa.iterations, sb.iterations);
}

TEST(QpSolverTest, FactorizationCacheReusedForSameMatrices) {
  CounterRng rng(33, 0);
  QuadraticProgram qp = RandomBoxQp(rng, 10);
  QpSolver solver;
  solver.solve(qp);
  qp.gradient *= -1.0;
  solver.solve(qp);
  EXPECT_EQ(solver.factorizations(), 1);
  qp.hessian(0, 0) += 1.0;
  solver.solve(qp);
  EXPECT_EQ(solver.factorizations(), 2);
}

TEST(QpSolverTest, WarmStartFromSolutionConvergesImmediately) {
  CounterRng rng(34, 0);
  const QuadraticProgram qp = RandomBoxQp(rng, 20);
  QpSolver solver;
  const QpSolution cold = solver.solve(qp);
  const QpWarmStart warm{cold.primal, cold.dual};
  const QpSolution hot = solver.solve(qp, &warm);
  ASSERT_EQ(hot.status, QpStatus::kSolved);
  EXPECT_LE(hot.iterations, cold.iterations);
  EXPECT_LT((hot.primal - cold.primal).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(QpIoTest, TextRoundTripIsExact) {
  CounterRng rng(35, 0);
  QuadraticProgram qp = RandomBoxQp(rng, 6);
  qp.lower(2) = -kInf;
  qp.upper(4) = kInf;
  std::stringstream ss;
  write_qp(ss, qp);
  const QuadraticProgram back = read_qp(ss);
  EXPECT_EQ(back.hessian, qp.hessian);
  EXPECT_EQ(back.gradient, qp.gradient);
  EXPECT_EQ(back.constraint_matrix, qp.constraint_matrix);
  EXPECT_EQ(back.lower, qp.lower);
  EXPECT_EQ(back.upper, qp.upper);
}

TEST(QpCorpusTest, KktResidualsOnArchivedMpcProblems) {
  const auto files = CorpusFiles();
  ASSERT_GE(files.size(), 50u);
  QpSolver solver;
  for (const auto& path : files) {
    const QuadraticProgram qp = read_qp_file(path.string());
    const QpSolution s = solver.solve(qp);
    ASSERT_EQ(s.status, QpStatus::kSolved) << path;
    const KktResiduals r = kkt_residuals(qp, s.primal, s.dual);
    EXPECT_LE(r.stationarity, 1e-6) << path;
    EXPECT_LE(r.primal_feasibility, 1e-6) << path;
    EXPECT_LE(r.complementarity, 1e-6) << path;
    EXPECT_LE(r.dual_sign, 1e-6) << path;
  }
}

}  // namespace
}  // namespace liempc
