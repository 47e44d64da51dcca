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

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "liempc/qp_solver.hpp"

namespace liempc {

namespace {

void write_value(std::ostream& os, double v) {
  if (std::isinf(v)) {
    os << (v > 0 ? "inf" : "-inf");
  } else {
    os << std::setprecision(17) << v;
  }
}

void write_row(std::ostream& os, const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    if (j > 0) os << ' ';
    write_value(os, row(j));
  }
  os << '\n';
}

double read_value(std::istream& is) {
  std::string token;
  if (!(is >> token)) throw std::runtime_error("read_qp: unexpected end of input");
  if (token == "inf") return std::numeric_limits<double>::infinity();
  if (token == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(token);
}

void expect(std::istream& is, const std::string& keyword) {
  std::string token;
  if (!(is >> token) || token != keyword) {
    throw std::runtime_error("read_qp: expected '" + keyword + "'");
  }
}

}  // namespace

void write_qp(std::ostream& os, const QuadraticProgram& qp) {
  const int n = qp.num_variables();
  const int m = qp.num_constraints();
  os << "qp " << n << ' ' << m << '\n';
  os << "hessian\n";
  for (int i = 0; i < n; ++i) write_row(os, qp.hessian.row(i));
  os << "gradient\n";
  write_row(os, qp.gradient.transpose());
  os << "constraints\n";
  for (int i = 0; i < m; ++i) write_row(os, qp.constraint_matrix.row(i));
  os << "lower\n";
  write_row(os, qp.lower.transpose());
  os << "upper\n";
  write_row(os, qp.upper.transpose());
  os << "end\n";
}

QuadraticProgram read_qp(std::istream& is) {
  expect(is, "qp");
  int n = 0;
  int m = 0;
  if (!(is >> n >> m) || n < 0 || m < 0) throw std::runtime_error("read_qp: bad dimensions");
  QuadraticProgram qp;
  qp.hessian.resize(n, n);
  qp.gradient.resize(n);
  qp.constraint_matrix.resize(m, n);
  qp.lower.resize(m);
  qp.upper.resize(m);
  expect(is, "hessian");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) qp.hessian(i, j) = read_value(is);
  expect(is, "gradient");
  for (int i = 0; i < n; ++i) qp.gradient(i) = read_value(is);
  expect(is, "constraints");
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) qp.constraint_matrix(i, j) = read_value(is);
  expect(is, "lower");
  for (int i = 0; i < m; ++i) qp.lower(i) = read_value(is);
  expect(is, "upper");
  for (int i = 0; i < m; ++i) qp.upper(i) = read_value(is);
  expect(is, "end");
  return qp;
}

void write_qp_file(const std::string& path, const QuadraticProgram& qp) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_qp_file: cannot open " + path);
  write_qp(os, qp);
}

QuadraticProgram read_qp_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_qp_file: cannot open " + path);
  return read_qp(is);
}

}  // namespace liempc
