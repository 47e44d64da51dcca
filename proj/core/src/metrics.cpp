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

#include <algorithm>
#include <cmath>

#include "liempc/harness.hpp"

namespace liempc {

PlanarRmse compute_rmse(const std::vector<StepLog>& log, std::size_t first) {
  if (log.empty()) throw std::invalid_argument("compute_rmse: empty log");
  if (first >= log.size()) throw std::invalid_argument("compute_rmse: empty segment");
  double sum_sq = 0.0;
  double sum = 0.0;
  for (std::size_t k = first; k < log.size(); ++k) {
    const double e = (log[k].actual.head<2>() - log[k].reference.head<2>()).norm();
    sum_sq += e * e;
    sum += e;
  }
  const double n = static_cast<double>(log.size() - first);
  return {std::sqrt(sum_sq / n), std::sqrt(sum / n)};
}

PlanarRmse compute_rmse(const std::vector<StepLog>& log) { return compute_rmse(log, log.size() / 2); }

RunSummary summarize(const std::vector<StepLog>& log, double thrust_min, double thrust_max) {
  RunSummary s;
  if (log.empty()) return s;
  const PlanarRmse r = compute_rmse(log);
  s.rmse = r.standard;
  s.rmse_literal = r.literal;
  const std::size_t first = log.size() / 2;
  int saturated = 0;
  for (std::size_t k = first; k < log.size(); ++k) {
    const double e = (log[k].actual.head<2>() - log[k].reference.head<2>()).norm();
    s.mean_error += e;
    s.max_error = std::max(s.max_error, e);
  }
  s.mean_error /= static_cast<double>(log.size() - first);
  for (const StepLog& l : log) {
    const bool sat = (l.thrusts.array() <= thrust_min + 1e-6).any() ||
                     (l.thrusts.array() >= thrust_max - 1e-6).any();
    saturated += sat;
    s.solver_faults += l.solver_fault;
  }
  s.saturation_fraction = static_cast<double>(saturated) / log.size();
  return s;
}

}  // namespace liempc
