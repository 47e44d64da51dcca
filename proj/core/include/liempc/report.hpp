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

#ifndef LIEMPC_REPORT_HPP_
#define LIEMPC_REPORT_HPP_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "liempc/harness.hpp"

namespace liempc {

struct RunRow {
  std::string controller;
  std::string disturbance;
  int trial = 0;
  RunSummary summary;
};

std::vector<RunRow> run_rows(const ExperimentResult& result);

// runs.csv: one row per trial, in experiment order.
void write_runs_csv(std::ostream& os, const std::vector<RunRow>& rows);
std::vector<RunRow> read_runs_csv(std::istream& is);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population
};

MeanStd mean_std(std::span<const double> values);
double median(std::vector<double> values);

struct CellStats {
  std::string controller;
  std::string disturbance;
  int trials = 0;
  MeanStd rmse;
  MeanStd rmse_literal;
  int aborted = 0;
};

// Cells in first-appearance order of controllers, then disturbances.
std::vector<CellStats> aggregate(const std::vector<RunRow>& rows);

void write_summary_csv(std::ostream& os, const std::vector<CellStats>& cells);

// Aligned table, controllers as rows and disturbance levels as columns,
// entries "mean +/- std" of the standard RMSE.
void write_summary_table(std::ostream& os, const std::vector<CellStats>& cells);

// timing.csv: per-run median / p95 / max controller cycle time in ms.
void write_timing_csv(std::ostream& os, const ExperimentResult& result);

}  // namespace liempc

#endif  // LIEMPC_REPORT_HPP_
