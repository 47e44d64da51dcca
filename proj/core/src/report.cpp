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

#include "liempc/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace liempc {

std::vector<RunRow> run_rows(const ExperimentResult& result) {
  std::vector<RunRow> rows;
  rows.reserve(result.runs.size());
  for (const RunResult& r : result.runs) rows.push_back({r.controller, r.disturbance, r.trial, r.summary});
  return rows;
}

void write_runs_csv(std::ostream& os, const std::vector<RunRow>& rows) {
  os << "controller,disturbance,trial,rmse,rmse_literal,mean_error,max_error,saturation_fraction,"
        "solver_faults,aborted\n";
  os << std::setprecision(17);
  for (const RunRow& r : rows) {
    const RunSummary& s = r.summary;
    os << r.controller << "," << r.disturbance << "," << r.trial << "," << s.rmse << "," << s.rmse_literal
       << "," << s.mean_error << "," << s.max_error << "," << s.saturation_fraction << ","
       << s.solver_faults << "," << (s.aborted ? 1 : 0) << "\n";
  }
}

std::vector<RunRow> read_runs_csv(std::istream& is) {
  std::vector<RunRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      if (line.rfind("controller,", 0) != 0) throw ConfigError("runs.csv: missing header");
      header = false;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 10) throw ConfigError("runs.csv: expected 10 columns in '" + line + "'");
    RunRow r;
    r.controller = f[0];
    r.disturbance = f[1];
    try {
      r.trial = std::stoi(f[2]);
      r.summary.rmse = std::stod(f[3]);
      r.summary.rmse_literal = std::stod(f[4]);
      r.summary.mean_error = std::stod(f[5]);
      r.summary.max_error = std::stod(f[6]);
      r.summary.saturation_fraction = std::stod(f[7]);
      r.summary.solver_faults = std::stoi(f[8]);
      r.summary.aborted = std::stoi(f[9]) != 0;
    } catch (const std::exception&) {
      throw ConfigError("runs.csv: bad number in '" + line + "'");
    }
    rows.push_back(r);
  }
  return rows;
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd m;
  if (values.empty()) return m;
  for (double v : values) m.mean += v;
  m.mean /= values.size();
  double var = 0.0;
  for (double v : values) var += (v - m.mean) * (v - m.mean);
  m.std = std::sqrt(var / values.size());
  return m;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  return 0.5 * (upper + *std::max_element(values.begin(), values.begin() + mid));
}

namespace {

template <typename T>
int index_of(std::vector<T>& order, const T& value) {
  auto it = std::find(order.begin(), order.end(), value);
  if (it != order.end()) return static_cast<int>(it - order.begin());
  order.push_back(value);
  return static_cast<int>(order.size()) - 1;
}

}  // namespace

std::vector<CellStats> aggregate(const std::vector<RunRow>& rows) {
  std::vector<std::string> controllers;
  std::vector<std::string> levels;
  for (const RunRow& r : rows) {
    index_of(controllers, r.controller);
    index_of(levels, r.disturbance);
  }
  std::vector<CellStats> cells;
  for (const std::string& c : controllers) {
    for (const std::string& d : levels) {
      std::vector<double> rmse;
      std::vector<double> literal;
      CellStats cell;
      cell.controller = c;
      cell.disturbance = d;
      for (const RunRow& r : rows) {
        if (r.controller != c || r.disturbance != d) continue;
        rmse.push_back(r.summary.rmse);
        literal.push_back(r.summary.rmse_literal);
        cell.aborted += r.summary.aborted;
      }
      if (rmse.empty()) continue;
      cell.trials = static_cast<int>(rmse.size());
      cell.rmse = mean_std(rmse);
      cell.rmse_literal = mean_std(literal);
      cells.push_back(cell);
    }
  }
  return cells;
}

void write_summary_csv(std::ostream& os, const std::vector<CellStats>& cells) {
  os << "controller,disturbance,trials,rmse_mean,rmse_std,rmse_literal_mean,rmse_literal_std,aborted\n";
  os << std::setprecision(10);
  for (const CellStats& c : cells) {
    os << c.controller << "," << c.disturbance << "," << c.trials << "," << c.rmse.mean << ","
       << c.rmse.std << "," << c.rmse_literal.mean << "," << c.rmse_literal.std << "," << c.aborted
       << "\n";
  }
}

void write_summary_table(std::ostream& os, const std::vector<CellStats>& cells) {
  std::vector<std::string> controllers;
  std::vector<std::string> levels;
  for (const CellStats& c : cells) {
    index_of(controllers, c.controller);
    index_of(levels, c.disturbance);
  }
  std::vector<std::vector<std::string>> grid(controllers.size() + 1,
                                             std::vector<std::string>(levels.size() + 1));
  grid[0][0] = "controller";
  for (std::size_t j = 0; j < levels.size(); ++j) grid[0][j + 1] = levels[j];
  for (std::size_t i = 0; i < controllers.size(); ++i) grid[i + 1][0] = controllers[i];
  for (const CellStats& c : cells) {
    const int i = index_of(controllers, c.controller) + 1;
    const int j = index_of(levels, c.disturbance) + 1;
    std::ostringstream entry;
    entry << std::fixed << std::setprecision(3) << c.rmse.mean << " +/- " << c.rmse.std;
    if (c.aborted > 0) entry << " (" << c.aborted << " aborted)";
    grid[i][j] = entry.str();
  }
  std::vector<std::size_t> width(levels.size() + 1, 0);
  for (const auto& row : grid) {
    for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid[i].size(); ++j) {
      os << (j == 0 ? std::left : std::right) << std::setw(static_cast<int>(width[j])) << grid[i][j];
      os << (j + 1 < grid[i].size() ? "  " : "\n");
    }
    if (i == 0) {
      std::size_t total = 0;
      for (std::size_t w : width) total += w + 2;
      os << std::string(total - 2, '-') << "\n";
    }
  }
  os << "RMSE (m) over the second half of each run: sqrt(mean squared planar error).\n"
        "summary.csv also lists sqrt(mean planar error) as rmse_literal.\n";
}

void write_timing_csv(std::ostream& os, const ExperimentResult& result) {
  os << "controller,disturbance,trial,median_ms,p95_ms,max_ms\n" << std::setprecision(6);
  for (const RunResult& r : result.runs) {
    std::vector<double> t = r.compute_ms;
    if (t.empty()) continue;
    std::sort(t.begin(), t.end());
    const double p95 = t[std::min(t.size() - 1, static_cast<std::size_t>(0.95 * t.size()))];
    os << r.controller << "," << r.disturbance << "," << r.trial << "," << median(t) << "," << p95 << ","
       << t.back() << "\n";
  }
}

}  // namespace liempc
