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

// liempc command-line tool: run, collect, extract, tune, report.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "liempc/config_io.hpp"
#include "liempc/feature_extractor.hpp"
#include "liempc/harness.hpp"
#include "liempc/report.hpp"
#include "liempc/tuning.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out = "results";
  int jobs = 1;
};

void add_common(CLI::App* app, CommonFlags* f, bool need_scenario) {
  auto* s = app->add_option("--scenario", f->scenario, "Scenario file (JSON, schema_version 1)");
  if (need_scenario) s->required()->check(CLI::ExistingFile);
  app->add_option("--seed", f->seed, "Override the scenario seed");
  app->add_option("--trials", f->trials, "Override the trial (or collection round) count")
      ->check(CLI::PositiveNumber);
  app->add_option("--out", f->out, "Output directory")->capture_default_str();
  app->add_option("--jobs", f->jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
}

liempc::Scenario load(const CommonFlags& f) {
  liempc::Scenario s = liempc::load_scenario(f.scenario);
  if (f.seed) s.seed = *f.seed;
  if (f.trials) {
    s.trials = *f.trials;
    s.collect_rounds = *f.trials;
  }
  s.validate();
  return s;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw liempc::Error("cannot write '" + path.string() + "'");
  return os;
}

std::string file_safe(std::string s) {
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.') c = '_';
  }
  return s;
}

void write_tables(const fs::path& out, const std::vector<liempc::RunRow>& rows) {
  const auto cells = liempc::aggregate(rows);
  auto csv = open_out(out / "summary.csv");
  liempc::write_summary_csv(csv, cells);
  auto txt = open_out(out / "summary.txt");
  liempc::write_summary_table(txt, cells);
  liempc::write_summary_table(std::cout, cells);
}

int cmd_run(const CommonFlags& f, bool trajectories) {
  const liempc::Scenario s = load(f);
  fs::create_directories(f.out);
  fs::copy_file(f.scenario, fs::path(f.out) / "scenario.json", fs::copy_options::overwrite_existing);
  const liempc::ExperimentResult result = liempc::run_experiment(s, f.jobs, trajectories);
  const auto rows = liempc::run_rows(result);
  {
    auto os = open_out(fs::path(f.out) / "runs.csv");
    liempc::write_runs_csv(os, rows);
  }
  {
    auto os = open_out(fs::path(f.out) / "timing.csv");
    liempc::write_timing_csv(os, result);
  }
  if (trajectories) {
    const fs::path dir = fs::path(f.out) / "trajectories";
    fs::create_directories(dir);
    for (const liempc::RunResult& r : result.runs) {
      auto os = open_out(dir / (file_safe(r.controller) + "__" + file_safe(r.disturbance) + "__trial" +
                                std::to_string(r.trial) + ".csv"));
      liempc::write_run_log(os, r);
    }
  }
  int aborted = 0;
  for (const auto& row : rows) aborted += row.summary.aborted;
  if (aborted > 0) std::cerr << aborted << " run(s) aborted on persistent solver faults\n";
  write_tables(f.out, rows);
  return 0;
}

int cmd_collect(const CommonFlags& f) {
  const liempc::Scenario s = load(f);
  fs::create_directories(f.out);
  const liempc::ResidualDataset data = liempc::collect_dataset(s, f.jobs);
  liempc::write_dataset_file((fs::path(f.out) / "dataset.csv").string(), data);
  std::cout << "wrote " << data.size() << " records to " << (fs::path(f.out) / "dataset.csv").string()
            << "\n";
  return 0;
}

int cmd_extract(const CommonFlags& f, const std::string& dataset_path, liempc::ExtractorConfig config) {
  if (f.seed) config.seed = *f.seed;
  config.validate();
  const liempc::ResidualDataset data = liempc::read_dataset_file(dataset_path);
  fs::create_directories(f.out);
  const liempc::BilevelResult fit = liempc::run_bilevel(data, config);
  const liempc::SelectionResult sel =
      liempc::select_features(data, fit, config.selection_count, config.max_pca_rows);
  if (sel.rank_deficient) {
    std::cerr << "warning: RankDeficient: fewer than " << config.selection_count
              << " features carry non-negligible variance\n";
  }
  liempc::write_feature_map_file((fs::path(f.out) / "features.txt").string(), sel.map);
  auto loss = open_out(fs::path(f.out) / "extract_loss.csv");
  loss << "epoch,objective\n" << std::setprecision(10);
  for (std::size_t e = 0; e < fit.loss_history.size(); ++e) loss << e << "," << fit.loss_history[e] << "\n";
  auto rank = open_out(fs::path(f.out) / "ranking.csv");
  rank << "rank,raw_index,variable,trig,frequency,score\n" << std::setprecision(10);
  for (std::size_t r = 0; r < sel.ranking.size(); ++r) {
    const int k = sel.ranking[r];
    const liempc::Feature feat = fit.bank.feature(k);
    rank << r << "," << k << "," << feat.variable + 1 << "," << liempc::to_string(feat.trig) << ","
         << feat.frequency << "," << sel.scores[k] << "\n";
  }
  std::cout << "objective " << fit.loss_history.front() << " -> " << fit.loss_history.back() << ", "
            << sel.components << " principal components, " << sel.map.size() << " features written to "
            << (fs::path(f.out) / "features.txt").string() << "\n";
  return 0;
}

int cmd_tune(const CommonFlags& f) {
  const liempc::Scenario s = load(f);
  liempc::MpcConfig config = s.mpc;
  config.dt = s.control_dt();
  const liempc::PlanarTuning t =
      liempc::tune_straight_line(liempc::VesselModel(s.model), config, s.tuning_surge_speed);
  fs::create_directories(f.out);
  nlohmann::json j;
  auto matrix = [](const Eigen::MatrixXd& m) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      a.push_back(row);
    }
    return a;
  };
  j["state_indices"] = liempc::kPlanarIndices;
  j["surge_speed"] = s.tuning_surge_speed;
  j["p"] = matrix(t.dare.p);
  j["k"] = matrix(t.dare.k);
  nlohmann::json eig = nlohmann::json::array();
  for (Eigen::Index i = 0; i < t.dare.closed_loop_eigenvalues.size(); ++i) {
    eig.push_back({t.dare.closed_loop_eigenvalues[i].real(), t.dare.closed_loop_eigenvalues[i].imag()});
  }
  j["closed_loop_eigenvalues"] = eig;
  j["spectral_radius"] = t.dare.spectral_radius;
  j["riccati_residual"] = t.dare.residual;
  j["iterations"] = t.dare.iterations;
  j["advisory"] = {{"complex_pair", t.dare.has_complex_pair},
                   {"real_part_near_unity", t.dare.near_unit_real_part}};
  auto os = open_out(fs::path(f.out) / "tuning.json");
  os << j.dump(2) << "\n";
  std::cout << "spectral radius of A - BK: " << t.dare.spectral_radius << " (Riccati residual "
            << t.dare.residual << ")\n";
  if (t.dare.has_complex_pair) std::cout << "advisory: closed loop has complex-conjugate poles\n";
  if (t.dare.near_unit_real_part) std::cout << "advisory: a closed-loop pole has real part > 0.95\n";
  return 0;
}

int cmd_report(const CommonFlags& f) {
  std::ifstream is(fs::path(f.out) / "runs.csv");
  if (!is) throw liempc::ConfigError("no runs.csv in '" + f.out + "'");
  write_tables(f.out, liempc::read_runs_csv(is));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Error-state Lie-group MPC with online residual learning"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  bool no_trajectories = false;
  auto* run = app.add_subcommand("run", "Run every (controller, disturbance, trial) cell of a scenario");
  add_common(run, &run_flags, true);
  run->add_flag("--no-trajectories", no_trajectories, "Skip per-run trajectory CSVs");

  CommonFlags collect_flags;
  auto* collect = app.add_subcommand("collect", "Log (Z, residual) pairs under the nominal MPC");
  add_common(collect, &collect_flags, true);

  CommonFlags extract_flags;
  std::string dataset;
  std::string loss = "l1";
  liempc::ExtractorConfig ext;
  auto* extract = app.add_subcommand("extract", "Bi-level frequency extraction and feature selection");
  add_common(extract, &extract_flags, false);
  extract->add_option("--dataset", dataset, "Dataset CSV from 'collect'")->required()->check(CLI::ExistingFile);
  extract->add_option("--count", ext.selection_count, "Features to keep")->capture_default_str();
  extract->add_option("--epochs", ext.epochs, "Outer epochs")->capture_default_str();
  extract->add_option("--inner-steps", ext.inner_steps, "Amplitude sweeps per epoch")->capture_default_str();
  extract->add_option("--frequencies", ext.num_frequencies, "Initial frequencies per variable")
      ->capture_default_str();
  extract->add_option("--learning-rate", ext.learning_rate, "Amplitude step size")->capture_default_str();
  extract->add_option("--frequency-learning-rate", ext.frequency_learning_rate, "Frequency step size")
      ->capture_default_str();
  extract->add_option("--lambda", ext.regularization, "L1 amplitude penalty")->capture_default_str();
  extract->add_option("--loss", loss, "Data loss")->check(CLI::IsMember({"l1", "l2"}))->capture_default_str();
  extract->add_option("--max-pca-rows", ext.max_pca_rows, "Rows kept for PCA")->capture_default_str();

  CommonFlags tune_flags;
  auto* tune = app.add_subcommand("tune", "DARE terminal weight at a straight-line operating point");
  add_common(tune, &tune_flags, true);

  CommonFlags report_flags;
  auto* report = app.add_subcommand("report", "Aggregate runs.csv in --out into summary tables");
  add_common(report, &report_flags, false);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(run_flags, !no_trajectories);
    if (*collect) return cmd_collect(collect_flags);
    if (*extract) {
      ext.loss = loss == "l2" ? liempc::DataLoss::kL2 : liempc::DataLoss::kL1;
      return cmd_extract(extract_flags, dataset, ext);
    }
    if (*tune) return cmd_tune(tune_flags);
    if (*report) return cmd_report(report_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
