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

#include <filesystem>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "liempc/config_io.hpp"
#include "liempc/report.hpp"

namespace liempc {
namespace {

using nlohmann::json;

json MinimalScenario() {
  return json::parse(R"({
    "schema_version": 1,
    "name": "t",
    "trajectory": {"kind": "lawnmower", "duration": 100, "lawnmower_legs": 3},
    "wind_sweep": {"speeds": [0, 2], "direction_deg": 90},
    "controllers": ["pid", {"name": "fast", "kind": "mpc"}],
    "mpc": {"horizon": 12, "terminal": "dare", "input_weight": [0.01, 0.02]},
    "trials": 3,
    "seed": 77
  })");
}

TEST(ScenarioJsonTest, ParsesFields) {
  const Scenario s = scenario_from_json(MinimalScenario(), ".");
  EXPECT_EQ(s.name, "t");
  EXPECT_EQ(s.trajectory.kind, TrajectoryKind::kLawnmower);
  EXPECT_EQ(s.trajectory.lawnmower_legs, 3);
  ASSERT_EQ(s.disturbances.size(), 2u);
  EXPECT_EQ(s.disturbances[1].label, "2 m/s");
  EXPECT_NEAR(s.disturbances[1].spec.wind_velocity.y(), 2.0, 1e-15);
  EXPECT_NEAR(s.disturbances[1].spec.wind_velocity.x(), 0.0, 1e-15);
  ASSERT_EQ(s.controllers.size(), 2u);
  EXPECT_EQ(s.controllers[0].kind, ControllerKind::kPid);
  EXPECT_EQ(s.controllers[1].name, "fast");
  EXPECT_EQ(s.mpc.horizon, 12);
  EXPECT_EQ(s.mpc.input_weight, Vec2(0.01, 0.02));
  EXPECT_EQ(s.terminal_mode, TerminalWeightMode::kDare);
  EXPECT_EQ(s.trials, 3);
  EXPECT_EQ(s.seed, 77u);
}

TEST(ScenarioJsonTest, RejectsUnknownKeys) {
  json j = MinimalScenario();
  j["horizon"] = 30;
  EXPECT_THROW(scenario_from_json(j, "."), ConfigError);
  j = MinimalScenario();
  j["mpc"]["horizn"] = 30;
  EXPECT_THROW(scenario_from_json(j, "."), ConfigError);
}

TEST(ScenarioJsonTest, RequiresSupportedSchemaVersion) {
  json j = MinimalScenario();
  j.erase("schema_version");
  EXPECT_THROW(scenario_from_json(j, "."), ConfigError);
  j["schema_version"] = 2;
  EXPECT_THROW(scenario_from_json(j, "."), ConfigError);
}

TEST(ScenarioJsonTest, RejectsConflictingDisturbanceBlocks) {
  json j = MinimalScenario();
  j["disturbances"] = json::array({json{{"kind", "none"}}});
  EXPECT_THROW(scenario_from_json(j, "."), ConfigError);
}

TEST(ScenarioJsonTest, RejectsBadValues) {
  json j = MinimalScenario();
  j["mpc"]["terminal"] = "lqr";
  EXPECT_THROW(scenario_from_json(j, "."), ConfigError);
  j = MinimalScenario();
  j["controllers"] = {"mpc", "nmpc"};
  EXPECT_THROW(scenario_from_json(j, "."), ConfigError);
  j = MinimalScenario();
  j["trajectory"]["kind"] = "spiral";
  EXPECT_THROW(scenario_from_json(j, "."), ConfigError);
}

TEST(ScenarioJsonTest, ModelDefaultsToThePlant) {
  const Scenario s = scenario_from_json(MinimalScenario(), ".");
  EXPECT_EQ(s.model.mass, s.plant.mass);
  EXPECT_EQ(s.model.linear_damping, s.plant.linear_damping);
}

TEST(ScenarioJsonTest, VesselParamsRoundTrip) {
  const VesselParams p = load_vessel_params(LIEMPC_CONFIG_DIR "/vessel_nominal.json");
  const VesselParams q = vessel_params_from_json(vessel_params_to_json(p));
  EXPECT_EQ(p.mass, q.mass);
  EXPECT_EQ(p.inertia, q.inertia);
  EXPECT_EQ(p.added_mass, q.added_mass);
  EXPECT_EQ(p.linear_damping, q.linear_damping);
  EXPECT_EQ(p.quadratic_damping, q.quadratic_damping);
  EXPECT_EQ(p.thrust_max, q.thrust_max);
}

TEST(ScenarioJsonTest, ShippedScenariosLoad) {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(LIEMPC_CONFIG_DIR "/scenarios")) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(load_scenario(entry.path()).validate()) << entry.path();
    ++count;
  }
  EXPECT_GE(count, 3);
}

TEST(ReportTest, MeanAndPopulationStd) {
  const std::vector<double> two = {1.0, 2.0};
  const MeanStd m = mean_std(two);
  EXPECT_DOUBLE_EQ(m.mean, 1.5);
  EXPECT_DOUBLE_EQ(m.std, 0.5);
  const std::vector<double> one = {0.37};
  EXPECT_EQ(mean_std(one).std, 0.0);
  EXPECT_EQ(mean_std(one).mean, 0.37);
}

TEST(ReportTest, Median) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 3.0, 2.0}), 2.5);
}

RunRow Row(const std::string& c, const std::string& d, int trial, double rmse) {
  RunRow r;
  r.controller = c;
  r.disturbance = d;
  r.trial = trial;
  r.summary.rmse = rmse;
  r.summary.rmse_literal = std::sqrt(rmse);
  return r;
}

TEST(ReportTest, AggregateKeepsDeclarationOrder) {
  const std::vector<RunRow> rows = {Row("pid", "0 m/s", 0, 1.0), Row("pid", "0 m/s", 1, 2.0),
                                    Row("mpc", "0 m/s", 0, 0.5), Row("pid", "3 m/s", 0, 4.0),
                                    Row("mpc", "3 m/s", 0, 0.7)};
  const std::vector<CellStats> cells = aggregate(rows);
  ASSERT_EQ(cells.size(), 4u);
  EXPECT_EQ(cells[0].controller, "pid");
  EXPECT_EQ(cells[0].disturbance, "0 m/s");
  EXPECT_EQ(cells[0].trials, 2);
  EXPECT_DOUBLE_EQ(cells[0].rmse.mean, 1.5);
  EXPECT_DOUBLE_EQ(cells[0].rmse.std, 0.5);
  EXPECT_EQ(cells[1].disturbance, "3 m/s");
  EXPECT_EQ(cells[2].controller, "mpc");
  EXPECT_EQ(cells[3].rmse.std, 0.0);

  std::ostringstream table;
  write_summary_table(table, cells);
  const std::string text = table.str();
  EXPECT_LT(text.find("pid"), text.find("mpc"));
  EXPECT_NE(text.find("1.500 +/- 0.500"), std::string::npos);
}

TEST(ReportTest, RunsCsvRoundTrip) {
  std::vector<RunRow> rows = {Row("online-mpc", "1 m/s", 4, 0.0123456789012345)};
  rows[0].summary.saturation_fraction = 0.25;
  rows[0].summary.solver_faults = 2;
  rows[0].summary.aborted = true;
  std::stringstream ss;
  write_runs_csv(ss, rows);
  const std::vector<RunRow> back = read_runs_csv(ss);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].controller, "online-mpc");
  EXPECT_EQ(back[0].disturbance, "1 m/s");
  EXPECT_EQ(back[0].trial, 4);
  EXPECT_EQ(back[0].summary.rmse, rows[0].summary.rmse);
  EXPECT_EQ(back[0].summary.rmse_literal, rows[0].summary.rmse_literal);
  EXPECT_EQ(back[0].summary.saturation_fraction, 0.25);
  EXPECT_EQ(back[0].summary.solver_faults, 2);
  EXPECT_TRUE(back[0].summary.aborted);
}

TEST(ReportTest, RunsCsvRejectsMalformedInput) {
  std::stringstream no_header("pid,0,0,1,1,1,1,0,0,0\n");
  EXPECT_THROW(read_runs_csv(no_header), ConfigError);
  std::stringstream short_row(
      "controller,disturbance,trial,rmse,rmse_literal,mean_error,max_error,saturation_fraction,"
      "solver_faults,aborted\npid,0,0,1\n");
  EXPECT_THROW(read_runs_csv(short_row), ConfigError);
}

}  // namespace
}  // namespace liempc
