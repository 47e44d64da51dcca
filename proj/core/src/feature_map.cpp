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

#include "liempc/feature_map.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace liempc {

Vec13 learner_input(const Pose& pose, const Twist& twist, double time) {
  Vec13 z;
  z << log_se3_unchecked(pose), twist, time;
  return z;
}

std::string to_string(Trig trig) { return trig == Trig::kSin ? "sin" : "cos"; }

Trig trig_from_string(const std::string& name) {
  if (name == "sin") return Trig::kSin;
  if (name == "cos") return Trig::kCos;
  throw ConfigError("unknown trig function '" + name + "'");
}

double Feature::evaluate(const Vec13& z) const {
  const double arg = frequency * z[variable];
  return trig == Trig::kSin ? std::sin(arg) : std::cos(arg);
}

FeatureMap::FeatureMap(std::vector<Feature> features) : features_(std::move(features)) {
  if (features_.empty()) throw ConfigError("feature map must hold at least one feature");
  for (const Feature& f : features_) {
    if (f.variable < 0 || f.variable >= kInputDim) {
      throw ConfigError("feature variable index out of range");
    }
    if (!std::isfinite(f.frequency)) throw ConfigError("feature frequency must be finite");
  }
}

Eigen::VectorXd FeatureMap::evaluate(const Vec13& z) const {
  Eigen::VectorXd out(size());
  evaluate(z, out);
  return out;
}

void FeatureMap::evaluate(const Vec13& z, Eigen::Ref<Eigen::VectorXd> out) const {
  for (int k = 0; k < size(); ++k) out[k] = features_[k].evaluate(z);
}

void write_feature_map(std::ostream& os, const FeatureMap& map) {
  os << "# liempc feature map v1\n";
  os << "# index, variable (1-based), trig, frequency\n";
  os << std::setprecision(17);
  for (int k = 0; k < map.size(); ++k) {
    const Feature& f = map[k];
    os << k << ", " << f.variable + 1 << ", " << to_string(f.trig) << ", " << f.frequency << "\n";
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

FeatureMap read_feature_map(std::istream& is) {
  std::vector<Feature> features;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (fields.size() != 4) {
      throw ConfigError("feature map line " + std::to_string(line_no) + ": expected 4 fields");
    }
    Feature f;
    try {
      f.variable = std::stoi(fields[1]) - 1;
      f.frequency = std::stod(fields[3]);
    } catch (const std::exception&) {
      throw ConfigError("feature map line " + std::to_string(line_no) + ": bad number");
    }
    f.trig = trig_from_string(fields[2]);
    if (std::stoi(fields[0]) != static_cast<int>(features.size())) {
      throw ConfigError("feature map line " + std::to_string(line_no) + ": indices must be 0, 1, ...");
    }
    features.push_back(f);
  }
  return FeatureMap(std::move(features));
}

void write_feature_map_file(const std::string& path, const FeatureMap& map) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_feature_map(os, map);
}

FeatureMap read_feature_map_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open feature map '" + path + "'");
  return read_feature_map(is);
}

}  // namespace liempc
