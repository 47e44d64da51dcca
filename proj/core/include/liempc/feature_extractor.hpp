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

#ifndef LIEMPC_FEATURE_EXTRACTOR_HPP_
#define LIEMPC_FEATURE_EXTRACTOR_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "liempc/feature_map.hpp"
#include "liempc/types.hpp"

namespace liempc {

struct ResidualDataset {
  std::vector<Vec13> inputs;
  std::vector<Vec12> residuals;
  std::string scenario;
  std::uint64_t seed = 0;

  int size() const { return static_cast<int>(inputs.size()); }
  void add(const Vec13& z, const Vec12& h) {
    inputs.push_back(z);
    residuals.push_back(h);
  }
  void append(const ResidualDataset& other);
  void validate() const;
};

// CSV: `# scenario=<name> seed=<u64>` comment line, a header
// z1..z13,h1..h12, then one record per row.
void write_dataset(std::ostream& os, const ResidualDataset& data);
ResidualDataset read_dataset(std::istream& is);
void write_dataset_file(const std::string& path, const ResidualDataset& data);
ResidualDataset read_dataset_file(const std::string& path);

enum class DataLoss { kL1, kL2 };

struct ExtractorConfig {
  int num_frequencies = 32;          // M per input variable
  double min_frequency = 0.01;
  double max_frequency = 10.0;
  int inner_steps = 2;               // sweeps per inner solve
  int epochs = 10;
  double learning_rate = 2e-6;       // amplitude step
  double frequency_learning_rate = 1e-7;
  double regularization = 1e-4;      // lambda on ||A||_1
  int selection_count = 30;
  DataLoss loss = DataLoss::kL1;
  std::uint64_t seed = 0;
  bool shuffle = true;
  int max_pca_rows = 4000;

  void validate() const;
};

// Raw bank: for variable i and grid index j, entries 2 (i M + j) (sin) and
// 2 (i M + j) + 1 (cos) share frequency F(i, j).
class RawFeatureBank {
 public:
  RawFeatureBank(Eigen::MatrixXd frequencies);  // kInputDim x M

  static RawFeatureBank LogGrid(int m, double f_min, double f_max);

  int num_frequencies() const { return static_cast<int>(frequencies_.cols()); }
  int size() const { return 2 * kInputDim * num_frequencies(); }
  const Eigen::MatrixXd& frequencies() const { return frequencies_; }
  Eigen::MatrixXd& frequencies() { return frequencies_; }

  Feature feature(int k) const;
  void evaluate(const Vec13& z, Eigen::Ref<Eigen::VectorXd> out) const;
  Eigen::VectorXd evaluate(const Vec13& z) const;

  // d phi / d F(i, j) for raw feature k is nonzero only for the pair sharing
  // (i, j): z_i cos(F z_i) for sin, -z_i sin(F z_i) for cos.
  FeatureMap as_map() const;

 private:
  Eigen::MatrixXd frequencies_;
};

// Dataset objective (1/T) sum loss(A^T phi - h) + lambda ||A||_1.
double extractor_objective(const ResidualDataset& data, const RawFeatureBank& bank,
                           const Eigen::MatrixXd& amplitudes, DataLoss loss, double lambda);
double data_loss(const ResidualDataset& data, const RawFeatureBank& bank,
                 const Eigen::MatrixXd& amplitudes, DataLoss loss);

// Gradient of the dataset data loss (without penalty) w.r.t. the frequency
// matrix; the L1 subgradient uses sign(0) = 0.
Eigen::MatrixXd frequency_gradient(const ResidualDataset& data, const RawFeatureBank& bank,
                                   const Eigen::MatrixXd& amplitudes, DataLoss loss);

// Runs config.inner_steps per-sample sweeps on the amplitudes with frozen
// frequencies. The penalty step is truncated at zero.
Eigen::MatrixXd inner_amplitude_fit(const ResidualDataset& data, const RawFeatureBank& bank,
                                    const Eigen::MatrixXd& amplitudes, const ExtractorConfig& config,
                                    std::uint64_t sweep_seed);

// One per-sample sweep on the frequencies with frozen amplitudes.
RawFeatureBank outer_frequency_step(const ResidualDataset& data, const RawFeatureBank& bank,
                                    const Eigen::MatrixXd& amplitudes, const ExtractorConfig& config,
                                    std::uint64_t sweep_seed);

struct BilevelResult {
  RawFeatureBank bank;
  Eigen::MatrixXd amplitudes;           // raw bank size x 12
  std::vector<double> loss_history;     // objective at epoch 0..N
};

BilevelResult run_bilevel(const ResidualDataset& data, const ExtractorConfig& config);
BilevelResult run_bilevel(const ResidualDataset& data, const ExtractorConfig& config,
                          const RawFeatureBank& initial_bank);

struct SelectionResult {
  FeatureMap map;                       // selected raw features, in raw order
  std::vector<int> selected;            // raw indices, ascending
  std::vector<int> ranking;             // raw indices by descending score
  Eigen::VectorXd scores;
  int components = 0;                   // principal components retained
  bool rank_deficient = false;
};

// PCA of the amplitude-weighted feature matrix: columns phi_k ||A_k||.
// Feature k scores sum_c lambda_c v_kc^2 over the leading components that
// reach 95 % of the energy.
SelectionResult select_features(const ResidualDataset& data, const BilevelResult& fit, int count,
                                 int max_rows = 4000);

// Least-squares amplitudes on a fixed feature map (ridge 1e-9).
Eigen::MatrixXd fit_amplitudes_least_squares(const ResidualDataset& data, const FeatureMap& map);

// Mean squared residual of A^T phi - h over the dataset.
double mean_squared_error(const ResidualDataset& data, const FeatureMap& map,
                          const Eigen::MatrixXd& amplitudes);

}  // namespace liempc

#endif  // LIEMPC_FEATURE_EXTRACTOR_HPP_
