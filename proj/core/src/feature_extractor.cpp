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

#include "liempc/feature_extractor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "liempc/rng.hpp"

namespace liempc {

void ResidualDataset::append(const ResidualDataset& other) {
  inputs.insert(inputs.end(), other.inputs.begin(), other.inputs.end());
  residuals.insert(residuals.end(), other.residuals.begin(), other.residuals.end());
}

void ResidualDataset::validate() const {
  if (inputs.size() != residuals.size()) throw ConfigError("dataset: column count mismatch");
  if (inputs.empty()) throw ConfigError("dataset: no records");
  for (int t = 0; t < size(); ++t) {
    if (!inputs[t].allFinite() || !residuals[t].allFinite()) {
      throw ConfigError("dataset: non-finite entry in record " + std::to_string(t));
    }
  }
}

void write_dataset(std::ostream& os, const ResidualDataset& data) {
  os << "# scenario=" << (data.scenario.empty() ? "unknown" : data.scenario) << " seed=" << data.seed
     << "\n";
  for (int i = 1; i <= kInputDim; ++i) os << "z" << i << ",";
  for (int i = 1; i <= 12; ++i) os << "h" << i << (i < 12 ? "," : "\n");
  os << std::setprecision(17);
  for (int t = 0; t < data.size(); ++t) {
    for (int i = 0; i < kInputDim; ++i) os << data.inputs[t][i] << ",";
    for (int i = 0; i < 12; ++i) os << data.residuals[t][i] << (i < 11 ? "," : "\n");
  }
}

ResidualDataset read_dataset(std::istream& is) {
  ResidualDataset data;
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string token;
      while (meta >> token) {
        if (token.rfind("scenario=", 0) == 0) data.scenario = token.substr(9);
        if (token.rfind("seed=", 0) == 0) data.seed = std::stoull(token.substr(5));
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("z1,", 0) != 0) throw ConfigError("dataset: missing z1..z13,h1..h12 header");
      continue;
    }
    std::istringstream ss(line);
    std::string field;
    std::vector<double> v;
    v.reserve(25);
    while (std::getline(ss, field, ',')) {
      try {
        v.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw ConfigError("dataset line " + std::to_string(line_no) + ": bad number");
      }
    }
    if (v.size() != 25) throw ConfigError("dataset line " + std::to_string(line_no) + ": expected 25 columns");
    data.add(Eigen::Map<const Vec13>(v.data()), Eigen::Map<const Vec12>(v.data() + 13));
  }
  return data;
}

void write_dataset_file(const std::string& path, const ResidualDataset& data) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_dataset(os, data);
}

ResidualDataset read_dataset_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open dataset '" + path + "'");
  return read_dataset(is);
}

void ExtractorConfig::validate() const {
  if (num_frequencies < 1) throw ConfigError("extractor: num_frequencies must be >= 1");
  if (!(min_frequency > 0.0) || !(max_frequency >= min_frequency)) {
    throw ConfigError("extractor: need 0 < min_frequency <= max_frequency");
  }
  if (inner_steps < 1 || epochs < 0) throw ConfigError("extractor: inner_steps >= 1, epochs >= 0");
  if (!(learning_rate > 0.0) || !(frequency_learning_rate >= 0.0)) {
    throw ConfigError("extractor: learning rates must be positive");
  }
  if (!(regularization >= 0.0)) throw ConfigError("extractor: regularization must be >= 0");
  if (selection_count < 1 || selection_count > 2 * kInputDim * num_frequencies) {
    throw ConfigError("extractor: selection_count must be in [1, raw feature count]");
  }
  if (max_pca_rows < 1) throw ConfigError("extractor: max_pca_rows must be >= 1");
}

RawFeatureBank::RawFeatureBank(Eigen::MatrixXd frequencies) : frequencies_(std::move(frequencies)) {
  if (frequencies_.rows() != kInputDim || frequencies_.cols() < 1) {
    throw ConfigError("raw feature bank: frequency matrix must be 13 x M");
  }
}

RawFeatureBank RawFeatureBank::LogGrid(int m, double f_min, double f_max) {
  Eigen::MatrixXd f(kInputDim, m);
  for (int j = 0; j < m; ++j) {
    const double s = m == 1 ? 0.0 : static_cast<double>(j) / (m - 1);
    f.col(j).setConstant(f_min * std::pow(f_max / f_min, s));
  }
  return RawFeatureBank(f);
}

Feature RawFeatureBank::feature(int k) const {
  const int pair = k / 2;
  Feature f;
  f.variable = pair / num_frequencies();
  f.trig = k % 2 == 0 ? Trig::kSin : Trig::kCos;
  f.frequency = frequencies_(f.variable, pair % num_frequencies());
  return f;
}

void RawFeatureBank::evaluate(const Vec13& z, Eigen::Ref<Eigen::VectorXd> out) const {
  const int m = num_frequencies();
  for (int i = 0; i < kInputDim; ++i) {
    for (int j = 0; j < m; ++j) {
      const double arg = frequencies_(i, j) * z[i];
      out[2 * (i * m + j)] = std::sin(arg);
      out[2 * (i * m + j) + 1] = std::cos(arg);
    }
  }
}

Eigen::VectorXd RawFeatureBank::evaluate(const Vec13& z) const {
  Eigen::VectorXd out(size());
  evaluate(z, out);
  return out;
}

FeatureMap RawFeatureBank::as_map() const {
  std::vector<Feature> features;
  features.reserve(size());
  for (int k = 0; k < size(); ++k) features.push_back(feature(k));
  return FeatureMap(std::move(features));
}

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// d loss / d prediction for one record.
Vec12 loss_slope(const Vec12& err, DataLoss loss) {
  if (loss == DataLoss::kL2) return 2.0 * err;
  return err.unaryExpr([](double e) { return sign(e); });
}

double record_loss(const Vec12& err, DataLoss loss) {
  return loss == DataLoss::kL2 ? err.squaredNorm() : err.lpNorm<1>();
}

std::vector<int> sweep_order(int n, bool shuffle, std::uint64_t seed, std::uint64_t sweep) {
  if (!shuffle) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    return order;
  }
  CounterRng rng(seed, sweep);
  return permutation(n, rng);
}

}  // namespace

double data_loss(const ResidualDataset& data, const RawFeatureBank& bank,
                 const Eigen::MatrixXd& amplitudes, DataLoss loss) {
  Eigen::VectorXd phi(bank.size());
  double total = 0.0;
  for (int t = 0; t < data.size(); ++t) {
    bank.evaluate(data.inputs[t], phi);
    const Vec12 err = amplitudes.transpose() * phi - data.residuals[t];
    total += record_loss(err, loss);
  }
  return total / data.size();
}

double extractor_objective(const ResidualDataset& data, const RawFeatureBank& bank,
                           const Eigen::MatrixXd& amplitudes, DataLoss loss, double lambda) {
  return data_loss(data, bank, amplitudes, loss) + lambda * amplitudes.cwiseAbs().sum();
}

namespace {

// Accumulates d loss_t / d F for one record into grad.
void add_frequency_gradient(const Vec13& z, const Eigen::VectorXd& phi, const Vec12& slope,
                            const RawFeatureBank& bank, const Eigen::MatrixXd& amplitudes,
                            double scale, Eigen::MatrixXd* grad) {
  const int m = bank.num_frequencies();
  const Eigen::VectorXd weight = amplitudes * slope;  // d loss / d phi_k
  for (int i = 0; i < kInputDim; ++i) {
    const double zi = z[i];
    if (zi == 0.0) continue;
    for (int j = 0; j < m; ++j) {
      const int k = 2 * (i * m + j);
      const double s = phi[k];
      const double c = phi[k + 1];
      (*grad)(i, j) += scale * zi * (c * weight[k] - s * weight[k + 1]);
    }
  }
}

}  // namespace

Eigen::MatrixXd frequency_gradient(const ResidualDataset& data, const RawFeatureBank& bank,
                                   const Eigen::MatrixXd& amplitudes, DataLoss loss) {
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(kInputDim, bank.num_frequencies());
  Eigen::VectorXd phi(bank.size());
  for (int t = 0; t < data.size(); ++t) {
    bank.evaluate(data.inputs[t], phi);
    const Vec12 err = amplitudes.transpose() * phi - data.residuals[t];
    add_frequency_gradient(data.inputs[t], phi, loss_slope(err, loss), bank, amplitudes,
                           1.0 / data.size(), &grad);
  }
  return grad;
}

Eigen::MatrixXd inner_amplitude_fit(const ResidualDataset& data, const RawFeatureBank& bank,
                                    const Eigen::MatrixXd& amplitudes, const ExtractorConfig& config,
                                    std::uint64_t sweep_seed) {
  Eigen::MatrixXd a = amplitudes;
  Eigen::VectorXd phi(bank.size());
  const double eta = config.learning_rate;
  const double shrink = eta * config.regularization;
  for (int sweep = 0; sweep < config.inner_steps; ++sweep) {
    const std::vector<int> order =
        sweep_order(data.size(), config.shuffle, config.seed, 2 * (sweep_seed * 1024 + sweep));
    for (int t : order) {
      bank.evaluate(data.inputs[t], phi);
      const Vec12 err = a.transpose() * phi - data.residuals[t];
      a.noalias() -= eta * phi * loss_slope(err, config.loss).transpose();
      if (shrink > 0.0) {
        a = a.unaryExpr([shrink](double v) {
          return v > shrink ? v - shrink : (v < -shrink ? v + shrink : 0.0);
        });
      }
    }
  }
  return a;
}

RawFeatureBank outer_frequency_step(const ResidualDataset& data, const RawFeatureBank& bank,
                                    const Eigen::MatrixXd& amplitudes, const ExtractorConfig& config,
                                    std::uint64_t sweep_seed) {
  RawFeatureBank next = bank;
  if (config.frequency_learning_rate == 0.0) return next;
  Eigen::VectorXd phi(bank.size());
  Eigen::MatrixXd grad(kInputDim, bank.num_frequencies());
  const std::vector<int> order =
      sweep_order(data.size(), config.shuffle, config.seed, 2 * (sweep_seed * 1024) + 1);
  for (int t : order) {
    next.evaluate(data.inputs[t], phi);
    const Vec12 err = amplitudes.transpose() * phi - data.residuals[t];
    grad.setZero();
    add_frequency_gradient(data.inputs[t], phi, loss_slope(err, config.loss), next, amplitudes, 1.0,
                           &grad);
    next.frequencies() -= config.frequency_learning_rate * grad;
  }
  return next;
}

BilevelResult run_bilevel(const ResidualDataset& data, const ExtractorConfig& config) {
  return run_bilevel(data, config,
                     RawFeatureBank::LogGrid(config.num_frequencies, config.min_frequency,
                                             config.max_frequency));
}

BilevelResult run_bilevel(const ResidualDataset& data, const ExtractorConfig& config,
                          const RawFeatureBank& initial_bank) {
  config.validate();
  data.validate();
  BilevelResult r{initial_bank, Eigen::MatrixXd::Zero(initial_bank.size(), 12), {}};
  r.loss_history.push_back(
      extractor_objective(data, r.bank, r.amplitudes, config.loss, config.regularization));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    r.amplitudes = inner_amplitude_fit(data, r.bank, r.amplitudes, config, epoch);
    r.bank = outer_frequency_step(data, r.bank, r.amplitudes, config, epoch);
    r.loss_history.push_back(
        extractor_objective(data, r.bank, r.amplitudes, config.loss, config.regularization));
  }
  return r;
}

SelectionResult select_features(const ResidualDataset& data, const BilevelResult& fit, int count,
                                int max_rows) {
  const int n = fit.bank.size();
  if (count < 1 || count > n) throw ConfigError("select_features: count out of range");
  if (max_rows < 1) throw ConfigError("select_features: max_rows must be >= 1");
  const int stride = std::max(1, (data.size() + max_rows - 1) / max_rows);
  const int rows = (data.size() + stride - 1) / stride;

  const Eigen::VectorXd weight = fit.amplitudes.rowwise().norm();
  Eigen::MatrixXd x(rows, n);
  Eigen::VectorXd phi(n);
  for (int r = 0; r < rows; ++r) {
    fit.bank.evaluate(data.inputs[r * stride], phi);
    x.row(r) = phi.cwiseProduct(weight).transpose();
  }
  const Eigen::MatrixXd gram = (x.transpose() * x) / rows;

  SelectionResult out;
  out.scores = Eigen::VectorXd::Zero(n);
  const double total = gram.trace();
  if (total > 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    const Eigen::VectorXd values = eig.eigenvalues().cwiseMax(0.0);
    double cumulative = 0.0;
    for (int c = n - 1; c >= 0 && cumulative < 0.95 * total; --c) {
      cumulative += values[c];
      out.scores += values[c] * eig.eigenvectors().col(c).cwiseAbs2();
      ++out.components;
    }
  }

  out.ranking.resize(n);
  std::iota(out.ranking.begin(), out.ranking.end(), 0);
  std::stable_sort(out.ranking.begin(), out.ranking.end(),
                   [&](int a, int b) { return out.scores[a] > out.scores[b]; });
  const double floor = 1e-12 * std::max(out.scores.maxCoeff(), 0.0);
  int informative = 0;
  for (int k = 0; k < n; ++k) informative += out.scores[k] > floor && out.scores[k] > 0.0;
  out.rank_deficient = informative < count;

  out.selected.assign(out.ranking.begin(), out.ranking.begin() + count);
  std::sort(out.selected.begin(), out.selected.end());
  std::vector<Feature> features;
  for (int k : out.selected) features.push_back(fit.bank.feature(k));
  out.map = FeatureMap(std::move(features));
  return out;
}

Eigen::MatrixXd fit_amplitudes_least_squares(const ResidualDataset& data, const FeatureMap& map) {
  const int f = map.size();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(f, f);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(f, 12);
  Eigen::VectorXd phi(f);
  for (int t = 0; t < data.size(); ++t) {
    map.evaluate(data.inputs[t], phi);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(phi);
    rhs.noalias() += phi * data.residuals[t].transpose();
  }
  gram = gram.selfadjointView<Eigen::Lower>();
  gram.diagonal().array() += 1e-9 * std::max(1.0, gram.diagonal().maxCoeff());
  return gram.ldlt().solve(rhs);
}

double mean_squared_error(const ResidualDataset& data, const FeatureMap& map,
                          const Eigen::MatrixXd& amplitudes) {
  Eigen::VectorXd phi(map.size());
  double total = 0.0;
  for (int t = 0; t < data.size(); ++t) {
    map.evaluate(data.inputs[t], phi);
    total += (amplitudes.transpose() * phi - data.residuals[t]).squaredNorm();
  }
  return total / data.size();
}

}  // namespace liempc
