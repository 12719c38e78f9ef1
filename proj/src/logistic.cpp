/*
 * Copyright 2026 The ppsf Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ppsf/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ppsf/rng.hpp"
#include "ppsf/serial.hpp"

namespace ppsf {

double margin(const std::vector<double>& weights, const SparseBinaryVector& x) {
  double sum = 0.0;
  for (std::uint64_t idx : x.indices) {
    if (idx >= weights.size()) throw std::out_of_range("margin: feature index beyond model");
    sum += weights[idx];
  }
  return sum;
}

double sigmoid_prob(const std::vector<double>& weights, const SparseBinaryVector& x,
                    int label) {
  const double m = label * margin(weights, x);
  // 1/(1+e^-m), saturating cleanly at the double limits.
  if (m >= 0) {
    return 1.0 / (1.0 + std::exp(-m));
  }
  const double e = std::exp(m);
  return e / (1.0 + e);
}

namespace {
// log(1 + e^t) without overflow for large |t|.
double softplus(double t) {
  return std::max(t, 0.0) + std::log1p(std::exp(-std::fabs(t)));
}
}  // namespace

double log_likelihood(const std::vector<double>& weights, const LabeledDataset& data) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    total -= softplus(-data.labels[i] * margin(weights, data.instances[i]));
  }
  return total;
}

std::vector<double> gradient(const std::vector<double>& weights,
                             const LabeledDataset& data) {
  std::vector<double> grad(weights.size(), 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int y = data.labels[i];
    // y / (1 + e^{y m}) = y * sigma(-y m)
    const double coef = y * sigmoid_prob(weights, data.instances[i], -y);
    for (std::uint64_t idx : data.instances[i].indices) grad[idx] += coef;
  }
  return grad;
}

void gradient_step(std::vector<double>& weights, const LabeledDataset& block,
                   double eta, double reg_lambda) {
  const std::vector<double> grad = gradient(weights, block);
  for (std::size_t j = 0; j < weights.size(); ++j) {
    weights[j] = (1.0 + 2.0 * reg_lambda) * weights[j] + eta * grad[j];
  }
}

namespace {
void check_finite(const std::vector<double>& w) {
  for (double v : w) {
    if (!std::isfinite(v)) throw std::runtime_error("training diverged: non-finite weight");
  }
}
}  // namespace

Model train_batch(const LabeledDataset& data, double eta, double reg_lambda,
                  double tol, unsigned max_iters) {
  if (eta <= 0) throw std::invalid_argument("train_batch: eta must be positive");
  if (reg_lambda < 0) throw std::invalid_argument("train_batch: reg_lambda must be >= 0");
  validate(data);
  Model model{std::vector<double>(data.dim, 0.0), eta, reg_lambda};
  for (unsigned iter = 0; iter < max_iters; ++iter) {
    std::vector<double> prev = model.weights;
    gradient_step(model.weights, data, eta, reg_lambda);
    check_finite(model.weights);
    double delta = 0.0;
    for (std::size_t j = 0; j < prev.size(); ++j) {
      delta = std::max(delta, std::fabs(model.weights[j] - prev[j]));
    }
    if (delta < tol) break;
  }
  return model;
}

Model train_online(const LabeledDataset& data, std::uint64_t block_size, double eta,
                   double reg_lambda) {
  if (block_size == 0) throw std::invalid_argument("train_online: block size must be >= 1");
  validate(data);
  Model model{std::vector<double>(data.dim, 0.0), eta, reg_lambda};
  for (std::size_t start = 0; start < data.size(); start += block_size) {
    const std::size_t stop = std::min(data.size(), start + block_size);
    LabeledDataset block;
    block.dim = data.dim;
    block.instances.assign(data.instances.begin() + start, data.instances.begin() + stop);
    block.labels.assign(data.labels.begin() + start, data.labels.begin() + stop);
    gradient_step(model.weights, block, eta, reg_lambda);
    check_finite(model.weights);
  }
  return model;
}

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("auc: score/label count mismatch");
  }
  std::size_t positives = 0;
  for (int y : labels) {
    if (y != 1 && y != -1) throw std::invalid_argument("auc: labels must be +/-1");
    if (y == 1) ++positives;
  }
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw std::invalid_argument("auc: need both classes");
  }

  // Mann-Whitney with midranks; exact for ties.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) positive_rank_sum += midrank;
    }
    i = j;
  }
  const double p = static_cast<double>(positives);
  const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

CrossValResult cross_validate(const LabeledDataset& data, unsigned folds,
                              const std::vector<double>& lambda_grid, double eta,
                              std::uint64_t seed, double tol, unsigned max_iters) {
  if (folds < 2) throw std::invalid_argument("cross_validate: need at least 2 folds");
  if (lambda_grid.empty()) throw std::invalid_argument("cross_validate: empty grid");
  if (data.size() < folds) throw std::invalid_argument("cross_validate: too few instances");
  validate(data);

  // Seeded shuffle dealt round-robin: fold of instance k is k-th card.
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng = Rng::seeded(seed).derive("cv-folds");
  for (std::size_t k = order.size(); k > 1; --k) {
    std::swap(order[k - 1], order[rng.below(k)]);
  }
  std::vector<unsigned> fold_of(data.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    fold_of[order[k]] = static_cast<unsigned>(k % folds);
  }

  for (unsigned f = 0; f < folds; ++f) {
    int pos = 0, neg = 0;
    for (std::size_t k = 0; k < data.size(); ++k) {
      if (fold_of[k] == f) (data.labels[k] == 1 ? pos : neg)++;
    }
    if (pos == 0 || neg == 0) {
      throw std::runtime_error("cross_validate: fold " + std::to_string(f) +
                               " lost a class; reseed or use fewer folds");
    }
  }

  CrossValResult result;
  result.lambda_grid = lambda_grid;
  std::sort(result.lambda_grid.begin(), result.lambda_grid.end());
  result.fold_auc.resize(result.lambda_grid.size());
  result.mean_auc.resize(result.lambda_grid.size());

  double best_mean = -1.0;
  for (std::size_t li = 0; li < result.lambda_grid.size(); ++li) {
    const double lambda = result.lambda_grid[li];
    for (unsigned f = 0; f < folds; ++f) {
      LabeledDataset train, held;
      train.dim = held.dim = data.dim;
      for (std::size_t k = 0; k < data.size(); ++k) {
        auto& part = fold_of[k] == f ? held : train;
        part.instances.push_back(data.instances[k]);
        part.labels.push_back(data.labels[k]);
      }
      const Model m = train_batch(train, eta, lambda, tol, max_iters);
      std::vector<double> scores(held.size());
      for (std::size_t k = 0; k < held.size(); ++k) {
        scores[k] = margin(m.weights, held.instances[k]);
      }
      result.fold_auc[li].push_back(auc(scores, held.labels));
    }
    const double mean =
        std::accumulate(result.fold_auc[li].begin(), result.fold_auc[li].end(), 0.0) /
        folds;
    result.mean_auc[li] = mean;
    if (mean > best_mean) {  // strict: ties keep the smaller lambda
      best_mean = mean;
      result.best_lambda = lambda;
    }
  }
  return result;
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_model: cannot open " + path.string());
  out << model.weights.size() << ' ' << format_double(model.eta) << ' '
      << format_double(model.reg_lambda) << '\n';
  ByteWriter w;
  for (double v : model.weights) w.put_f64(v);
  const auto& bytes = w.data();
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("save_model: write failed for " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_model: cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::uint64_t dim = 0;
  std::string eta_s, lambda_s;
  if (!(hs >> dim >> eta_s >> lambda_s)) {
    throw std::runtime_error("load_model: malformed header in " + path.string());
  }
  Model model;
  model.eta = parse_double(eta_s);
  model.reg_lambda = parse_double(lambda_s);
  std::vector<std::uint8_t> bytes(dim * 8);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw std::runtime_error("load_model: truncated weights in " + path.string());
  }
  ByteReader r(bytes);
  model.weights.resize(dim);
  for (auto& v : model.weights) v = r.get_f64();
  return model;
}

}  // namespace ppsf
