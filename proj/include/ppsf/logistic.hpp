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

#ifndef PPSF_LOGISTIC_HPP_
#define PPSF_LOGISTIC_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ppsf/features.hpp"

namespace ppsf {

/// Dense logistic-regression model over binary features.
struct Model {
  std::vector<double> weights;
  double eta = 0.001;
  double reg_lambda = 0.0;

  std::uint64_t dim() const { return weights.size(); }
};

/// w . x for a binary presence vector: the sum of the touched weights.
double margin(const std::vector<double>& weights, const SparseBinaryVector& x);

/// P(y | x, w) = 1 / (1 + exp(-y w.x)).
double sigmoid_prob(const std::vector<double>& weights, const SparseBinaryVector& x,
                    int label);

/// Sum over instances of -log(1 + exp(-y w.x)); 0-weight value is -n log 2.
double log_likelihood(const std::vector<double>& weights, const LabeledDataset& data);

/// Gradient of the log-likelihood: sum_i y_i x_i / (1 + exp(y_i w.x_i)).
/// The step size is applied by the caller, not folded in here.
std::vector<double> gradient(const std::vector<double>& weights,
                             const LabeledDataset& data);

/// One ascent update in place: w <- (1 + 2 lambda) w + eta * grad.
void gradient_step(std::vector<double>& weights, const LabeledDataset& block,
                   double eta, double reg_lambda);

/// Full-batch gradient ascent from the all-zeros start until the max-norm
/// weight change drops below tol or max_iters is hit. Throws on divergence
/// (non-finite weights).
Model train_batch(const LabeledDataset& data, double eta, double reg_lambda,
                  double tol = 1e-8, unsigned max_iters = 1000);

/// Online variant: one update per block of block_size instances, single pass
/// in dataset order. Identical arithmetic to train_batch per block.
Model train_online(const LabeledDataset& data, std::uint64_t block_size, double eta,
                   double reg_lambda);

/// Probability that a random positive outranks a random negative, ties
/// counted half. Throws if either class is absent.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct CrossValResult {
  double best_lambda = 0.0;
  std::vector<double> lambda_grid;                 // sorted ascending
  std::vector<std::vector<double>> fold_auc;       // [lambda][fold]
  std::vector<double> mean_auc;                    // [lambda]
};

/// m-fold cross-validation over an l2 grid; folds are a seeded shuffle dealt
/// round-robin. Returns the lambda with the best mean AUC, ties toward the
/// smaller value. Throws if any fold loses a class.
CrossValResult cross_validate(const LabeledDataset& data, unsigned folds,
                              const std::vector<double>& lambda_grid, double eta,
                              std::uint64_t seed, double tol = 1e-8,
                              unsigned max_iters = 200);

/// Model file: one header line "d eta reg_lambda" (decimal strings), then
/// dim() doubles as big-endian IEEE-754.
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace ppsf

#endif  // PPSF_LOGISTIC_HPP_
