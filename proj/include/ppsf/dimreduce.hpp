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

#ifndef PPSF_DIMREDUCE_HPP_
#define PPSF_DIMREDUCE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ppsf/features.hpp"
#include "ppsf/rng.hpp"

namespace ppsf {

enum class ReduceMethod : std::uint8_t {
  kLsh,
  kHashSpace,
  kDfPrune,
  kUniform,
  kMultinomial,
  kPca,
};

std::string to_string(ReduceMethod m);
ReduceMethod reduce_method_from_string(const std::string& name);

/// Everything needed to reproduce a reduction. For the data-independent
/// methods the seed fully determines the mapping, so parties can agree on a
/// common feature representation by exchanging this struct alone.
struct ReductionSpec {
  ReduceMethod method = ReduceMethod::kHashSpace;
  std::uint64_t source_dim = 0;
  std::uint64_t target_dim = 0;
  std::uint64_t seed = 0;
  std::uint64_t df_threshold = 1;    // dfprune only
  std::uint64_t hash_modulus = 0;    // hashspace only
};

/// Fitted state. LSH carries nothing beyond the spec (hyperplanes are
/// regenerated from the seed on demand; a dense d x k matrix at full scale
/// would not fit in memory). Selection methods carry the chosen index set;
/// PCA carries the mean and orthonormal basis rows.
struct ProjectionState {
  ReductionSpec spec;
  std::vector<std::uint64_t> selected;        // sorted, unique
  std::vector<double> mean;                   // pca
  std::vector<std::vector<double>> basis;     // pca, k rows of length d
  std::vector<double> variances;              // pca, per basis row
};

/// Gaussian entry (i-th coordinate of hyperplane j) from a counter-mode
/// stream of (seed, j, i); no storage, bit-stable across runs and platforms.
double lsh_hyperplane_entry(std::uint64_t seed, std::uint64_t hyperplane,
                            std::uint64_t coordinate);

/// Random-hyperplane signature: bit j is 1 when h_j . x >= 0.
std::vector<std::uint8_t> lsh_project(const ReductionSpec& spec,
                                      const SparseBinaryVector& x);

/// Index folding i -> i mod m with deduplication.
SparseBinaryVector hashspace_reduce(const ReductionSpec& spec,
                                    const SparseBinaryVector& x);

/// Inverse-CDF sampler over nonnegative weights; used by the multinomial
/// selection and exposed so its law can be tested directly.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(const std::vector<double>& weights);
  std::size_t draw(Rng& rng) const;

 private:
  std::vector<double> cumulative_;
};

/// Document frequency of every feature present in the corpus.
std::vector<std::pair<std::uint64_t, std::uint64_t>> document_frequencies(
    const LabeledDataset& corpus);

/// Fits dfprune / uniform / multinomial selection. dfprune keeps every
/// feature whose document frequency reaches spec.df_threshold; the sampling
/// methods draw (with replacement) until spec.target_dim unique indices are
/// collected. Deterministic per seed.
ProjectionState fit_selection(const ReductionSpec& spec, const LabeledDataset& corpus);

/// Re-expresses x over the selected index set (positions in sorted order).
SparseBinaryVector project_selection(const ProjectionState& state,
                                     const SparseBinaryVector& x);

/// Top-k covariance eigenspace by orthogonal iteration (desk-scale d only).
ProjectionState pca_fit(const std::vector<std::vector<double>>& rows,
                        std::uint64_t target_dim, std::uint64_t seed,
                        double tol = 1e-8, unsigned max_iters = 10000);
std::vector<double> pca_project(const ProjectionState& state,
                                const std::vector<double>& row);
std::vector<double> pca_project(const ProjectionState& state,
                                const SparseBinaryVector& x);

/// Applies a fitted reduction to a whole dataset (LSH signatures become
/// binary presence vectors over k, selections re-index, hashspace folds).
/// PCA is excluded here: it is data dependent and never part of a private
/// protocol session.
LabeledDataset apply_reduction(const ProjectionState& state, const LabeledDataset& data);

std::vector<std::uint8_t> serialize_projection(const ProjectionState& state);
ProjectionState parse_projection(std::span<const std::uint8_t> bytes);

}  // namespace ppsf

#endif  // PPSF_DIMREDUCE_HPP_
