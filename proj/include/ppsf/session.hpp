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

#ifndef PPSF_SESSION_HPP_
#define PPSF_SESSION_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ppsf/evaluation.hpp"
#include "ppsf/training.hpp"
#include "ppsf/transport.hpp"

namespace ppsf {

struct TrainReport {
  Model model;
  OpCounters counters;       // combined when both sides run locally
  StepTimings timings;       // cumulative across rounds
  unsigned rounds_completed = 0;
  bool aborted = false;
  std::string abort_reason;
};

/// Deterministic construction helpers: both roles fan their randomness out
/// of one master seed by label, so any transport yields identical streams.
BobTrainer make_bob_trainer(const TrainingConfig& config, std::vector<double> w0,
                            std::uint64_t master_seed);
AliceTrainer make_alice_for_round(const TrainingConfig& config, const PublicKey& pk,
                                  LabeledDataset block, std::uint64_t master_seed,
                                  unsigned round_index, bool gradient_only = false);

/// Extracts the round's block for online mode (batch mode: the whole set).
LabeledDataset round_block(const LabeledDataset& data, const TrainingConfig& config,
                           unsigned round_index, bool online);
unsigned round_count(const LabeledDataset& data, const TrainingConfig& config,
                     unsigned rounds, bool online);

/// Both parties in one process, direct calls (no channel).
TrainReport train_private_inproc(const TrainingConfig& config, const LabeledDataset& data,
                                 unsigned rounds, bool online, std::uint64_t master_seed);

/// Batch aggregation across several data owners (one round).
TrainReport train_multiparty_inproc(const TrainingConfig& config,
                                    const std::vector<LabeledDataset>& parties,
                                    std::uint64_t master_seed);

/// Channel-driven roles (socket or any transport). The data owner drives the
/// round count; the model owner serves until a "finished" control arrives.
TrainReport run_training_model_owner(Channel& channel, const TrainingConfig& config,
                                     std::uint64_t dim, std::uint64_t master_seed);
TrainReport run_training_data_owner(Channel& channel, const TrainingConfig& config,
                                    const LabeledDataset& data, unsigned rounds,
                                    bool online, std::uint64_t master_seed);

struct EvalReport {
  int label = 0;
  OpCounters counters;  // combined for the inproc runner
  double seconds = 0.0;
  bool aborted = false;
  std::string abort_reason;
};

/// One private classification, both parties local.
EvalReport classify_private_inproc(const Model& model, const SparseBinaryVector& x,
                                   const EvalConfig& config, std::uint64_t master_seed);

/// Channel-driven evaluation: the model owner serves classifications until
/// a "finished" control arrives; the data owner classifies one instance.
void run_eval_model_owner(Channel& channel, const EvalConfig& config, const Model& model,
                          std::uint64_t master_seed, unsigned max_requests = 0);
EvalReport run_eval_data_owner(Channel& channel, const EvalConfig& config,
                               const SparseBinaryVector& x, std::uint64_t master_seed);

}  // namespace ppsf

#endif  // PPSF_SESSION_HPP_
