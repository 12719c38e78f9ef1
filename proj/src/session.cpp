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

#include "ppsf/session.hpp"

#include <chrono>

namespace ppsf {

namespace {

using Clock = std::chrono::steady_clock;

ProtocolMessage control_message(const SessionId& sid, const std::string& tag) {
  ControlPayload ctl;
  ctl.tag = tag;
  ProtocolMessage msg;
  msg.session_id = sid;
  msg.type = MsgType::kControl;
  msg.payload = encode_control(ctl);
  return msg;
}

ProtocolMessage abort_message(const SessionId& sid, const std::string& reason) {
  ProtocolMessage msg;
  msg.session_id = sid;
  msg.type = MsgType::kAbort;
  msg.payload = encode_abort(reason);
  return msg;
}

ProtocolMessage expect_not_abort(ProtocolMessage msg) {
  if (msg.type == MsgType::kAbort) {
    throw ProtocolError("peer aborted: " + decode_abort(msg.payload));
  }
  return msg;
}

std::string control_tag(const ProtocolMessage& msg) {
  if (msg.type != MsgType::kControl) throw ProtocolError("expected control message");
  return decode_control(msg.payload).tag;
}

}  // namespace

BobTrainer make_bob_trainer(const TrainingConfig& config, std::vector<double> w0,
                            std::uint64_t master_seed) {
  Rng root = Rng::seeded(master_seed).derive("model-owner");
  Rng key_rng = root.derive("keygen");
  KeyPair keys = keygen(config.key_bits, key_rng);
  return BobTrainer(std::move(keys), config, std::move(w0), root.derive("session"));
}

AliceTrainer make_alice_for_round(const TrainingConfig& config, const PublicKey& pk,
                                  LabeledDataset block, std::uint64_t master_seed,
                                  unsigned round_index, bool gradient_only) {
  Rng root = Rng::seeded(master_seed).derive("data-owner");
  return AliceTrainer(pk, config, std::move(block),
                      root.derive("round-" + std::to_string(round_index)),
                      gradient_only);
}

LabeledDataset round_block(const LabeledDataset& data, const TrainingConfig& config,
                           unsigned round_index, bool online) {
  if (!online) return data;
  LabeledDataset block;
  block.dim = data.dim;
  const std::size_t start = static_cast<std::size_t>(round_index) * config.block_size;
  const std::size_t stop = std::min(data.size(), start + config.block_size);
  if (start >= stop) throw std::out_of_range("round_block: no instances left");
  block.instances.assign(data.instances.begin() + start, data.instances.begin() + stop);
  block.labels.assign(data.labels.begin() + start, data.labels.begin() + stop);
  return block;
}

unsigned round_count(const LabeledDataset& data, const TrainingConfig& config,
                     unsigned rounds, bool online) {
  if (!online) return rounds;
  return static_cast<unsigned>((data.size() + config.block_size - 1) / config.block_size);
}

TrainReport train_private_inproc(const TrainingConfig& config, const LabeledDataset& data,
                                 unsigned rounds, bool online, std::uint64_t master_seed) {
  validate(data);
  if (data.size() == 0) throw std::invalid_argument("training: empty dataset");
  BobTrainer bob = make_bob_trainer(config, std::vector<double>(data.dim, 0.0), master_seed);

  TrainReport report;
  const unsigned total_rounds = round_count(data, config, rounds, online);
  try {
    for (unsigned round = 0; round < total_rounds; ++round) {
      AliceTrainer alice = make_alice_for_round(
          config, bob.public_key(), round_block(data, config, round, online),
          master_seed, round);
      const ProtocolMessage weights = bob.start_round();
      const ProtocolMessage margins = alice.on_weights(weights);
      const ProtocolMessage exponentials = bob.on_blinded_margins(margins);
      const ProtocolMessage scaled = alice.on_exponentials(exponentials);
      const ProtocolMessage reciprocals = bob.on_scaled_logits(scaled);
      const ProtocolMessage update = alice.on_reciprocals(reciprocals);
      bob.finish_round(update);
      report.counters += alice.counters();
      report.timings += alice.timings();
      ++report.rounds_completed;
      if (!online && config.convergence_tol > 0.0 &&
          bob.last_round_delta() < config.convergence_tol) {
        break;
      }
    }
  } catch (const ProtocolError& e) {
    report.aborted = true;
    report.abort_reason = e.what();
  }
  report.model = bob.model();
  report.counters += bob.counters();
  report.timings += bob.timings();
  return report;
}

TrainReport train_multiparty_inproc(const TrainingConfig& config,
                                    const std::vector<LabeledDataset>& parties,
                                    std::uint64_t master_seed) {
  if (parties.empty()) throw std::invalid_argument("multiparty: no parties");
  BobTrainer bob =
      make_bob_trainer(config, std::vector<double>(parties.front().dim, 0.0), master_seed);

  TrainReport report;
  try {
    for (unsigned k = 0; k < parties.size(); ++k) {
      AliceTrainer alice = make_alice_for_round(config, bob.public_key(), parties[k],
                                                master_seed, k, /*gradient_only=*/true);
      const ProtocolMessage weights = bob.start_round();
      const ProtocolMessage margins = alice.on_weights(weights);
      const ProtocolMessage exponentials = bob.on_blinded_margins(margins);
      const ProtocolMessage scaled = alice.on_exponentials(exponentials);
      const ProtocolMessage reciprocals = bob.on_scaled_logits(scaled);
      bob.collect_gradient(alice.on_reciprocals(reciprocals));
      report.counters += alice.counters();
      report.timings += alice.timings();
    }
    bob.commit_aggregate();
    report.rounds_completed = 1;
  } catch (const ProtocolError& e) {
    report.aborted = true;
    report.abort_reason = e.what();
  }
  report.model = bob.model();
  report.counters += bob.counters();
  report.timings += bob.timings();
  return report;
}

TrainReport run_training_model_owner(Channel& channel, const TrainingConfig& config,
                                     std::uint64_t dim, std::uint64_t master_seed) {
  BobTrainer bob = make_bob_trainer(config, std::vector<double>(dim, 0.0), master_seed);
  TrainReport report;
  try {
    channel.send(bob.handshake_message());
    if (control_tag(expect_not_abort(channel.recv())) != "handshake-ok") {
      throw ProtocolError("handshake not acknowledged");
    }
    for (;;) {
      channel.send(bob.start_round());
      channel.send(bob.on_blinded_margins(expect_not_abort(channel.recv())));
      channel.send(bob.on_scaled_logits(expect_not_abort(channel.recv())));
      bob.finish_round(expect_not_abort(channel.recv()));
      ++report.rounds_completed;
      const std::string tag = control_tag(expect_not_abort(channel.recv()));
      if (tag == "finished") break;
      if (tag != "continue") throw ProtocolError("unexpected control tag " + tag);
    }
  } catch (const std::runtime_error& e) {  // ProtocolError, ParseError
    report.aborted = true;
    report.abort_reason = e.what();
    try {
      channel.send(abort_message(bob.session_id(), e.what()));
    } catch (...) {
    }
  }
  report.model = bob.model();
  report.counters = bob.counters();
  report.timings = bob.timings();
  return report;
}

TrainReport run_training_data_owner(Channel& channel, const TrainingConfig& config,
                                    const LabeledDataset& data, unsigned rounds,
                                    bool online, std::uint64_t master_seed) {
  validate(data);
  TrainReport report;
  SessionId sid{};
  try {
    const ProtocolMessage hs_msg = expect_not_abort(channel.recv());
    if (hs_msg.type != MsgType::kHandshake) throw ProtocolError("expected handshake");
    const Handshake hs = decode_handshake(hs_msg.payload);
    config.check_handshake(hs, data.dim);
    sid = hs_msg.session_id;
    const PublicKey pk = public_key_from_handshake(hs);
    channel.send(control_message(sid, "handshake-ok"));

    const unsigned total_rounds = round_count(data, config, rounds, online);
    for (unsigned round = 0; round < total_rounds; ++round) {
      AliceTrainer alice = make_alice_for_round(
          config, pk, round_block(data, config, round, online), master_seed, round);
      channel.send(alice.on_weights(expect_not_abort(channel.recv())));
      channel.send(alice.on_exponentials(expect_not_abort(channel.recv())));
      channel.send(alice.on_reciprocals(expect_not_abort(channel.recv())));
      report.counters += alice.counters();
      report.timings += alice.timings();
      ++report.rounds_completed;
      channel.send(control_message(
          sid, round + 1 == total_rounds ? "finished" : "continue"));
    }
  } catch (const std::runtime_error& e) {  // ProtocolError, ParseError
    report.aborted = true;
    report.abort_reason = e.what();
    try {
      channel.send(abort_message(sid, e.what()));
    } catch (...) {
    }
  }
  return report;
}

EvalReport classify_private_inproc(const Model& model, const SparseBinaryVector& x,
                                   const EvalConfig& config, std::uint64_t master_seed) {
  Rng bob_root = Rng::seeded(master_seed).derive("eval-model-owner");
  Rng key_rng = bob_root.derive("keygen");
  KeyPair keys = keygen(config.key_bits, key_rng);
  BobEvaluator bob(std::move(keys), config, model.weights, bob_root.derive("session"));
  CarolEvaluator carol(bob.public_key(), config,
                       Rng::seeded(master_seed).derive("eval-data-owner"));

  EvalReport report;
  const auto t0 = Clock::now();
  try {
    const ProtocolMessage weights = bob.weights_message();
    const ProtocolMessage blinded = carol.on_weights(weights, x);
    bob.on_blinded_product(blinded);
    const ProtocolMessage response = bob.on_compare_bits(carol.bits_message());
    bob.on_result(carol.on_compare_response(response));
    report.label = carol.label();
  } catch (const ProtocolError& e) {
    report.aborted = true;
    report.abort_reason = e.what();
  }
  report.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  report.counters = bob.counters() + carol.counters();
  return report;
}

void run_eval_model_owner(Channel& channel, const EvalConfig& config, const Model& model,
                          std::uint64_t master_seed, unsigned max_requests) {
  Rng root = Rng::seeded(master_seed).derive("eval-model-owner");
  Rng key_rng = root.derive("keygen");
  KeyPair keys = keygen(config.key_bits, key_rng);
  BobEvaluator bob(std::move(keys), config, model.weights, root.derive("session"));
  try {
    channel.send(bob.handshake_message());
    if (control_tag(expect_not_abort(channel.recv())) != "handshake-ok") {
      throw ProtocolError("handshake not acknowledged");
    }
    unsigned served = 0;
    for (;;) {
      const ProtocolMessage request = expect_not_abort(channel.recv());
      const std::string tag = control_tag(request);
      if (tag == "finished") break;
      if (tag != "classify") throw ProtocolError("unexpected control tag " + tag);
      channel.send(bob.weights_message());
      bob.on_blinded_product(expect_not_abort(channel.recv()));
      channel.send(bob.on_compare_bits(expect_not_abort(channel.recv())));
      bob.on_result(expect_not_abort(channel.recv()));
      if (max_requests != 0 && ++served >= max_requests) break;
    }
  } catch (const std::runtime_error& e) {  // ProtocolError, ParseError
    try {
      channel.send(abort_message(bob.session_id(), e.what()));
    } catch (...) {
    }
  }
}

EvalReport run_eval_data_owner(Channel& channel, const EvalConfig& config,
                               const SparseBinaryVector& x, std::uint64_t master_seed) {
  EvalReport report;
  SessionId sid{};
  const auto t0 = Clock::now();
  try {
    const ProtocolMessage hs_msg = expect_not_abort(channel.recv());
    if (hs_msg.type != MsgType::kHandshake) throw ProtocolError("expected handshake");
    const Handshake hs = decode_handshake(hs_msg.payload);
    config.check_handshake(hs);
    sid = hs_msg.session_id;
    const PublicKey pk = public_key_from_handshake(hs);
    channel.send(control_message(sid, "handshake-ok"));

    CarolEvaluator carol(pk, config, Rng::seeded(master_seed).derive("eval-data-owner"));
    channel.send(control_message(sid, "classify"));
    channel.send(carol.on_weights(expect_not_abort(channel.recv()), x));
    channel.send(carol.bits_message());
    channel.send(carol.on_compare_response(expect_not_abort(channel.recv())));
    report.label = carol.label();
    report.counters = carol.counters();
    channel.send(control_message(sid, "finished"));
  } catch (const std::runtime_error& e) {  // ProtocolError, ParseError
    report.aborted = true;
    report.abort_reason = e.what();
    try {
      channel.send(abort_message(sid, e.what()));
    } catch (...) {
    }
  }
  report.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return report;
}

}  // namespace ppsf
