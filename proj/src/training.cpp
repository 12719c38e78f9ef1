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

#include "ppsf/training.hpp"

#include <chrono>
#include <cmath>

namespace ppsf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ProtocolMessage make_message(const SessionId& sid, MsgType type,
                             std::vector<std::uint8_t> payload) {
  ProtocolMessage msg;
  msg.session_id = sid;
  msg.type = type;
  msg.payload = std::move(payload);
  return msg;
}

}  // namespace

double TrainingConfig::max_session_magnitude() const {
  const double q_bits = static_cast<double>(q_domain.bit_length());
  return std::exp(margin_bound + blind_bound) * std::exp2(q_bits);
}

void TrainingConfig::check_feasible() const {
  if (eta <= 0) throw std::invalid_argument("training config: eta must be positive");
  if (reg_lambda < 0) throw std::invalid_argument("training config: lambda must be >= 0");
  if (block_size == 0) throw std::invalid_argument("training config: block size must be >= 1");
  if (blind_bound < 0) throw std::invalid_argument("training config: blind bound must be >= 0");
  check_codec_feasible(key_bits, scale_constant, max_session_magnitude());
}

Handshake TrainingConfig::to_handshake(const PublicKey& pk, std::uint64_t dim) const {
  Handshake h;
  h.key_bits = key_bits;
  h.modulus = pk.modulus;
  h.generator = pk.generator;
  h.scale_constant = scale_constant;
  h.dim = dim;
  h.block_size = block_size;
  h.eta = eta;
  h.reg_lambda = reg_lambda;
  h.blind_bound = blind_bound;
  h.q_domain = q_domain;
  h.kind = SessionKind::kTraining;
  h.max_frame = max_frame;
  return h;
}

void TrainingConfig::check_handshake(const Handshake& h, std::uint64_t dim) const {
  if (h.kind != SessionKind::kTraining) throw ProtocolError("handshake: not a training session");
  if (h.key_bits != key_bits) throw ProtocolError("handshake mismatch: key bits");
  if (h.modulus.bit_length() != key_bits) throw ProtocolError("handshake: modulus size inconsistent");
  if (h.generator != h.modulus + BigInt(1)) throw ProtocolError("handshake: unexpected generator");
  if (h.scale_constant != scale_constant) throw ProtocolError("handshake mismatch: scale constant");
  if (h.dim != dim) throw ProtocolError("handshake mismatch: dimension");
  if (h.eta != eta) throw ProtocolError("handshake mismatch: eta");
  if (h.reg_lambda != reg_lambda) throw ProtocolError("handshake mismatch: lambda");
  if (h.blind_bound != blind_bound) throw ProtocolError("handshake mismatch: blind bound");
  if (h.q_domain != q_domain) throw ProtocolError("handshake mismatch: q domain");
}

// --------------------------------------------------------------------------
// Model owner
// --------------------------------------------------------------------------

BobTrainer::BobTrainer(KeyPair keys, TrainingConfig config,
                       std::vector<double> initial_weights, Rng rng)
    : keys_(std::move(keys)),
      config_(std::move(config)),
      codec_(config_.scale_constant, keys_.pub.modulus),
      weights_(std::move(initial_weights)),
      rng_(rng) {
  config_.check_feasible();
  if (keys_.pub.bits != config_.key_bits) {
    throw std::invalid_argument("BobTrainer: key size disagrees with config");
  }
  const auto sid = rng_.bytes(session_id_.size());
  std::copy(sid.begin(), sid.end(), session_id_.begin());
}

ProtocolMessage BobTrainer::handshake_message() const {
  return make_message(session_id_, MsgType::kHandshake,
                      encode_handshake(config_.to_handshake(keys_.pub, weights_.size())));
}

void BobTrainer::expect(TrainerPhase phase, const ProtocolMessage& msg,
                        MsgType type) const {
  if (phase_ == TrainerPhase::kAborted) throw ProtocolError("session aborted");
  if (phase_ != phase) throw ProtocolError("out-of-order message for this phase");
  if (msg.session_id != session_id_) throw ProtocolError("session id mismatch");
  if (msg.type != type) throw ProtocolError("unexpected message type");
}

void BobTrainer::abort_session(const std::string& why) {
  phase_ = TrainerPhase::kAborted;
  throw ProtocolError(why);
}

ProtocolMessage BobTrainer::start_round() {
  if (phase_ == TrainerPhase::kAborted) throw ProtocolError("session aborted");
  if (phase_ != TrainerPhase::kRoundStart) throw ProtocolError("round already in flight");
  const auto t0 = Clock::now();
  CipherListPayload payload;
  payload.scale = 1;
  payload.items.reserve(weights_.size());
  for (double w : weights_) {
    payload.items.push_back(encrypt(keys_.pub, codec_.encode(w), rng_));
  }
  counters_.encryptions += weights_.size();
  counters_.elements_to_data_owner += weights_.size();
  phase_ = TrainerPhase::kAwaitMargins;
  timings_.send_weights += seconds_since(t0);
  return make_message(session_id_, MsgType::kEncVector, encode_cipher_list(payload));
}

ProtocolMessage BobTrainer::on_blinded_margins(const ProtocolMessage& msg) {
  expect(TrainerPhase::kAwaitMargins, msg, MsgType::kEncScalars);
  const CipherListPayload in = decode_cipher_list(msg.payload);
  if (in.scale != 1) throw ProtocolError("blinded margins must arrive at scale 1");
  if (in.items.empty()) throw ProtocolError("empty margin block");

  const auto t0 = Clock::now();
  const double margin_limit = config_.margin_bound + config_.blind_bound;
  CipherListPayload out;
  out.scale = 1;
  out.items.reserve(in.items.size());
  for (const auto& item : in.items) {
    double blinded = 0.0;
    try {
      blinded = codec_.decode(decrypt(keys_.priv, keys_.pub, item), 1);
    } catch (const std::exception&) {
      abort_session("undecryptable margin ciphertext; aborting round");
    }
    if (std::fabs(blinded) > margin_limit) {
      abort_session("blinded margin outside configured range; aborting round");
    }
    try {
      out.items.push_back(encrypt(keys_.pub, codec_.encode(std::exp(blinded)), rng_));
    } catch (const OverflowError&) {
      abort_session("exponential overflows fixed-point domain; aborting round");
    }
  }
  counters_.decryptions += in.items.size();
  counters_.encryptions += in.items.size();
  counters_.elements_to_data_owner += in.items.size();
  round_n_ = in.items.size();
  phase_ = TrainerPhase::kAwaitScaled;
  timings_.exponentiate += seconds_since(t0);
  return make_message(session_id_, MsgType::kEncScalars, encode_cipher_list(out));
}

ProtocolMessage BobTrainer::on_scaled_logits(const ProtocolMessage& msg) {
  expect(TrainerPhase::kAwaitScaled, msg, MsgType::kEncScalars);
  const CipherListPayload in = decode_cipher_list(msg.payload);
  if (in.scale != 2) throw ProtocolError("scaled logits must arrive at scale 2");
  if (in.items.size() != round_n_) {
    abort_session("scaled logit count disagrees with round block");
  }

  const auto t0 = Clock::now();
  CipherListPayload out;
  out.scale = 1;
  out.items.reserve(in.items.size());
  for (const auto& item : in.items) {
    double value = 0.0;
    try {
      value = codec_.decode(decrypt(keys_.priv, keys_.pub, item), 2);
    } catch (const std::exception&) {
      abort_session("undecryptable logit ciphertext; aborting round");
    }
    if (value <= 0.0) {
      abort_session("scaled logit is nonpositive; stream corrupt, aborting round");
    }
    try {
      out.items.push_back(encrypt(keys_.pub, codec_.encode(1.0 / value), rng_));
    } catch (const OverflowError&) {
      abort_session("reciprocal overflows fixed-point domain; aborting round");
    }
  }
  // The reciprocal pass is not charged separately under the session cost
  // model (see OpCounters); only the element traffic is.
  counters_.elements_to_data_owner += in.items.size();
  phase_ = TrainerPhase::kAwaitUpdate;
  timings_.reciprocal += seconds_since(t0);
  return make_message(session_id_, MsgType::kEncScalars, encode_cipher_list(out));
}

void BobTrainer::finish_round(const ProtocolMessage& msg) {
  expect(TrainerPhase::kAwaitUpdate, msg, MsgType::kEncVector);
  const CipherListPayload in = decode_cipher_list(msg.payload);
  if (in.scale != 2) throw ProtocolError("weight update must arrive at scale 2");
  if (in.items.size() != weights_.size()) {
    abort_session("weight update dimension mismatch");
  }

  std::vector<double> next(weights_.size());
  for (std::size_t j = 0; j < in.items.size(); ++j) {
    try {
      next[j] = codec_.decode(decrypt(keys_.priv, keys_.pub, in.items[j]), 2);
    } catch (const std::exception&) {
      abort_session("undecryptable weight ciphertext; aborting round");
    }
    if (!std::isfinite(next[j])) abort_session("non-finite decoded weight");
  }
  counters_.decryptions += in.items.size();
  double delta = 0.0;
  for (std::size_t j = 0; j < next.size(); ++j) {
    delta = std::max(delta, std::fabs(next[j] - weights_[j]));
  }
  last_delta_ = delta;
  weights_ = std::move(next);
  ++rounds_;
  round_n_ = 0;
  phase_ = TrainerPhase::kRoundStart;
}

void BobTrainer::collect_gradient(const ProtocolMessage& msg) {
  expect(TrainerPhase::kAwaitUpdate, msg, MsgType::kEncVector);
  const CipherListPayload in = decode_cipher_list(msg.payload);
  if (in.scale != 2) throw ProtocolError("gradient must arrive at scale 2");
  if (in.items.size() != weights_.size()) abort_session("gradient dimension mismatch");
  if (gradient_sum_.empty()) {
    gradient_sum_ = in.items;
  } else {
    for (std::size_t j = 0; j < in.items.size(); ++j) {
      gradient_sum_[j] = hom_add(keys_.pub, gradient_sum_[j], in.items[j]);
    }
  }
  ++parties_collected_;
  round_n_ = 0;
  phase_ = TrainerPhase::kRoundStart;  // ready for the next party
}

void BobTrainer::commit_aggregate() {
  if (phase_ != TrainerPhase::kRoundStart || gradient_sum_.empty()) {
    throw ProtocolError("no collected gradients to commit");
  }
  std::vector<double> next(weights_.size());
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    double step = 0.0;
    try {
      step = codec_.decode(decrypt(keys_.priv, keys_.pub, gradient_sum_[j]), 2);
    } catch (const std::exception&) {
      abort_session("undecryptable aggregated gradient; aborting round");
    }
    if (!std::isfinite(step)) abort_session("non-finite aggregated gradient");
    next[j] = (1.0 + 2.0 * config_.reg_lambda) * weights_[j] + step;
  }
  weights_ = std::move(next);
  counters_.decryptions += weights_.size();
  gradient_sum_.clear();
  parties_collected_ = 0;
  ++rounds_;
}

// --------------------------------------------------------------------------
// Data owner
// --------------------------------------------------------------------------

AliceTrainer::AliceTrainer(PublicKey pk, TrainingConfig config, LabeledDataset block,
                           Rng rng, bool gradient_only)
    : pk_(std::move(pk)),
      config_(std::move(config)),
      codec_(config_.scale_constant, pk_.modulus),
      block_(std::move(block)),
      rng_(rng),
      sampler_(config_.blind_bound, config_.q_domain, rng_.derive("blinds")),
      gradient_only_(gradient_only) {
  config_.check_feasible();
  validate(block_);
  if (block_.size() == 0) {
    throw std::invalid_argument("AliceTrainer: block must hold at least one instance");
  }
}

void AliceTrainer::expect(DataOwnerPhase phase, const ProtocolMessage& msg,
                          MsgType type) const {
  if (phase_ == DataOwnerPhase::kAborted) throw ProtocolError("session aborted");
  if (phase_ != phase) throw ProtocolError("out-of-order message for this phase");
  if (session_id_set_ && msg.session_id != session_id_) {
    throw ProtocolError("session id mismatch");
  }
  if (msg.type != type) throw ProtocolError("unexpected message type");
}

void AliceTrainer::abort_session(const std::string& why) {
  phase_ = DataOwnerPhase::kAborted;
  throw ProtocolError(why);
}

ProtocolMessage AliceTrainer::on_weights(const ProtocolMessage& msg) {
  expect(DataOwnerPhase::kAwaitWeights, msg, MsgType::kEncVector);
  const CipherListPayload in = decode_cipher_list(msg.payload);
  if (in.scale != 1) throw ProtocolError("weights must arrive at scale 1");
  if (in.items.size() != block_.dim) throw ProtocolError("weight vector dimension mismatch");
  if (!session_id_set_) {
    session_id_ = msg.session_id;
    session_id_set_ = true;
  }

  const auto t0 = Clock::now();
  enc_weights_ = in.items;
  blinds_r_.clear();
  blinds_q_.clear();

  CipherListPayload out;
  out.scale = 1;
  out.items.reserve(block_.size());
  for (std::size_t i = 0; i < block_.size(); ++i) {
    // Inner product with a binary instance: multiply the touched weight
    // ciphertexts; a -1 label flips the sign via one modular inversion.
    ScaledCiphertext acc{encrypt_plain(pk_, BigInt(0)), 1};
    for (std::uint64_t idx : block_.instances[i].indices) {
      if (idx >= enc_weights_.size()) abort_session("feature index outside dimension");
      acc = scaled_add(pk_, acc, ScaledCiphertext{enc_weights_[idx], 1});
    }
    if (block_.labels[i] == -1) {
      try {
        acc = mul_int(pk_, acc, BigInt(-1));
      } catch (const std::domain_error&) {
        abort_session("non-invertible weight ciphertext in stream");
      }
    }

    const double r = sampler_.draw_r();
    blinds_r_.push_back(r);
    const ScaledCiphertext blind{encrypt(pk_, codec_.encode(-r), rng_), 1};
    counters_.encryptions += 1;
    out.items.push_back(scaled_add(pk_, acc, blind).cipher);
  }
  counters_.elements_to_model_owner += out.items.size();
  phase_ = DataOwnerPhase::kAwaitExponentials;
  timings_.blind_margins += seconds_since(t0);
  return make_message(session_id_, MsgType::kEncScalars, encode_cipher_list(out));
}

ProtocolMessage AliceTrainer::on_exponentials(const ProtocolMessage& msg) {
  expect(DataOwnerPhase::kAwaitExponentials, msg, MsgType::kEncScalars);
  const CipherListPayload in = decode_cipher_list(msg.payload);
  if (in.scale != 1) throw ProtocolError("exponentials must arrive at scale 1");
  if (in.items.size() != block_.size()) abort_session("exponential count mismatch");

  const auto t0 = Clock::now();
  // 1 at scale 2 is the residue C^2; a public constant, embedded without
  // fresh randomness (the surrounding product already carries it).
  const Ciphertext one_scale2 = encrypt_plain(pk_, codec_.scale_factor(2));

  CipherListPayload out;
  out.scale = 2;
  out.items.reserve(in.items.size());
  for (std::size_t i = 0; i < in.items.size(); ++i) {
    ScaledCiphertext value{in.items[i], 1};
    // Unblind: raise to the fixed-point image of e^{r_i}; scale rises to 2.
    ScaledCiphertext unblinded =
        scaled_mul_plain(pk_, codec_, value, std::exp(blinds_r_[i]));
    ScaledCiphertext logit = scaled_add(pk_, unblinded, ScaledCiphertext{one_scale2, 2});
    const BigInt q = sampler_.draw_q();
    blinds_q_.push_back(q);
    out.items.push_back(mul_int(pk_, logit, q).cipher);
  }
  counters_.elements_to_model_owner += out.items.size();
  phase_ = DataOwnerPhase::kAwaitReciprocals;
  timings_.unblind_scale += seconds_since(t0);
  return make_message(session_id_, MsgType::kEncScalars, encode_cipher_list(out));
}

ProtocolMessage AliceTrainer::on_reciprocals(const ProtocolMessage& msg) {
  expect(DataOwnerPhase::kAwaitReciprocals, msg, MsgType::kEncScalars);
  const CipherListPayload in = decode_cipher_list(msg.payload);
  if (in.scale != 1) throw ProtocolError("reciprocals must arrive at scale 1");
  if (in.items.size() != block_.size()) abort_session("reciprocal count mismatch");

  const auto t0 = Clock::now();
  // Per-coordinate encrypted gradient at scale 1.
  std::vector<ScaledCiphertext> grad(block_.dim,
                                     ScaledCiphertext{encrypt_plain(pk_, BigInt(0)), 1});
  for (std::size_t i = 0; i < in.items.size(); ++i) {
    // Cancel the multiplicative blind: sigma_i = q_i * reciprocal.
    ScaledCiphertext sigma = mul_int(pk_, ScaledCiphertext{in.items[i], 1}, blinds_q_[i]);
    if (block_.labels[i] == -1) {
      try {
        sigma = mul_int(pk_, sigma, BigInt(-1));
      } catch (const std::domain_error&) {
        abort_session("non-invertible reciprocal ciphertext in stream");
      }
    }
    for (std::uint64_t idx : block_.instances[i].indices) {
      grad[idx] = scaled_add(pk_, grad[idx], sigma);
    }
  }
  timings_.assemble_gradient += seconds_since(t0);

  const auto t1 = Clock::now();
  CipherListPayload out;
  out.scale = 2;
  out.items.reserve(block_.dim);
  for (std::size_t j = 0; j < block_.dim; ++j) {
    ScaledCiphertext step = scaled_mul_plain(pk_, codec_, grad[j], config_.eta);
    if (gradient_only_) {
      out.items.push_back(step.cipher);
      continue;
    }
    // Rebase E[w_j] to scale 2; the same exponent carries the l2 term, and
    // lambda = 0 reduces to the plain rebase exactly.
    ScaledCiphertext rebased = scaled_mul_plain(
        pk_, codec_, ScaledCiphertext{enc_weights_[j], 1}, 1.0 + 2.0 * config_.reg_lambda);
    out.items.push_back(scaled_add(pk_, rebased, step).cipher);
  }
  counters_.elements_to_model_owner += out.items.size();
  blinds_r_.clear();
  blinds_q_.clear();
  phase_ = DataOwnerPhase::kAwaitWeights;  // ready for another round
  timings_.apply_update += seconds_since(t1);
  return make_message(session_id_, MsgType::kEncVector, encode_cipher_list(out));
}

}  // namespace ppsf
