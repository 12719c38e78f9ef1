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

#include "ppsf/evaluation.hpp"

#include <algorithm>
#include <cmath>

namespace ppsf {

namespace {

const BigInt kOne(1);

ProtocolMessage make_message(const SessionId& sid, MsgType type,
                             std::vector<std::uint8_t> payload) {
  ProtocolMessage msg;
  msg.session_id = sid;
  msg.type = type;
  msg.payload = std::move(payload);
  return msg;
}

}  // namespace

unsigned EvalConfig::range_bits() const {
  if (margin_bound <= 0 || !std::isfinite(margin_bound)) {
    throw std::invalid_argument("eval config: margin bound must be positive");
  }
  const BigInt limit =
      scale_constant * BigInt(static_cast<long>(std::ceil(2.0 * margin_bound)));
  return static_cast<unsigned>(limit.bit_length());
}

Handshake EvalConfig::to_handshake(const PublicKey& pk, std::uint64_t dim) const {
  Handshake h;
  h.key_bits = key_bits;
  h.modulus = pk.modulus;
  h.generator = pk.generator;
  h.scale_constant = scale_constant;
  h.dim = dim;
  h.block_size = 1;
  h.eta = 0.0;
  h.reg_lambda = 0.0;
  h.blind_bound = margin_bound;
  h.q_domain = kOne;
  h.kind = SessionKind::kEvaluation;
  h.max_frame = max_frame;
  return h;
}

void EvalConfig::check_handshake(const Handshake& h) const {
  if (h.kind != SessionKind::kEvaluation) throw ProtocolError("handshake: not an eval session");
  if (h.key_bits != key_bits) throw ProtocolError("handshake mismatch: key bits");
  if (h.scale_constant != scale_constant) throw ProtocolError("handshake mismatch: scale constant");
  if (h.blind_bound != margin_bound) throw ProtocolError("handshake mismatch: margin bound");
}

// --------------------------------------------------------------------------
// Millionaire comparison
// --------------------------------------------------------------------------

MillionaireEvaluator::MillionaireEvaluator(BigInt r, unsigned bit_width,
                                           KeyPair comparison_keys, Rng rng)
    : r_(std::move(r)), bit_width_(bit_width), keys_(std::move(comparison_keys)), rng_(rng) {
  if (bit_width_ == 0) throw std::invalid_argument("millionaire: zero bit width");
  if (r_.sign() < 0 || r_.bit_length() > bit_width_) {
    throw std::out_of_range("millionaire: r outside [0, 2^bits)");
  }
  if (keys_.pub.bits <= bit_width_ + 2) {
    throw std::invalid_argument("millionaire: comparison key too small for bit width");
  }
}

ProtocolMessage MillionaireEvaluator::bits_message(const SessionId& sid) {
  CipherListPayload payload;
  payload.scale = 1;
  payload.aux = serialize_public_key(keys_.pub);
  payload.items.reserve(bit_width_);
  for (unsigned j = 0; j < bit_width_; ++j) {
    payload.items.push_back(
        encrypt(keys_.pub, BigInt(r_.tstbit(j) ? 1L : 0L), rng_));
  }
  counters_.encryptions += bit_width_;
  counters_.elements_to_model_owner += bit_width_;
  sent_ = true;
  return make_message(sid, MsgType::kCompareBits, encode_cipher_list(payload));
}

bool MillionaireEvaluator::on_response(const ProtocolMessage& msg) {
  if (!sent_) throw ProtocolError("millionaire: response before bits were sent");
  if (msg.type != MsgType::kCompareBits) throw ProtocolError("millionaire: unexpected type");
  const CipherListPayload payload = decode_cipher_list(msg.payload);
  if (payload.items.size() != bit_width_) {
    throw ProtocolError("millionaire: response length mismatch");
  }
  bool any_zero = false;
  for (const auto& item : payload.items) {
    try {
      if (decrypt(keys_.priv, keys_.pub, item).is_zero()) any_zero = true;
    } catch (const std::domain_error&) {
      throw ProtocolError("undecryptable comparison response");
    }
  }
  counters_.decryptions += bit_width_;
  sent_ = false;
  return any_zero;
}

MillionaireResponder::MillionaireResponder(BigInt s, unsigned bit_width, Rng rng)
    : s_(std::move(s)), bit_width_(bit_width), rng_(rng) {
  if (bit_width_ == 0) throw std::invalid_argument("millionaire: zero bit width");
  if (s_.sign() < 0 || s_.bit_length() > bit_width_) {
    throw std::out_of_range("millionaire: s outside [0, 2^bits)");
  }
}

ProtocolMessage MillionaireResponder::on_bits(const ProtocolMessage& msg) {
  if (msg.type != MsgType::kCompareBits) throw ProtocolError("millionaire: unexpected type");
  const CipherListPayload payload = decode_cipher_list(msg.payload);
  if (payload.items.size() != bit_width_) {
    throw ProtocolError("millionaire: bit count mismatch");
  }
  const PublicKey cpk = parse_public_key(payload.aux);

  // From the most significant bit down, keep the running count of observed
  // disagreements; at the highest bit where the inputs differ, the formed
  // value is zero exactly when the evaluator's bit is the one.
  Ciphertext disagreements = encrypt_plain(cpk, BigInt(0));
  std::vector<Ciphertext> out(bit_width_);
  try {
    for (unsigned pos = bit_width_; pos-- > 0;) {
      const bool s_bit = s_.tstbit(pos);
      const Ciphertext& r_bit = payload.items[pos];
      // s_j - r_j + 1 + 3 * disagreements
      Ciphertext formed = encrypt_plain(cpk, BigInt(s_bit ? 2L : 1L));
      formed = hom_add(cpk, formed, hom_scale(cpk, r_bit, -1L));
      formed = hom_add(cpk, formed, hom_scale(cpk, disagreements, 3L));
      // Multiplicative blind by a fresh unit, then fresh randomness: the
      // evaluator learns nothing past the zero/nonzero distinction.
      formed = hom_scale(cpk, formed, rng_.unit_mod(cpk.modulus));
      out[pos] = rerandomize(cpk, formed, rng_);

      // xor of the position: r_j when s_j = 0, else 1 - r_j.
      const Ciphertext xor_bit =
          s_bit ? hom_add(cpk, encrypt_plain(cpk, kOne), hom_scale(cpk, r_bit, -1L))
                : r_bit;
      disagreements = hom_add(cpk, disagreements, xor_bit);
    }
  } catch (const std::domain_error&) {
    throw ProtocolError("non-unit ciphertext among comparison bits");
  }
  for (std::size_t i = out.size(); i > 1; --i) {
    std::swap(out[i - 1], out[rng_.below(i)]);
  }

  CipherListPayload reply;
  reply.scale = 1;
  reply.items = std::move(out);
  return make_message(msg.session_id, MsgType::kCompareBits, encode_cipher_list(reply));
}

bool secure_compare(const BigInt& r, const BigInt& s, unsigned bit_width,
                    const KeyPair& comparison_keys, Rng& rng) {
  MillionaireEvaluator evaluator(r, bit_width, comparison_keys, rng.derive("cmp-eval"));
  MillionaireResponder responder(s, bit_width, rng.derive("cmp-resp"));
  SessionId sid{};
  return evaluator.on_response(responder.on_bits(evaluator.bits_message(sid)));
}

// --------------------------------------------------------------------------
// Evaluation endpoints
// --------------------------------------------------------------------------

BobEvaluator::BobEvaluator(KeyPair keys, EvalConfig config, std::vector<double> weights,
                           Rng rng)
    : keys_(std::move(keys)),
      config_(std::move(config)),
      codec_(config_.scale_constant, keys_.pub.modulus),
      weights_(std::move(weights)),
      rng_(rng) {
  check_codec_feasible(config_.key_bits, config_.scale_constant,
                       std::exp(config_.margin_bound));
  if (keys_.pub.bits != config_.key_bits) {
    throw std::invalid_argument("BobEvaluator: key size disagrees with config");
  }
  // The comparison range must sit far inside Z_N for share arithmetic.
  if (config_.comparison_bits() + 2 >= keys_.pub.bits) {
    throw std::invalid_argument("BobEvaluator: comparison range too wide for key");
  }
  const auto sid = rng_.bytes(session_id_.size());
  std::copy(sid.begin(), sid.end(), session_id_.begin());
}

ProtocolMessage BobEvaluator::handshake_message() const {
  return make_message(session_id_, MsgType::kHandshake,
                      encode_handshake(config_.to_handshake(keys_.pub, weights_.size())));
}

ProtocolMessage BobEvaluator::weights_message() {
  if (cached_weights_.empty()) {
    cached_weights_.reserve(weights_.size());
    for (double w : weights_) {
      cached_weights_.push_back(encrypt(keys_.pub, codec_.encode(w), rng_));
    }
    counters_.encryptions += weights_.size();
  }
  CipherListPayload payload;
  payload.scale = 1;
  payload.items = cached_weights_;
  counters_.elements_to_data_owner += cached_weights_.size();
  return make_message(session_id_, MsgType::kEncVector, encode_cipher_list(payload));
}

void BobEvaluator::on_blinded_product(const ProtocolMessage& msg) {
  if (msg.type != MsgType::kEncScalars) throw ProtocolError("expected blinded product");
  if (msg.session_id != session_id_) throw ProtocolError("session id mismatch");
  const CipherListPayload payload = decode_cipher_list(msg.payload);
  if (payload.scale != 1 || payload.items.size() != 1) {
    throw ProtocolError("blinded product must be one scale-1 element");
  }
  // Signed fixed-point value of w.x' - u.
  BigInt blinded;
  try {
    blinded = codec_.to_signed(decrypt(keys_.priv, keys_.pub, payload.items[0]));
  } catch (const std::domain_error&) {
    throw ProtocolError("undecryptable blinded product");
  }
  counters_.decryptions += 1;
  const BigInt half_range = kOne << (config_.range_bits() - 1);
  share_ = half_range - blinded;  // s, so that r - s = w.x'
  const BigInt share_limit = kOne << config_.comparison_bits();
  if (share_.sign() < 0 || share_ >= share_limit) {
    throw ProtocolError("margin exceeds the negotiated comparison range");
  }
  share_ready_ = true;
  label_ready_ = false;
}

ProtocolMessage BobEvaluator::on_compare_bits(const ProtocolMessage& msg) {
  if (!share_ready_) throw ProtocolError("comparison before a blinded product");
  if (msg.session_id != session_id_) throw ProtocolError("session id mismatch");
  MillionaireResponder responder(
      share_, config_.comparison_bits(),
      rng_.derive("cmp-" + std::to_string(classifications_)));
  ++classifications_;
  ProtocolMessage reply = responder.on_bits(msg);
  counters_.elements_to_data_owner += decode_cipher_list(reply.payload).items.size();
  return reply;
}

void BobEvaluator::on_result(const ProtocolMessage& msg) {
  if (msg.type != MsgType::kControl) throw ProtocolError("expected result control");
  const ControlPayload ctl = decode_control(msg.payload);
  if (ctl.tag != "cmp-result" || ctl.data.size() != 1) {
    throw ProtocolError("malformed comparison result");
  }
  label_ = ctl.data[0] ? 1 : -1;
  label_ready_ = true;
  share_ready_ = false;
}

int BobEvaluator::label() const {
  if (!label_ready_) throw ProtocolError("label not available yet");
  return label_;
}

CarolEvaluator::CarolEvaluator(PublicKey model_pk, EvalConfig config, Rng rng)
    : model_pk_(std::move(model_pk)),
      config_(std::move(config)),
      codec_(config_.scale_constant, model_pk_.modulus),
      rng_(rng),
      comparison_keys_(keygen(config_.key_bits, rng_)) {}

ProtocolMessage CarolEvaluator::on_weights(const ProtocolMessage& msg,
                                           const SparseBinaryVector& x) {
  if (phase_ == EvaluatorPhase::kAborted) throw ProtocolError("session aborted");
  if (phase_ != EvaluatorPhase::kAwaitWeights) {
    throw ProtocolError("out-of-order message for this phase");
  }
  if (msg.type != MsgType::kEncVector) throw ProtocolError("expected weight vector");
  const CipherListPayload payload = decode_cipher_list(msg.payload);
  if (payload.scale != 1) throw ProtocolError("weights must arrive at scale 1");
  validate(x);
  if (x.dim != payload.items.size()) throw ProtocolError("instance dimension mismatch");
  if (!session_id_set_) {
    session_id_ = msg.session_id;
    session_id_set_ = true;
  }

  // Binary instance: the inner product is a plain ciphertext product,
  // exponent 1 throughout, scale stays 1.
  ScaledCiphertext product{encrypt_plain(model_pk_, BigInt(0)), 1};
  for (std::uint64_t idx : x.indices) {
    product = scaled_add(model_pk_, product, ScaledCiphertext{payload.items[idx], 1});
  }

  const BigInt half_range = kOne << (config_.range_bits() - 1);
  const BigInt u = rng_.below_big(half_range);
  share_ = u + half_range;  // r in [2^(l-1), 2^l)
  const BigInt neg_u = u.is_zero() ? BigInt(0) : model_pk_.modulus - u;
  const ScaledCiphertext blind{encrypt(model_pk_, neg_u, rng_), 1};
  counters_.encryptions += 1;

  CipherListPayload out;
  out.scale = 1;
  out.items.push_back(scaled_add(model_pk_, product, blind).cipher);
  counters_.elements_to_model_owner += 1;
  phase_ = EvaluatorPhase::kAwaitCompareResponse;
  comparison_ = std::make_unique<MillionaireEvaluator>(
      share_, config_.comparison_bits(), comparison_keys_, rng_.derive("cmp"));
  return make_message(session_id_, MsgType::kEncScalars, encode_cipher_list(out));
}

ProtocolMessage CarolEvaluator::bits_message() {
  if (phase_ != EvaluatorPhase::kAwaitCompareResponse || !comparison_) {
    throw ProtocolError("comparison bits requested out of order");
  }
  ProtocolMessage msg = comparison_->bits_message(session_id_);
  counters_ += comparison_->counters();
  return msg;
}

ProtocolMessage CarolEvaluator::on_compare_response(const ProtocolMessage& msg) {
  if (phase_ != EvaluatorPhase::kAwaitCompareResponse || !comparison_) {
    throw ProtocolError("out-of-order message for this phase");
  }
  const OpCounters before = comparison_->counters();
  const bool greater = comparison_->on_response(msg);
  counters_.decryptions += comparison_->counters().decryptions - before.decryptions;
  label_ = greater ? 1 : -1;
  comparison_.reset();
  phase_ = EvaluatorPhase::kAwaitWeights;  // reusable for the next instance

  ControlPayload ctl;
  ctl.tag = "cmp-result";
  ctl.data = {static_cast<std::uint8_t>(greater ? 1 : 0)};
  return make_message(session_id_, MsgType::kControl, encode_control(ctl));
}

int CarolEvaluator::label() const {
  if (label_ == 0) throw ProtocolError("label not available yet");
  return label_;
}

int plaintext_label(const CodecParams& codec, const std::vector<double>& weights,
                    const SparseBinaryVector& x) {
  BigInt fixed(0);
  for (std::uint64_t idx : x.indices) {
    if (idx >= weights.size()) throw std::out_of_range("plaintext_label: index out of range");
    fixed += codec.to_fixed(weights[idx]);
  }
  return fixed.sign() > 0 ? 1 : -1;
}

}  // namespace ppsf
