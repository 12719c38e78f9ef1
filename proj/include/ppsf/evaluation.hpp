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

#ifndef PPSF_EVALUATION_HPP_
#define PPSF_EVALUATION_HPP_

#include <cstdint>
#include <vector>

#include "ppsf/codec.hpp"
#include "ppsf/counters.hpp"
#include "ppsf/features.hpp"
#include "ppsf/logistic.hpp"
#include "ppsf/wire.hpp"

namespace ppsf {

struct EvalConfig {
  unsigned key_bits = 256;
  BigInt scale_constant = BigInt(1000000);
  /// Largest |w.x'| the session supports; sizes the comparison range.
  double margin_bound = 32.0;
  std::uint32_t max_frame = kDefaultMaxFrame;

  /// 2^range_bits bounds |fixed-point margin|*2; shares then live in
  /// [0, 2^(range_bits+1)) and the comparison runs one bit wider.
  unsigned range_bits() const;
  unsigned comparison_bits() const { return range_bits() + 1; }

  Handshake to_handshake(const PublicKey& pk, std::uint64_t dim) const;
  void check_handshake(const Handshake& h) const;
};

/// Additive share split of a fixed-point margin: carol_share - bob_share
/// equals the margin, both shares in [0, 2^bit_width).
struct EvalShares {
  BigInt carol_share;
  BigInt bob_share;
  unsigned bit_width = 0;
};

/// Bitwise secure comparison, evaluator side (the party holding r). The
/// evaluator owns a key pair generated for the comparison; the responder
/// only ever sees encrypted bits under it. Outcome: whether r > s.
class MillionaireEvaluator {
 public:
  /// Throws std::out_of_range unless 0 <= r < 2^bit_width.
  MillionaireEvaluator(BigInt r, unsigned bit_width, KeyPair comparison_keys, Rng rng);

  ProtocolMessage bits_message(const SessionId& sid);
  /// Decrypts the shuffled response; r > s exactly when some value is zero.
  bool on_response(const ProtocolMessage& msg);

  const OpCounters& counters() const { return counters_; }

 private:
  BigInt r_;
  unsigned bit_width_;
  KeyPair keys_;
  Rng rng_;
  OpCounters counters_;
  bool sent_ = false;
};

/// Responder side (the party holding s). For each bit position j it forms
/// s_j - r_j + 1 + 3 * (count of higher-bit disagreements) homomorphically,
/// multiplicatively blinds by a fresh unit, rerandomizes, and shuffles; a
/// zero survives exactly when r's highest differing bit is a one.
class MillionaireResponder {
 public:
  MillionaireResponder(BigInt s, unsigned bit_width, Rng rng);

  ProtocolMessage on_bits(const ProtocolMessage& msg);

 private:
  BigInt s_;
  unsigned bit_width_;
  Rng rng_;
};

/// Plain-trust reference: runs both roles in process over fresh toy keys.
bool secure_compare(const BigInt& r, const BigInt& s, unsigned bit_width,
                    const KeyPair& comparison_keys, Rng& rng);

enum class EvaluatorPhase : std::uint8_t {
  kAwaitWeights,
  kAwaitCompareResponse,
  kDone,
  kAborted,
};

/// Model-owner endpoint of the evaluation protocol. E[w] is built once and
/// reused across classifications.
class BobEvaluator {
 public:
  BobEvaluator(KeyPair keys, EvalConfig config, std::vector<double> weights, Rng rng);

  ProtocolMessage handshake_message() const;
  /// E[w] at scale 1; d encryptions on first call, cached afterwards.
  ProtocolMessage weights_message();
  /// Decrypts the blinded inner product and forms the comparison share.
  void on_blinded_product(const ProtocolMessage& msg);
  /// Millionaire response for the current share.
  ProtocolMessage on_compare_bits(const ProtocolMessage& msg);
  /// Final predicate bit from the evaluator; both parties learn it.
  void on_result(const ProtocolMessage& msg);

  int label() const;  // +1 / -1 after a completed run
  const PublicKey& public_key() const { return keys_.pub; }
  const SessionId& session_id() const { return session_id_; }
  const OpCounters& counters() const { return counters_; }

 private:
  KeyPair keys_;
  EvalConfig config_;
  CodecParams codec_;
  std::vector<double> weights_;
  Rng rng_;
  SessionId session_id_{};
  std::vector<Ciphertext> cached_weights_;
  BigInt share_;  // s of the current classification
  bool share_ready_ = false;
  int label_ = 0;
  bool label_ready_ = false;
  unsigned classifications_ = 0;
  OpCounters counters_;
};

/// Data-owner endpoint: learns only sign(w.x'). An exact zero margin at
/// codec resolution classifies as -1 (legitimate mail wins ties).
class CarolEvaluator {
 public:
  CarolEvaluator(PublicKey model_pk, EvalConfig config, Rng rng);

  /// Consumes E[w] and the instance; emits E[w.x' - u] (one element).
  ProtocolMessage on_weights(const ProtocolMessage& msg, const SparseBinaryVector& x);
  /// Comparison bits for the retained share.
  ProtocolMessage bits_message();
  /// Decrypts the comparison response; emits the shared result bit.
  ProtocolMessage on_compare_response(const ProtocolMessage& msg);

  int label() const;
  EvaluatorPhase phase() const { return phase_; }
  const OpCounters& counters() const { return counters_; }

 private:
  PublicKey model_pk_;
  EvalConfig config_;
  CodecParams codec_;
  Rng rng_;
  KeyPair comparison_keys_;  // generated once, reused across classifications
  SessionId session_id_{};
  bool session_id_set_ = false;
  EvaluatorPhase phase_ = EvaluatorPhase::kAwaitWeights;
  BigInt share_;  // r of the current classification
  std::unique_ptr<MillionaireEvaluator> comparison_;
  int label_ = 0;
  OpCounters counters_;
};

/// Plaintext reference: +1 iff w.x' > 0 at codec resolution, ties to -1.
int plaintext_label(const CodecParams& codec, const std::vector<double>& weights,
                    const SparseBinaryVector& x);

}  // namespace ppsf

#endif  // PPSF_EVALUATION_HPP_
