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

#ifndef PPSF_TRAINING_HPP_
#define PPSF_TRAINING_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ppsf/blinding.hpp"
#include "ppsf/codec.hpp"
#include "ppsf/counters.hpp"
#include "ppsf/features.hpp"
#include "ppsf/logistic.hpp"
#include "ppsf/wire.hpp"

namespace ppsf {

/// Parameters both parties must agree on before a training session. They
/// travel in the handshake; any disagreement aborts before data moves.
struct TrainingConfig {
  unsigned key_bits = 256;
  BigInt scale_constant = BigInt(1000000);  // C
  double eta = 0.001;
  double reg_lambda = 0.0;
  std::uint64_t block_size = 100;  // K, instances per online update

  /// Additive blind range R: blinds are uniform on [-R, R]. This must stay
  /// small. The model owner computes e^(margin - r) in fixed point, so each
  /// unit of R costs a factor e of resolution; at C = 10^6 an R of 2 keeps
  /// the end-to-end weight error near 1e-5 relative, while R beyond ln(C)
  /// (about 14 here) floors e^(margin - r) to zero outright and destroys
  /// the round. The bounded range is a deliberate trade: it masks rather
  /// than information-theoretically hides the margins.
  double blind_bound = 2.0;

  /// Multiplicative blind domain: q is drawn from [1, q_domain] with
  /// P(q) proportional to 1/q. The reciprocal pass reintroduces q against a
  /// fixed-point value with resolution 1/C, so q_domain must stay well
  /// below C for the sigmoid to survive; the default keeps the expected
  /// error near 5e-6 at C = 10^6.
  BigInt q_domain = BigInt(32);

  /// Abort threshold on |y w.x|; also sizes the key feasibility check,
  /// which must accommodate e^(margin_bound + blind_bound) at scale 2.
  double margin_bound = 32.0;

  /// Batch mode: stop early once the model owner's max-norm weight change
  /// falls below this after a round close. 0 disables the probe. Local to
  /// the model owner; not a handshake field.
  double convergence_tol = 0.0;

  std::uint32_t max_frame = kDefaultMaxFrame;

  /// Largest real magnitude a session can lawfully produce.
  double max_session_magnitude() const;
  /// Throws when the key size cannot carry C^2-scaled intermediates.
  void check_feasible() const;

  Handshake to_handshake(const PublicKey& pk, std::uint64_t dim) const;
  /// Validates a received handshake against local expectations; throws
  /// ProtocolError naming the first mismatched field.
  void check_handshake(const Handshake& h, std::uint64_t dim) const;
};

enum class TrainerPhase : std::uint8_t {
  kRoundStart,
  kAwaitMargins,
  kAwaitScaled,
  kAwaitUpdate,
  kAborted,
};

enum class DataOwnerPhase : std::uint8_t {
  kAwaitWeights,
  kAwaitExponentials,
  kAwaitReciprocals,
  kDone,
  kAborted,
};

/// Model owner ("Bob") side of one training session. Owns the key pair and
/// the weight vector; drives rounds by shipping E[w] and closing them by
/// decrypting the updated vector. The private key never enters any message.
class BobTrainer {
 public:
  BobTrainer(KeyPair keys, TrainingConfig config, std::vector<double> initial_weights,
             Rng rng);

  ProtocolMessage handshake_message() const;

  /// Round opening: encrypts w at scale 1 (d encryptions).
  ProtocolMessage start_round();
  /// Decrypts the blinded margins, exponentiates, re-encrypts
  /// (n decryptions + n encryptions). Aborts on fixed-point overflow.
  ProtocolMessage on_blinded_margins(const ProtocolMessage& msg);
  /// Decrypts the multiplicatively blinded logits, inverts, re-encrypts at
  /// scale 1. Aborts on nonpositive values.
  ProtocolMessage on_scaled_logits(const ProtocolMessage& msg);
  /// Round close: decrypts the updated weight vector (d decryptions).
  void finish_round(const ProtocolMessage& msg);

  /// Multi-party batch aggregation: accepts one party's step-size-scaled
  /// encrypted gradient and re-opens the round for the next party.
  void collect_gradient(const ProtocolMessage& msg);
  /// Homomorphic sum of all collected gradients, one decrypt, one update.
  void commit_aggregate();

  /// Convergence probe for batch mode: max-norm change of the last round.
  double last_round_delta() const { return last_delta_; }

  const std::vector<double>& weights() const { return weights_; }
  Model model() const { return {weights_, config_.eta, config_.reg_lambda}; }
  const PublicKey& public_key() const { return keys_.pub; }
  const CodecParams& codec() const { return codec_; }
  const SessionId& session_id() const { return session_id_; }
  TrainerPhase phase() const { return phase_; }
  const OpCounters& counters() const { return counters_; }
  const StepTimings& timings() const { return timings_; }
  unsigned rounds_completed() const { return rounds_; }

 private:
  void expect(TrainerPhase phase, const ProtocolMessage& msg, MsgType type) const;
  [[noreturn]] void abort_session(const std::string& why);

  KeyPair keys_;
  TrainingConfig config_;
  CodecParams codec_;
  std::vector<double> weights_;
  Rng rng_;
  SessionId session_id_{};
  TrainerPhase phase_ = TrainerPhase::kRoundStart;
  OpCounters counters_;
  StepTimings timings_;
  unsigned rounds_ = 0;
  std::size_t round_n_ = 0;
  double last_delta_ = 0.0;
  std::vector<Ciphertext> gradient_sum_;  // multi-party accumulation
  std::size_t parties_collected_ = 0;
};

/// Data owner ("Alice") side of one round over one block. Blinds are drawn
/// fresh here and never leave the object; a new instance per round keeps
/// them single-use.
class AliceTrainer {
 public:
  /// gradient_only: emit E[eta * grad] without the weight rebase, for the
  /// multi-party aggregation path.
  AliceTrainer(PublicKey pk, TrainingConfig config, LabeledDataset block, Rng rng,
               bool gradient_only = false);

  /// Homomorphic margins E[y w.x - r] from E[w] (n encryptions of blinds).
  ProtocolMessage on_weights(const ProtocolMessage& msg);
  /// Unblinds the exponentials, adds 1, applies multiplicative blinds.
  ProtocolMessage on_exponentials(const ProtocolMessage& msg);
  /// Cancels q, assembles the encrypted gradient, applies the step size and
  /// weight rebase; returns the round-closing update vector.
  ProtocolMessage on_reciprocals(const ProtocolMessage& msg);

  DataOwnerPhase phase() const { return phase_; }
  const OpCounters& counters() const { return counters_; }
  const StepTimings& timings() const { return timings_; }

 private:
  void expect(DataOwnerPhase phase, const ProtocolMessage& msg, MsgType type) const;
  [[noreturn]] void abort_session(const std::string& why);

  PublicKey pk_;
  TrainingConfig config_;
  CodecParams codec_;
  LabeledDataset block_;
  Rng rng_;
  BlindingSampler sampler_;
  bool gradient_only_;
  SessionId session_id_{};
  bool session_id_set_ = false;
  DataOwnerPhase phase_ = DataOwnerPhase::kAwaitWeights;
  std::vector<Ciphertext> enc_weights_;
  std::vector<double> blinds_r_;
  std::vector<BigInt> blinds_q_;
  OpCounters counters_;
  StepTimings timings_;
};

}  // namespace ppsf

#endif  // PPSF_TRAINING_HPP_
