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

#ifndef PPSF_WIRE_HPP_
#define PPSF_WIRE_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ppsf/errors.hpp"
#include "ppsf/paillier.hpp"
#include "ppsf/serial.hpp"

namespace ppsf {

inline constexpr std::uint8_t kProtocolVersion = 1;
inline constexpr std::uint32_t kDefaultMaxFrame = 1u << 26;

enum class MsgType : std::uint8_t {
  kHandshake = 1,
  kEncVector = 2,    // encrypted weight vectors
  kEncScalars = 3,   // per-instance encrypted streams
  kPlainScalars = 4,
  kCompareBits = 5,
  kControl = 6,
  kAbort = 7,
};

using SessionId = std::array<std::uint8_t, 8>;

/// One length-framed unit of traffic. On the wire: 4-byte big-endian body
/// length, then version, session id, type tag, payload.
struct ProtocolMessage {
  std::uint8_t version = kProtocolVersion;
  SessionId session_id{};
  MsgType type = MsgType::kControl;
  std::vector<std::uint8_t> payload;

  bool operator==(const ProtocolMessage& o) const = default;
};

/// Body serialization (without the outer length prefix; transports own that).
std::vector<std::uint8_t> serialize_message(const ProtocolMessage& msg);
/// Throws ProtocolError on unknown version or type tag, ParseError on
/// malformed bytes.
ProtocolMessage parse_message(std::span<const std::uint8_t> body);

/// Frame = 4-byte big-endian length + body.
std::vector<std::uint8_t> frame_message(const ProtocolMessage& msg);

enum class SessionKind : std::uint8_t { kTraining = 0, kEvaluation = 1 };

/// Opening message of every session: both parties must compute with
/// bit-identical parameters, so reals travel as decimal strings and all
/// integers in the big-int field encoding.
struct Handshake {
  std::uint32_t key_bits = 0;
  BigInt modulus;             // N
  BigInt generator;           // g
  BigInt scale_constant;      // C
  std::uint64_t dim = 0;      // d
  std::uint64_t block_size = 0;  // K
  double eta = 0.0;
  double reg_lambda = 0.0;
  double blind_bound = 0.0;   // R
  BigInt q_domain;            // multiplicative blind domain size
  SessionKind kind = SessionKind::kTraining;
  std::uint32_t max_frame = kDefaultMaxFrame;

  bool operator==(const Handshake& o) const = default;
};

std::vector<std::uint8_t> encode_handshake(const Handshake& h);
Handshake decode_handshake(std::span<const std::uint8_t> payload);

/// Rebuilds the model owner's public key from handshake fields, validating
/// the generator convention.
PublicKey public_key_from_handshake(const Handshake& h);

/// Payload of kEncVector / kEncScalars / kCompareBits: a common fixed-point
/// scale exponent and the ciphertext list. kCompareBits additionally carries
/// the comparison public key in `aux`.
struct CipherListPayload {
  std::uint8_t scale = 1;
  std::vector<Ciphertext> items;
  std::vector<std::uint8_t> aux;
};

std::vector<std::uint8_t> encode_cipher_list(const CipherListPayload& p);
CipherListPayload decode_cipher_list(std::span<const std::uint8_t> payload);

std::vector<std::uint8_t> encode_plain_scalars(const std::vector<BigInt>& values);
std::vector<BigInt> decode_plain_scalars(std::span<const std::uint8_t> payload);

struct ControlPayload {
  std::string tag;
  std::vector<std::uint8_t> data;
};

std::vector<std::uint8_t> encode_control(const ControlPayload& p);
ControlPayload decode_control(std::span<const std::uint8_t> payload);

std::vector<std::uint8_t> encode_abort(const std::string& reason);
std::string decode_abort(std::span<const std::uint8_t> payload);

}  // namespace ppsf

#endif  // PPSF_WIRE_HPP_
