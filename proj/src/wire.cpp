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

#include "ppsf/wire.hpp"

namespace ppsf {

std::vector<std::uint8_t> serialize_message(const ProtocolMessage& msg) {
  ByteWriter w;
  w.put_u8(msg.version);
  w.put_raw(msg.session_id);
  w.put_u8(static_cast<std::uint8_t>(msg.type));
  w.put_raw(msg.payload);
  return w.take();
}

ProtocolMessage parse_message(std::span<const std::uint8_t> body) {
  ByteReader r(body);
  ProtocolMessage msg;
  msg.version = r.get_u8();
  if (msg.version != kProtocolVersion) {
    throw ProtocolError("message version " + std::to_string(msg.version) +
                        " unsupported");
  }
  const auto id = r.get_raw(msg.session_id.size());
  std::copy(id.begin(), id.end(), msg.session_id.begin());
  const std::uint8_t tag = r.get_u8();
  if (tag < static_cast<std::uint8_t>(MsgType::kHandshake) ||
      tag > static_cast<std::uint8_t>(MsgType::kAbort)) {
    throw ProtocolError("unknown message type tag " + std::to_string(tag));
  }
  msg.type = static_cast<MsgType>(tag);
  msg.payload = r.get_raw(r.remaining());
  return msg;
}

std::vector<std::uint8_t> frame_message(const ProtocolMessage& msg) {
  const auto body = serialize_message(msg);
  ByteWriter w;
  w.put_u32(static_cast<std::uint32_t>(body.size()));
  w.put_raw(body);
  return w.take();
}

std::vector<std::uint8_t> encode_handshake(const Handshake& h) {
  ByteWriter w;
  w.put_u32(h.key_bits);
  w.put_bigint(h.modulus);
  w.put_bigint(h.generator);
  w.put_bigint(h.scale_constant);
  w.put_u64(h.dim);
  w.put_u64(h.block_size);
  w.put_string(format_double(h.eta));
  w.put_string(format_double(h.reg_lambda));
  w.put_string(format_double(h.blind_bound));
  w.put_bigint(h.q_domain);
  w.put_u8(static_cast<std::uint8_t>(h.kind));
  w.put_u32(h.max_frame);
  return w.take();
}

Handshake decode_handshake(std::span<const std::uint8_t> payload) {
  ByteReader r(payload);
  Handshake h;
  h.key_bits = r.get_u32();
  h.modulus = r.get_bigint();
  h.generator = r.get_bigint();
  h.scale_constant = r.get_bigint();
  h.dim = r.get_u64();
  h.block_size = r.get_u64();
  h.eta = parse_double(r.get_string());
  h.reg_lambda = parse_double(r.get_string());
  h.blind_bound = parse_double(r.get_string());
  h.q_domain = r.get_bigint();
  const std::uint8_t kind = r.get_u8();
  if (kind > 1) throw ParseError("handshake: bad session kind");
  h.kind = static_cast<SessionKind>(kind);
  h.max_frame = r.get_u32();
  if (!r.exhausted()) throw ParseError("handshake: trailing bytes");
  return h;
}

PublicKey public_key_from_handshake(const Handshake& h) {
  ByteWriter w;
  w.put_bigint(h.modulus);
  w.put_bigint(h.generator);
  w.put_bigint(BigInt(static_cast<long>(h.modulus.bit_length())));
  return parse_public_key(w.data());
}

std::vector<std::uint8_t> encode_cipher_list(const CipherListPayload& p) {
  ByteWriter w;
  w.put_u8(p.scale);
  w.put_blob(p.aux);
  w.put_u32(static_cast<std::uint32_t>(p.items.size()));
  for (const auto& c : p.items) w.put_bigint(c.value);
  return w.take();
}

CipherListPayload decode_cipher_list(std::span<const std::uint8_t> payload) {
  ByteReader r(payload);
  CipherListPayload p;
  p.scale = r.get_u8();
  p.aux = r.get_blob();
  const std::uint32_t count = r.get_u32();
  p.items.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) p.items.push_back(Ciphertext{r.get_bigint()});
  if (!r.exhausted()) throw ParseError("cipher list: trailing bytes");
  return p;
}

std::vector<std::uint8_t> encode_plain_scalars(const std::vector<BigInt>& values) {
  ByteWriter w;
  w.put_u32(static_cast<std::uint32_t>(values.size()));
  for (const auto& v : values) w.put_bigint(v);
  return w.take();
}

std::vector<BigInt> decode_plain_scalars(std::span<const std::uint8_t> payload) {
  ByteReader r(payload);
  const std::uint32_t count = r.get_u32();
  std::vector<BigInt> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) out.push_back(r.get_bigint());
  if (!r.exhausted()) throw ParseError("plain scalars: trailing bytes");
  return out;
}

std::vector<std::uint8_t> encode_control(const ControlPayload& p) {
  ByteWriter w;
  w.put_string(p.tag);
  w.put_blob(p.data);
  return w.take();
}

ControlPayload decode_control(std::span<const std::uint8_t> payload) {
  ByteReader r(payload);
  ControlPayload p;
  p.tag = r.get_string();
  p.data = r.get_blob();
  if (!r.exhausted()) throw ParseError("control: trailing bytes");
  return p;
}

std::vector<std::uint8_t> encode_abort(const std::string& reason) {
  ByteWriter w;
  w.put_string(reason);
  return w.take();
}

std::string decode_abort(std::span<const std::uint8_t> payload) {
  ByteReader r(payload);
  std::string reason = r.get_string();
  if (!r.exhausted()) throw ParseError("abort: trailing bytes");
  return reason;
}

}  // namespace ppsf
