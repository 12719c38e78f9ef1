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

#ifndef PPSF_SERIAL_HPP_
#define PPSF_SERIAL_HPP_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppsf/bignum.hpp"

namespace ppsf {

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Append-only byte sink for the wire formats. All multi-byte integers are
/// big-endian. Big integers use: 1 sign byte (0x00 nonnegative, 0x01
/// negative) + 4-byte length + big-endian magnitude.
class ByteWriter {
 public:
  void put_u8(std::uint8_t v) { buf_.push_back(v); }
  void put_u32(std::uint32_t v);
  void put_u64(std::uint64_t v);
  void put_f64(double v);  // IEEE-754 bits, big-endian
  void put_raw(std::span<const std::uint8_t> bytes);
  void put_blob(std::span<const std::uint8_t> bytes);  // u32 length prefix
  void put_string(const std::string& s);
  void put_bigint(const BigInt& v);

  const std::vector<std::uint8_t>& data() const { return buf_; }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

/// Bounds-checked reader over a byte span; throws ParseError on underrun.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t get_u8();
  std::uint32_t get_u32();
  std::uint64_t get_u64();
  double get_f64();
  std::vector<std::uint8_t> get_raw(std::size_t count);
  std::vector<std::uint8_t> get_blob();
  std::string get_string();
  BigInt get_bigint();

  bool exhausted() const { return pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(std::size_t count) const {
    if (pos_ + count > data_.size()) throw ParseError("ByteReader: truncated input");
  }
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& s);

}  // namespace ppsf

#endif  // PPSF_SERIAL_HPP_
