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

#include "ppsf/codec.hpp"

#include <cmath>
#include <stdexcept>

namespace ppsf {

namespace {
const BigInt kOne(1);
const BigInt kTwo(2);
}  // namespace

CodecParams::CodecParams(BigInt scale_constant, BigInt modulus)
    : c_(std::move(scale_constant)), n_(std::move(modulus)) {
  if (c_ < kOne) throw std::invalid_argument("codec: scale constant must be >= 1");
  half_ = (n_ - kOne) / kTwo;
  bound_ = half_ / c_;
  if (bound_ < kOne) {
    throw std::invalid_argument("codec: domain bound below 1; modulus too small for C");
  }
}

BigInt CodecParams::to_fixed(double x) const {
  if (!std::isfinite(x)) throw OverflowError("codec: non-finite value");
  if (x == 0.0) return BigInt(0);
  const bool negative = x < 0.0;
  const double magnitude = std::fabs(x);
  // Exact floor(C * magnitude): the double is a dyadic rational
  // mant * 2^(e-53), so C * mant is computed in big integers and the final
  // shift floors a nonnegative quantity.
  int exp2 = 0;
  const double mant = std::frexp(magnitude, &exp2);
  const auto mant_int = static_cast<unsigned long>(std::ldexp(mant, 53));
  BigInt value = c_ * BigInt(mant_int);
  const int shift = exp2 - 53;
  value = shift >= 0 ? value << static_cast<unsigned>(shift)
                     : value >> static_cast<unsigned>(-shift);
  return negative ? -value : value;
}

BigInt CodecParams::to_fixed_checked(double x) const {
  BigInt fixed = to_fixed(x);
  if (fixed.abs() > c_ * bound_) {
    throw OverflowError("codec: magnitude exceeds domain bound");
  }
  return fixed;
}

BigInt CodecParams::encode(double x) const {
  BigInt fixed = to_fixed_checked(x);
  return fixed.sign() < 0 ? n_ + fixed : fixed;
}

BigInt CodecParams::to_signed(const BigInt& m) const {
  if (m.sign() < 0 || m >= n_) throw std::out_of_range("codec: residue outside Z_N");
  return m > half_ ? m - n_ : m;
}

BigInt CodecParams::scale_factor(unsigned scale) const {
  BigInt f = kOne;
  for (unsigned i = 0; i < scale; ++i) f *= c_;
  return f;
}

double CodecParams::decode(const BigInt& m, unsigned scale) const {
  const BigInt value = to_signed(m);
  return value.to_double() / scale_factor(scale).to_double();
}

ScaledCiphertext encrypt_scaled(const PublicKey& pk, const CodecParams& codec,
                                double x, Rng& rng) {
  return ScaledCiphertext{encrypt(pk, codec.encode(x), rng), 1};
}

double decrypt_scaled(const PrivateKey& sk, const PublicKey& pk,
                      const CodecParams& codec, const ScaledCiphertext& sc) {
  return codec.decode(decrypt(sk, pk, sc.cipher), sc.scale);
}

ScaledCiphertext scaled_add(const PublicKey& pk, const ScaledCiphertext& a,
                            const ScaledCiphertext& b) {
  if (a.scale != b.scale) {
    throw ScaleMismatchError("scaled_add: operands at scales " +
                             std::to_string(a.scale) + " and " +
                             std::to_string(b.scale));
  }
  return ScaledCiphertext{hom_add(pk, a.cipher, b.cipher), a.scale};
}

ScaledCiphertext scaled_mul_plain(const PublicKey& pk, const CodecParams& codec,
                                  const ScaledCiphertext& a, double y) {
  const BigInt exponent = codec.to_fixed_checked(y);
  return ScaledCiphertext{hom_scale(pk, a.cipher, exponent), a.scale + 1};
}

ScaledCiphertext mul_int(const PublicKey& pk, const ScaledCiphertext& a,
                         const BigInt& k) {
  return ScaledCiphertext{hom_scale(pk, a.cipher, k), a.scale};
}

bool codec_feasible(unsigned key_bits, const BigInt& scale_constant,
                    double max_magnitude) {
  if (max_magnitude <= 0.0 || !std::isfinite(max_magnitude)) return false;
  const double log2_c = static_cast<double>(scale_constant.bit_length());
  const double needed = 2.0 * (2.0 * log2_c + std::log2(max_magnitude));
  return needed < static_cast<double>(key_bits);
}

void check_codec_feasible(unsigned key_bits, const BigInt& scale_constant,
                          double max_magnitude) {
  if (!codec_feasible(key_bits, scale_constant, max_magnitude)) {
    throw std::invalid_argument(
        "codec: key size " + std::to_string(key_bits) +
        " too small for scale constant " + scale_constant.to_string() +
        " at max magnitude " + std::to_string(max_magnitude) +
        "; raise the key bits or lower C");
  }
}

}  // namespace ppsf
