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

#ifndef PPSF_CODEC_HPP_
#define PPSF_CODEC_HPP_

#include "ppsf/errors.hpp"
#include "ppsf/paillier.hpp"

namespace ppsf {

/// Fixed-point map between signed reals and Z_N. A real x is carried as
/// floor(C|x|) with sign, negatives as modular complements N - floor(C|x|).
/// The usable real magnitude is B = floor((N-1)/(2C)); beyond that the sign
/// halves of Z_N collide.
class CodecParams {
 public:
  CodecParams() = default;
  CodecParams(BigInt scale_constant, BigInt modulus);

  const BigInt& scale_constant() const { return c_; }
  const BigInt& modulus() const { return n_; }
  /// Largest representable magnitude B (an integer; the domain is [-B, B]).
  const BigInt& domain_bound() const { return bound_; }
  /// Midpoint (N-1)/2; fixed-point residues above it decode as negative.
  const BigInt& half_modulus() const { return half_; }

  /// floor(C|x|) with the sign of x, as a signed integer. This is the raw
  /// fixed-point form, used directly as a homomorphic exponent.
  BigInt to_fixed(double x) const;
  /// to_fixed with the domain-D check; throws OverflowError past the bound.
  BigInt to_fixed_checked(double x) const;

  /// Z_N residue for x at scale 1: nonnegative -> floor(Cx),
  /// negative -> N - floor(C|x|). Throws OverflowError outside [-B, B].
  BigInt encode(double x) const;
  /// Signed interpretation of a residue divided by C^scale.
  double decode(const BigInt& m, unsigned scale = 1) const;
  /// Residue -> signed integer via the midpoint convention (no division).
  BigInt to_signed(const BigInt& m) const;
  /// C^scale as a BigInt.
  BigInt scale_factor(unsigned scale) const;

 private:
  BigInt c_;
  BigInt n_;
  BigInt bound_;
  BigInt half_;
};

/// Ciphertext whose plaintext carries a real value multiplied by C^scale.
/// The exponent is tracked explicitly so mixed-scale arithmetic is a hard
/// error rather than silent corruption.
struct ScaledCiphertext {
  Ciphertext cipher;
  unsigned scale = 1;
};

ScaledCiphertext encrypt_scaled(const PublicKey& pk, const CodecParams& codec,
                                double x, Rng& rng);
double decrypt_scaled(const PrivateKey& sk, const PublicKey& pk,
                      const CodecParams& codec, const ScaledCiphertext& sc);

/// Homomorphic addition of equal-scale values; ScaleMismatchError otherwise.
ScaledCiphertext scaled_add(const PublicKey& pk, const ScaledCiphertext& a,
                            const ScaledCiphertext& b);

/// Multiply by a real constant via the fixed-point exponent floor(C|y|);
/// the result's scale rises by one.
ScaledCiphertext scaled_mul_plain(const PublicKey& pk, const CodecParams& codec,
                                  const ScaledCiphertext& a, double y);

/// Multiply by an exact integer; the scale is unchanged.
ScaledCiphertext mul_int(const PublicKey& pk, const ScaledCiphertext& a,
                         const BigInt& k);

/// Key-size sanity check for a given scale constant and the largest real
/// magnitude the session may produce: 2*log2(C^2 * max_magnitude) must stay
/// below the key size, otherwise scale-2 intermediates can wrap.
bool codec_feasible(unsigned key_bits, const BigInt& scale_constant,
                    double max_magnitude);
void check_codec_feasible(unsigned key_bits, const BigInt& scale_constant,
                          double max_magnitude);

}  // namespace ppsf

#endif  // PPSF_CODEC_HPP_
