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

#ifndef PPSF_PAILLIER_HPP_
#define PPSF_PAILLIER_HPP_

#include <vector>

#include "ppsf/bignum.hpp"
#include "ppsf/rng.hpp"

namespace ppsf {

/// Paillier public key. The generator is fixed to g = N + 1, which satisfies
/// the scheme's requirement for every valid modulus and reduces g^m mod N^2
/// to one multiplication: (1 + mN).
struct PublicKey {
  BigInt modulus;        // N, product of two distinct odd primes
  BigInt generator;      // g = N + 1
  unsigned bits = 0;     // bit length of N
  BigInt modulus_sq;     // cached N^2

  BigInt half_modulus() const { return (modulus - BigInt(1)) >> 1; }
};

struct PrivateKey {
  BigInt lambda_key;  // lcm(p-1, q-1)
  BigInt mu;          // inverse of L(g^lambda mod N^2) mod N
};

struct KeyPair {
  PublicKey pub;
  PrivateKey priv;
};

/// Ciphertext in Z_{N^2}. Honest encryptions are always units mod N^2, which
/// the negative-exponent rule relies on.
struct Ciphertext {
  BigInt value;

  bool operator==(const Ciphertext& o) const = default;
};

/// Generates a key pair with an exactly `bits`-bit modulus from two random
/// primes of bits/2 bits each. Requires bits >= 16 and even; key sizes below
/// any real security floor are deliberately allowed so tests can run
/// exhaustive oracles over tiny plaintext spaces.
KeyPair keygen(unsigned bits, Rng& rng);

/// Builds a key pair from explicit odd primes, for tests and toy fields.
KeyPair keypair_from_primes(const BigInt& p, const BigInt& q);

/// E[m] = g^m * r^N mod N^2 with r a fresh uniform unit of Z_N.
Ciphertext encrypt(const PublicKey& pk, const BigInt& m, Rng& rng);

/// Encryption with caller-chosen blinding r (must be a unit of Z_N).
Ciphertext encrypt_with(const PublicKey& pk, const BigInt& m, const BigInt& r);

/// g^m mod N^2 without blinding. Only for values that are public anyway
/// (protocol constants); never for data.
Ciphertext encrypt_plain(const PublicKey& pk, const BigInt& m);

BigInt decrypt(const PrivateKey& sk, const PublicKey& pk, const Ciphertext& c);

/// D[hom_add(E[x], E[y])] = (x + y) mod N.
Ciphertext hom_add(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b);

/// D[hom_scale(E[x], k)] = (k * x) mod N. Negative k is realized by raising
/// the modular inverse of the ciphertext to |k|.
Ciphertext hom_scale(const PublicKey& pk, const Ciphertext& c, const BigInt& k);
Ciphertext hom_scale(const PublicKey& pk, const Ciphertext& c, long k);

/// Multiplies by a fresh encryption of zero: same plaintext, new randomness.
Ciphertext rerandomize(const PublicKey& pk, const Ciphertext& c, Rng& rng);

std::vector<std::uint8_t> serialize_public_key(const PublicKey& pk);
PublicKey parse_public_key(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> serialize_private_key(const PrivateKey& sk);
PrivateKey parse_private_key(std::span<const std::uint8_t> bytes);

}  // namespace ppsf

#endif  // PPSF_PAILLIER_HPP_
