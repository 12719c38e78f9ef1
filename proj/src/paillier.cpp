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

#include "ppsf/paillier.hpp"

#include <stdexcept>

#include "ppsf/serial.hpp"

namespace ppsf {

namespace {

const BigInt kOne(1);

// L(u) = (u - 1) / N, defined on u = 1 mod N.
BigInt ell(const BigInt& u, const BigInt& n) { return (u - kOne) / n; }

// Random prime with exactly `bits` bits. The top two bits are set so the
// product of two such primes has exactly 2*bits bits.
BigInt random_prime(unsigned bits, Rng& rng) {
  if (bits < 8) throw std::invalid_argument("random_prime: need at least 8 bits");
  for (int attempt = 0; attempt < 10000; ++attempt) {
    auto buf = rng.bytes((bits + 7) / 8);
    BigInt candidate = BigInt::from_magnitude_bytes(buf).mod(kOne << bits);
    candidate = candidate + (kOne << (bits - 1)) + (kOne << (bits - 2));
    candidate = candidate.mod(kOne << bits);
    if (candidate.bit_length() != bits) continue;
    BigInt p = candidate.next_prime();
    if (p.bit_length() != bits) continue;  // search ran past the top
    return p;
  }
  throw std::runtime_error("random_prime: search exhausted");
}

PublicKey make_public(const BigInt& n) {
  PublicKey pk;
  pk.modulus = n;
  pk.generator = n + kOne;
  pk.bits = static_cast<unsigned>(n.bit_length());
  pk.modulus_sq = n * n;
  return pk;
}

void check_plaintext(const PublicKey& pk, const BigInt& m) {
  if (m.sign() < 0 || m >= pk.modulus) {
    throw std::out_of_range("paillier: plaintext outside Z_N");
  }
}

}  // namespace

KeyPair keypair_from_primes(const BigInt& p, const BigInt& q) {
  if (!p.probably_prime() || !q.probably_prime()) {
    throw std::invalid_argument("keypair_from_primes: inputs must be prime");
  }
  if (p == q || !p.is_odd() || !q.is_odd()) {
    throw std::invalid_argument("keypair_from_primes: need distinct odd primes");
  }
  const BigInt n = p * q;
  const BigInt p1 = p - kOne;
  const BigInt q1 = q - kOne;
  if (n.gcd(p1 * q1) != kOne) {
    throw std::invalid_argument("keypair_from_primes: gcd(pq,(p-1)(q-1)) != 1");
  }
  KeyPair kp;
  kp.pub = make_public(n);
  kp.priv.lambda_key = p1.lcm(q1);
  // mu = L(g^lambda mod N^2)^-1 mod N
  const BigInt gl = kp.pub.generator.powmod(kp.priv.lambda_key, kp.pub.modulus_sq);
  kp.priv.mu = ell(gl, n).invmod(n);
  return kp;
}

KeyPair keygen(unsigned bits, Rng& rng) {
  if (bits < 16) throw std::invalid_argument("keygen: key size below 16 bits");
  if (bits % 2 != 0) throw std::invalid_argument("keygen: key size must be even");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    BigInt p = random_prime(bits / 2, rng);
    BigInt q = random_prime(bits / 2, rng);
    if (p == q) continue;
    const BigInt n = p * q;
    if (n.bit_length() != bits) continue;
    if (n.gcd((p - kOne) * (q - kOne)) != kOne) continue;
    return keypair_from_primes(p, q);
  }
  throw std::runtime_error("keygen: prime search exhausted");
}

Ciphertext encrypt_with(const PublicKey& pk, const BigInt& m, const BigInt& r) {
  check_plaintext(pk, m);
  if (r.sign() <= 0 || r >= pk.modulus || r.gcd(pk.modulus) != kOne) {
    throw std::invalid_argument("paillier: blinding r must be a unit of Z_N");
  }
  // g^m = 1 + mN mod N^2 for g = N + 1.
  const BigInt gm = (kOne + m * pk.modulus).mod(pk.modulus_sq);
  const BigInt rn = r.powmod(pk.modulus, pk.modulus_sq);
  return Ciphertext{(gm * rn).mod(pk.modulus_sq)};
}

Ciphertext encrypt(const PublicKey& pk, const BigInt& m, Rng& rng) {
  return encrypt_with(pk, m, rng.unit_mod(pk.modulus));
}

Ciphertext encrypt_plain(const PublicKey& pk, const BigInt& m) {
  check_plaintext(pk, m);
  return Ciphertext{(kOne + m * pk.modulus).mod(pk.modulus_sq)};
}

BigInt decrypt(const PrivateKey& sk, const PublicKey& pk, const Ciphertext& c) {
  if (c.value.sign() < 0 || c.value >= pk.modulus_sq) {
    throw std::out_of_range("paillier: ciphertext outside Z_{N^2}");
  }
  if (c.value.gcd(pk.modulus_sq) != kOne) {
    throw std::domain_error("paillier: ciphertext not a unit mod N^2");
  }
  const BigInt u = c.value.powmod(sk.lambda_key, pk.modulus_sq);
  return (ell(u, pk.modulus) * sk.mu).mod(pk.modulus);
}

Ciphertext hom_add(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b) {
  return Ciphertext{(a.value * b.value).mod(pk.modulus_sq)};
}

Ciphertext hom_scale(const PublicKey& pk, const Ciphertext& c, const BigInt& k) {
  if (k.sign() >= 0) {
    return Ciphertext{c.value.powmod(k, pk.modulus_sq)};
  }
  BigInt inv;
  try {
    inv = c.value.invmod(pk.modulus_sq);
  } catch (const std::domain_error&) {
    throw std::domain_error("paillier: ciphertext not invertible for negative scaling");
  }
  return Ciphertext{inv.powmod(-k, pk.modulus_sq)};
}

Ciphertext hom_scale(const PublicKey& pk, const Ciphertext& c, long k) {
  return hom_scale(pk, c, BigInt(k));
}

Ciphertext rerandomize(const PublicKey& pk, const Ciphertext& c, Rng& rng) {
  return hom_add(pk, c, encrypt(pk, BigInt(0), rng));
}

std::vector<std::uint8_t> serialize_public_key(const PublicKey& pk) {
  ByteWriter w;
  w.put_bigint(pk.modulus);
  w.put_bigint(pk.generator);
  w.put_bigint(BigInt(static_cast<long>(pk.bits)));
  return w.take();
}

PublicKey parse_public_key(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  BigInt n = r.get_bigint();
  BigInt g = r.get_bigint();
  BigInt bits = r.get_bigint();
  if (n.sign() <= 0 || g != n + kOne) {
    throw ParseError("public key: generator must equal N + 1");
  }
  if (bits != BigInt(static_cast<long>(n.bit_length()))) {
    throw ParseError("public key: bits field disagrees with modulus");
  }
  return make_public(n);
}

std::vector<std::uint8_t> serialize_private_key(const PrivateKey& sk) {
  ByteWriter w;
  w.put_bigint(sk.lambda_key);
  w.put_bigint(sk.mu);
  return w.take();
}

PrivateKey parse_private_key(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  PrivateKey sk;
  sk.lambda_key = r.get_bigint();
  sk.mu = r.get_bigint();
  return sk;
}

}  // namespace ppsf
