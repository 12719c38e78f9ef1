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

#include "ppsf/bignum.hpp"

#include <stdexcept>

namespace ppsf {

BigInt::BigInt(const std::string& decimal) {
  if (mpz_init_set_str(z_, decimal.c_str(), 10) != 0) {
    mpz_clear(z_);
    throw std::invalid_argument("BigInt: malformed decimal string: " + decimal);
  }
}

BigInt BigInt::from_magnitude_bytes(std::span<const std::uint8_t> be) {
  BigInt r;
  if (!be.empty()) mpz_import(r.z_, be.size(), 1, 1, 1, 0, be.data());
  return r;
}

std::vector<std::uint8_t> BigInt::magnitude_bytes() const {
  if (is_zero()) return {};
  std::size_t count = (mpz_sizeinbase(z_, 2) + 7) / 8;
  std::vector<std::uint8_t> out(count);
  std::size_t written = 0;
  mpz_export(out.data(), &written, 1, 1, 1, 0, z_);
  out.resize(written);
  return out;
}

std::string BigInt::to_string() const {
  char* s = mpz_get_str(nullptr, 10, z_);
  std::string out(s);
  void (*freefn)(void*, std::size_t) = nullptr;
  mp_get_memory_functions(nullptr, nullptr, &freefn);
  freefn(s, out.size() + 1);
  return out;
}

BigInt BigInt::operator+(const BigInt& o) const {
  BigInt r;
  mpz_add(r.z_, z_, o.z_);
  return r;
}

BigInt BigInt::operator-(const BigInt& o) const {
  BigInt r;
  mpz_sub(r.z_, z_, o.z_);
  return r;
}

BigInt BigInt::operator-() const {
  BigInt r;
  mpz_neg(r.z_, z_);
  return r;
}

BigInt BigInt::operator*(const BigInt& o) const {
  BigInt r;
  mpz_mul(r.z_, z_, o.z_);
  return r;
}

BigInt BigInt::operator/(const BigInt& o) const {
  if (o.is_zero()) throw std::domain_error("BigInt: division by zero");
  BigInt r;
  mpz_tdiv_q(r.z_, z_, o.z_);
  return r;
}

BigInt BigInt::operator%(const BigInt& o) const {
  if (o.is_zero()) throw std::domain_error("BigInt: division by zero");
  BigInt r;
  mpz_tdiv_r(r.z_, z_, o.z_);
  return r;
}

BigInt& BigInt::operator+=(const BigInt& o) {
  mpz_add(z_, z_, o.z_);
  return *this;
}

BigInt& BigInt::operator-=(const BigInt& o) {
  mpz_sub(z_, z_, o.z_);
  return *this;
}

BigInt& BigInt::operator*=(const BigInt& o) {
  mpz_mul(z_, z_, o.z_);
  return *this;
}

BigInt BigInt::operator<<(unsigned bits) const {
  BigInt r;
  mpz_mul_2exp(r.z_, z_, bits);
  return r;
}

BigInt BigInt::operator>>(unsigned bits) const {
  BigInt r;
  mpz_fdiv_q_2exp(r.z_, z_, bits);
  return r;
}

BigInt BigInt::abs() const {
  BigInt r;
  mpz_abs(r.z_, z_);
  return r;
}

BigInt BigInt::mod(const BigInt& m) const {
  if (m.sign() <= 0) throw std::domain_error("BigInt::mod: modulus must be positive");
  BigInt r;
  mpz_mod(r.z_, z_, m.z_);
  return r;
}

BigInt BigInt::powmod(const BigInt& e, const BigInt& m) const {
  if (e.sign() < 0) throw std::domain_error("BigInt::powmod: negative exponent");
  BigInt r;
  mpz_powm(r.z_, z_, e.z_, m.z_);
  return r;
}

BigInt BigInt::invmod(const BigInt& m) const {
  BigInt r;
  if (mpz_invert(r.z_, z_, m.z_) == 0) {
    throw std::domain_error("BigInt::invmod: value not invertible");
  }
  return r;
}

BigInt BigInt::gcd(const BigInt& o) const {
  BigInt r;
  mpz_gcd(r.z_, z_, o.z_);
  return r;
}

BigInt BigInt::lcm(const BigInt& o) const {
  BigInt r;
  mpz_lcm(r.z_, z_, o.z_);
  return r;
}

BigInt BigInt::next_prime() const {
  BigInt r;
  mpz_nextprime(r.z_, z_);
  return r;
}

}  // namespace ppsf
