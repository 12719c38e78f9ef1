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

#ifndef PPSF_BIGNUM_HPP_
#define PPSF_BIGNUM_HPP_

#include <gmp.h>

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ppsf {

/// Arbitrary-precision signed integer. Thin value-semantic wrapper around
/// GMP's mpz_t; all protocol and key material arithmetic goes through this
/// type so GMP stays behind one file.
class BigInt {
 public:
  BigInt() { mpz_init(z_); }
  BigInt(long v) { mpz_init_set_si(z_, v); }  // NOLINT(runtime/explicit)
  BigInt(int v) { mpz_init_set_si(z_, v); }   // NOLINT(runtime/explicit)
  explicit BigInt(unsigned long v) { mpz_init_set_ui(z_, v); }
  explicit BigInt(const std::string& decimal);

  BigInt(const BigInt& o) { mpz_init_set(z_, o.z_); }
  BigInt(BigInt&& o) noexcept {
    mpz_init(z_);
    mpz_swap(z_, o.z_);
  }
  BigInt& operator=(const BigInt& o) {
    if (this != &o) mpz_set(z_, o.z_);
    return *this;
  }
  BigInt& operator=(BigInt&& o) noexcept {
    mpz_swap(z_, o.z_);
    return *this;
  }
  ~BigInt() { mpz_clear(z_); }

  // Big-endian magnitude bytes, most significant first. Zero -> empty.
  static BigInt from_magnitude_bytes(std::span<const std::uint8_t> be);
  std::vector<std::uint8_t> magnitude_bytes() const;

  std::string to_string() const;
  // Exact only when the value fits; callers check bit_length() first.
  long to_long() const { return mpz_get_si(z_); }
  unsigned long to_ulong() const { return mpz_get_ui(z_); }
  double to_double() const { return mpz_get_d(z_); }

  std::size_t bit_length() const { return mpz_sizeinbase(z_, 2); }
  int sign() const { return mpz_sgn(z_); }
  bool is_zero() const { return mpz_sgn(z_) == 0; }
  bool is_odd() const { return mpz_odd_p(z_) != 0; }
  bool fits_ulong() const { return mpz_fits_ulong_p(z_) != 0; }

  BigInt operator+(const BigInt& o) const;
  BigInt operator-(const BigInt& o) const;
  BigInt operator-() const;
  BigInt operator*(const BigInt& o) const;
  BigInt operator/(const BigInt& o) const;  // truncated quotient
  BigInt operator%(const BigInt& o) const;  // sign follows dividend
  BigInt& operator+=(const BigInt& o);
  BigInt& operator-=(const BigInt& o);
  BigInt& operator*=(const BigInt& o);

  BigInt operator<<(unsigned bits) const;
  BigInt operator>>(unsigned bits) const;

  bool operator==(const BigInt& o) const { return mpz_cmp(z_, o.z_) == 0; }
  std::strong_ordering operator<=>(const BigInt& o) const {
    int c = mpz_cmp(z_, o.z_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  BigInt abs() const;
  // Nonnegative remainder in [0, m), m > 0.
  BigInt mod(const BigInt& m) const;
  // this^e mod m with e >= 0.
  BigInt powmod(const BigInt& e, const BigInt& m) const;
  // Modular inverse in [0, m); throws std::domain_error when none exists.
  BigInt invmod(const BigInt& m) const;
  BigInt gcd(const BigInt& o) const;
  BigInt lcm(const BigInt& o) const;
  bool probably_prime(int reps = 32) const {
    return mpz_probab_prime_p(z_, reps) != 0;
  }
  BigInt next_prime() const;
  bool tstbit(std::size_t i) const { return mpz_tstbit(z_, i) != 0; }

  mpz_srcptr raw() const { return z_; }
  mpz_ptr raw() { return z_; }

 private:
  mpz_t z_;
};

inline BigInt operator*(long a, const BigInt& b) { return BigInt(a) * b; }

}  // namespace ppsf

#endif  // PPSF_BIGNUM_HPP_
