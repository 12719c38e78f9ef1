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

#include "ppsf/blinding.hpp"

#include <cmath>
#include <stdexcept>

namespace ppsf {

double log_big(const BigInt& v) {
  if (v.sign() <= 0) throw std::domain_error("log_big: value must be positive");
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, v.raw());  // v = mant * 2^exp2
  return std::log(mant) + static_cast<double>(exp2) * M_LN2;
}

BigInt floor_exp_big(double x) {
  if (x < 0.0 || !std::isfinite(x)) {
    throw std::domain_error("floor_exp_big: exponent must be finite and >= 0");
  }
  if (x < 700.0) {
    const double v = std::exp(x);
    // Exact floor via the dyadic decomposition of the double.
    int exp2 = 0;
    const double mant = std::frexp(v, &exp2);
    BigInt m(static_cast<unsigned long>(std::ldexp(mant, 53)));
    const int shift = exp2 - 53;
    return shift >= 0 ? m << static_cast<unsigned>(shift)
                      : m >> static_cast<unsigned>(-shift);
  }
  // e^x = 2^(x / ln 2); split into integer exponent and [1,2) mantissa.
  const double y = x / M_LN2;
  const double k = std::floor(y);
  const double mant = std::exp2(y - k);  // in [1, 2)
  BigInt m(static_cast<unsigned long>(std::ldexp(mant, 52)));
  const long shift = static_cast<long>(k) - 52;
  if (shift < 0) throw std::logic_error("floor_exp_big: unreachable shift");
  return m << static_cast<unsigned>(shift);
}

BlindingSampler::BlindingSampler(double r_bound, BigInt q_domain, Rng rng)
    : r_bound_(r_bound), q_domain_(std::move(q_domain)), rng_(rng) {
  if (r_bound < 0.0 || !std::isfinite(r_bound)) {
    throw std::invalid_argument("BlindingSampler: r bound must be finite and >= 0");
  }
  if (q_domain_ < BigInt(1)) {
    throw std::invalid_argument("BlindingSampler: q domain must be >= 1");
  }
  log_q_domain_ = log_big(q_domain_);
}

double BlindingSampler::draw_r() { return rng_.uniform(-r_bound_, r_bound_); }

BigInt BlindingSampler::draw_q() {
  const double u = rng_.next_double();
  BigInt q = floor_exp_big(u * log_q_domain_);
  if (q < BigInt(1)) q = BigInt(1);
  if (q > q_domain_) q = q_domain_;
  return q;
}

}  // namespace ppsf
