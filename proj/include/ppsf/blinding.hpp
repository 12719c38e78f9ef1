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

#ifndef PPSF_BLINDING_HPP_
#define PPSF_BLINDING_HPP_

#include "ppsf/bignum.hpp"
#include "ppsf/rng.hpp"

namespace ppsf {

/// Natural log of a positive BigInt, accurate to double precision.
double log_big(const BigInt& v);

/// floor(e^x) as a BigInt for x >= 0, including x beyond double range
/// (computed as a 52-bit mantissa times a power of two).
BigInt floor_exp_big(double x);

/// Per-session blinding draws for the training protocol.
///
/// Additive blinds r are uniform on [-r_bound, r_bound]. The bound must stay
/// small: the protocol computes e^(margin - r) in fixed point, so the usable
/// resolution shrinks by a factor of e^|r|.
///
/// Multiplicative blinds q are integers on [1, q_domain] with P(q)
/// proportional to 1/q, drawn by inverse transform: q = floor(exp(U *
/// ln(q_domain))). The domain may be astronomically large; draws are exact
/// big integers.
class BlindingSampler {
 public:
  BlindingSampler(double r_bound, BigInt q_domain, Rng rng);

  double draw_r();
  BigInt draw_q();

  double r_bound() const { return r_bound_; }
  const BigInt& q_domain() const { return q_domain_; }

 private:
  double r_bound_;
  BigInt q_domain_;
  double log_q_domain_;
  Rng rng_;
};

}  // namespace ppsf

#endif  // PPSF_BLINDING_HPP_
