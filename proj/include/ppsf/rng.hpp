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

#ifndef PPSF_RNG_HPP_
#define PPSF_RNG_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

#include "ppsf/bignum.hpp"

namespace ppsf {

/// Deterministic randomness source. Every probabilistic operation in the
/// library takes one of these, so a whole experiment replays from a single
/// master seed. Substreams are derived by label, never by sharing state,
/// which keeps module draws independent of call ordering elsewhere.
///
/// The generator is xoshiro256** seeded through splitmix64. That is not a
/// CSPRNG; production key material should come from Rng::system(), which
/// seeds from OS entropy.
class Rng {
 public:
  static Rng seeded(std::uint64_t seed);
  static Rng system();

  /// Independent substream for the given purpose, derived from this
  /// stream's root seed and the label only.
  Rng derive(std::string_view label) const;

  std::uint64_t next_u64();
  /// Uniform in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Uniform double in [0, 1) with 53 random bits.
  double next_double();
  double uniform(double lo, double hi);
  double gaussian();

  std::vector<std::uint8_t> bytes(std::size_t count);
  /// Uniform BigInt in [0, n), n > 0. Rejection sampling on raw bytes so the
  /// stream consumption is platform independent.
  BigInt below_big(const BigInt& n);
  /// Uniform unit of Z_n (coprime to n), n > 1.
  BigInt unit_mod(const BigInt& n);

  std::uint64_t root_seed() const { return root_seed_; }

 private:
  explicit Rng(std::uint64_t seed);

  std::uint64_t root_seed_;
  std::uint64_t s_[4];
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

/// splitmix64 step; also used standalone for counter-mode streams.
std::uint64_t splitmix64(std::uint64_t& state);

/// FNV-1a over a label, for seed derivation.
std::uint64_t hash_label(std::uint64_t seed, std::string_view label);

}  // namespace ppsf

#endif  // PPSF_RNG_HPP_
