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

#ifndef PPSF_COUNTERS_HPP_
#define PPSF_COUNTERS_HPP_

#include <cstdint>

namespace ppsf {

/// Session cost instrumentation. Encryption/decryption counts follow the
/// protocol's nominal cost model, under which one training round over n
/// instances and d dimensions costs 3n + 2d crypto operations and transmits
/// 4n + 2d field elements: the weight vector is charged at both endpoints
/// (d encryptions at round start, d decryptions at round close), the blinded
/// margins charge n encryptions to the data owner, and the model owner's
/// exponentiation pass charges n decryptions plus n encryptions. The
/// reciprocal pass's decrypt/re-encrypt round trip is not charged
/// separately under this model.
struct OpCounters {
  std::uint64_t encryptions = 0;
  std::uint64_t decryptions = 0;
  std::uint64_t elements_to_model_owner = 0;  // Alice/Carol -> Bob
  std::uint64_t elements_to_data_owner = 0;   // Bob -> Alice/Carol

  std::uint64_t crypto_total() const { return encryptions + decryptions; }
  std::uint64_t transmitted_total() const {
    return elements_to_model_owner + elements_to_data_owner;
  }

  OpCounters& operator+=(const OpCounters& o) {
    encryptions += o.encryptions;
    decryptions += o.decryptions;
    elements_to_model_owner += o.elements_to_model_owner;
    elements_to_data_owner += o.elements_to_data_owner;
    return *this;
  }
  friend OpCounters operator+(OpCounters a, const OpCounters& b) { return a += b; }
  bool operator==(const OpCounters& o) const = default;
};

/// Wall-clock seconds per protocol leg of one training round, grouped the
/// way the bench harness reports them.
struct StepTimings {
  double send_weights = 0.0;        // round start: encrypt + ship w
  double blind_margins = 0.0;       // inner products + additive blinds
  double exponentiate = 0.0;        // decrypt margins, encrypt exponentials
  double unblind_scale = 0.0;       // unblind, +1, multiplicative blinds
  double reciprocal = 0.0;          // decrypt, invert, re-encrypt
  double assemble_gradient = 0.0;   // per-instance sigmoids into gradient
  double apply_update = 0.0;        // step-size exponent + weight rebase

  StepTimings& operator+=(const StepTimings& o) {
    send_weights += o.send_weights;
    blind_margins += o.blind_margins;
    exponentiate += o.exponentiate;
    unblind_scale += o.unblind_scale;
    reciprocal += o.reciprocal;
    assemble_gradient += o.assemble_gradient;
    apply_update += o.apply_update;
    return *this;
  }
};

}  // namespace ppsf

#endif  // PPSF_COUNTERS_HPP_
