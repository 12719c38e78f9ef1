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

#ifndef PPSF_SYNTH_HPP_
#define PPSF_SYNTH_HPP_

#include <cstdint>

#include "ppsf/features.hpp"

namespace ppsf {

/// Synthetic labeled corpus for benchmarks and protocol checks. Features
/// split into two pools; each document draws features_per_doc indices,
/// taking them from its own class's pool with probability correlation.
/// correlation near 1 gives a (nearly) linearly separable corpus, 0.5 gives
/// label-free noise. Deterministic per seed; both classes always present
/// for n >= 2.
LabeledDataset make_synthetic_corpus(std::size_t docs, std::uint64_t dim,
                                     unsigned features_per_doc, double correlation,
                                     std::uint64_t seed);

}  // namespace ppsf

#endif  // PPSF_SYNTH_HPP_
