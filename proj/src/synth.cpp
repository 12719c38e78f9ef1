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

#include "ppsf/synth.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "ppsf/rng.hpp"

namespace ppsf {

LabeledDataset make_synthetic_corpus(std::size_t docs, std::uint64_t dim,
                                     unsigned features_per_doc, double correlation,
                                     std::uint64_t seed) {
  if (dim < 2) throw std::invalid_argument("synthetic corpus: need dim >= 2");
  if (features_per_doc == 0 || features_per_doc > dim / 2) {
    throw std::invalid_argument("synthetic corpus: features_per_doc must be in [1, dim/2]");
  }
  if (correlation < 0.0 || correlation > 1.0) {
    throw std::invalid_argument("synthetic corpus: correlation must be in [0, 1]");
  }
  Rng rng = Rng::seeded(seed).derive("synthetic-corpus");
  LabeledDataset data;
  data.dim = dim;
  const std::uint64_t pool = dim / 2;
  for (std::size_t i = 0; i < docs; ++i) {
    // Fix the first two labels so both classes are present.
    const int label = i == 0 ? 1 : i == 1 ? -1 : (rng.below(2) ? 1 : -1);
    std::set<std::uint64_t> picked;
    while (picked.size() < features_per_doc) {
      const bool own_pool = rng.next_double() < correlation;
      const bool spam_pool = (label == 1) == own_pool;
      const std::uint64_t base = spam_pool ? 0 : pool;
      const std::uint64_t span = spam_pool ? pool : dim - pool;
      picked.insert(base + rng.below(span));
    }
    SparseBinaryVector v;
    v.dim = dim;
    v.indices.assign(picked.begin(), picked.end());
    data.instances.push_back(std::move(v));
    data.labels.push_back(label);
  }
  return data;
}

}  // namespace ppsf
