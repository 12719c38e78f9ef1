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

#ifndef PPSF_FEATURES_HPP_
#define PPSF_FEATURES_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ppsf {

/// Presence set of one document: strictly increasing feature indices below
/// dim. Feature values are implicitly 1.
struct SparseBinaryVector {
  std::vector<std::uint64_t> indices;
  std::uint64_t dim = 0;

  std::size_t count() const { return indices.size(); }
  bool operator==(const SparseBinaryVector& o) const = default;
};

/// Throws std::invalid_argument unless indices are sorted, unique, and < dim.
void validate(const SparseBinaryVector& v);

inline constexpr std::size_t kDefaultPrefixLimit = 35 * 1024;
inline constexpr std::uint64_t kDefaultHashSpace = 1000000;

/// Overlapping character 4-gram extraction: every window of four consecutive
/// bytes inside the document prefix packs big-endian into a 32-bit value and
/// is reduced modulo hash_space. Binary presence only.
SparseBinaryVector extract_fourgrams(std::span<const std::uint8_t> document,
                                     std::size_t prefix_limit = kDefaultPrefixLimit,
                                     std::uint64_t hash_space = kDefaultHashSpace);
SparseBinaryVector extract_fourgrams(const std::string& document,
                                     std::size_t prefix_limit = kDefaultPrefixLimit,
                                     std::uint64_t hash_space = kDefaultHashSpace);

struct LabeledDataset {
  std::vector<SparseBinaryVector> instances;
  std::vector<int> labels;  // +1 spam, -1 ham
  std::uint64_t dim = 0;

  std::size_t size() const { return instances.size(); }
};

void validate(const LabeledDataset& data);

struct ManifestRecord {
  std::string filename;
  bool spam = false;
};

struct CorpusManifest {
  std::vector<ManifestRecord> records;  // lexicographic by filename
  std::size_t spam_count = 0;
  std::size_t ham_count = 0;

  double spam_fraction() const {
    return records.empty() ? 0.0
                           : static_cast<double>(spam_count) / records.size();
  }
};

/// Reads a labels.tsv of "filename<TAB>spam|ham" lines and the named message
/// files under root. Documents are ordered lexicographically by filename.
/// Throws on malformed lines, unknown labels, duplicate filenames, or
/// missing files.
std::pair<LabeledDataset, CorpusManifest> ingest_corpus(
    const std::filesystem::path& root, const std::filesystem::path& labels_file,
    std::size_t prefix_limit = kDefaultPrefixLimit,
    std::uint64_t hash_space = kDefaultHashSpace);

/// Debug dump: one line per document, space-separated sorted indices.
std::string dump_vectors(const std::vector<SparseBinaryVector>& docs);

}  // namespace ppsf

#endif  // PPSF_FEATURES_HPP_
