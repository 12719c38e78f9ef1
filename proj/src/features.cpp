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

#include "ppsf/features.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ppsf {

void validate(const SparseBinaryVector& v) {
  for (std::size_t i = 0; i < v.indices.size(); ++i) {
    if (v.indices[i] >= v.dim) {
      throw std::invalid_argument("sparse vector: index out of range");
    }
    if (i > 0 && v.indices[i] <= v.indices[i - 1]) {
      throw std::invalid_argument("sparse vector: indices not strictly increasing");
    }
  }
}

void validate(const LabeledDataset& data) {
  if (data.instances.size() != data.labels.size()) {
    throw std::invalid_argument("dataset: instance/label count mismatch");
  }
  for (const auto& v : data.instances) {
    if (v.dim != data.dim) throw std::invalid_argument("dataset: mixed dimensions");
    validate(v);
  }
  for (int y : data.labels) {
    if (y != 1 && y != -1) throw std::invalid_argument("dataset: labels must be +/-1");
  }
}

SparseBinaryVector extract_fourgrams(std::span<const std::uint8_t> document,
                                     std::size_t prefix_limit,
                                     std::uint64_t hash_space) {
  if (hash_space == 0) throw std::invalid_argument("extract_fourgrams: hash space must be >= 1");
  SparseBinaryVector out;
  out.dim = hash_space;
  const std::size_t usable = std::min(document.size(), prefix_limit);
  if (usable < 4) return out;
  out.indices.reserve(std::min<std::size_t>(usable - 3, 4096));
  for (std::size_t i = 0; i + 4 <= usable; ++i) {
    const std::uint32_t packed = (static_cast<std::uint32_t>(document[i]) << 24) |
                                 (static_cast<std::uint32_t>(document[i + 1]) << 16) |
                                 (static_cast<std::uint32_t>(document[i + 2]) << 8) |
                                 static_cast<std::uint32_t>(document[i + 3]);
    out.indices.push_back(packed % hash_space);
  }
  std::sort(out.indices.begin(), out.indices.end());
  out.indices.erase(std::unique(out.indices.begin(), out.indices.end()),
                    out.indices.end());
  return out;
}

SparseBinaryVector extract_fourgrams(const std::string& document,
                                     std::size_t prefix_limit,
                                     std::uint64_t hash_space) {
  return extract_fourgrams(
      std::span<const std::uint8_t>(
          reinterpret_cast<const std::uint8_t*>(document.data()), document.size()),
      prefix_limit, hash_space);
}

std::pair<LabeledDataset, CorpusManifest> ingest_corpus(
    const std::filesystem::path& root, const std::filesystem::path& labels_file,
    std::size_t prefix_limit, std::uint64_t hash_space) {
  std::ifstream labels(labels_file);
  if (!labels) {
    throw std::runtime_error("ingest_corpus: cannot open label file " +
                             labels_file.string());
  }

  CorpusManifest manifest;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(labels, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
      throw std::runtime_error("ingest_corpus: malformed line " +
                               std::to_string(line_no) + " in " + labels_file.string());
    }
    ManifestRecord rec;
    rec.filename = line.substr(0, tab);
    const std::string label = line.substr(tab + 1);
    if (label == "spam") {
      rec.spam = true;
    } else if (label == "ham") {
      rec.spam = false;
    } else {
      throw std::runtime_error("ingest_corpus: unknown label '" + label +
                               "' at line " + std::to_string(line_no));
    }
    if (!seen.insert(rec.filename).second) {
      throw std::runtime_error("ingest_corpus: duplicate filename " + rec.filename);
    }
    manifest.records.push_back(std::move(rec));
  }

  std::sort(manifest.records.begin(), manifest.records.end(),
            [](const auto& a, const auto& b) { return a.filename < b.filename; });

  LabeledDataset data;
  data.dim = hash_space;
  data.instances.reserve(manifest.records.size());
  data.labels.reserve(manifest.records.size());
  for (const auto& rec : manifest.records) {
    const auto path = root / rec.filename;
    std::ifstream doc(path, std::ios::binary);
    if (!doc) {
      throw std::runtime_error("ingest_corpus: missing document " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(doc)),
                                    std::istreambuf_iterator<char>());
    data.instances.push_back(extract_fourgrams(bytes, prefix_limit, hash_space));
    data.labels.push_back(rec.spam ? 1 : -1);
    if (rec.spam) {
      ++manifest.spam_count;
    } else {
      ++manifest.ham_count;
    }
  }
  return {std::move(data), std::move(manifest)};
}

std::string dump_vectors(const std::vector<SparseBinaryVector>& docs) {
  std::ostringstream out;
  for (const auto& doc : docs) {
    for (std::size_t i = 0; i < doc.indices.size(); ++i) {
      if (i) out << ' ';
      out << doc.indices[i];
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace ppsf
