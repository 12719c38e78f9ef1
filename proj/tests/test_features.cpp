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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ppsf/features.hpp"
#include "ppsf/rng.hpp"

using namespace ppsf;

TEST_CASE("documents shorter than one window give empty vectors") {
  CHECK(extract_fourgrams(std::string("abc")).indices.empty());
  CHECK(extract_fourgrams(std::string("")).indices.empty());
}

TEST_CASE("hand-enumerated windows") {
  const auto v = extract_fourgrams(std::string("abcde"), kDefaultPrefixLimit, 1u << 31);
  REQUIRE(v.indices.size() == 2);
  const std::uint64_t abcd = (0x61ull << 24) | (0x62ull << 16) | (0x63ull << 8) | 0x64ull;
  const std::uint64_t bcde = (0x62ull << 24) | (0x63ull << 16) | (0x64ull << 8) | 0x65ull;
  CHECK(v.indices[0] == abcd % (1u << 31));
  CHECK(v.indices[1] == bcde % (1u << 31));

  const auto single = extract_fourgrams(std::string("abcd"));
  REQUIRE(single.indices.size() == 1);
  CHECK(single.indices[0] == abcd % 1000000ull);
}

TEST_CASE("duplicates collapse; output is sorted and deduplicated") {
  const auto v = extract_fourgrams(std::string("abababab"));
  // Windows: abab, baba, abab, baba, abab -> two distinct features.
  CHECK(v.indices.size() == 2);
  CHECK(std::is_sorted(v.indices.begin(), v.indices.end()));
  CHECK_NOTHROW(validate(v));
}

TEST_CASE("prefix rule: bytes past the limit never matter") {
  Rng rng = Rng::seeded(44);
  std::string head(5000, '\0');
  for (auto& c : head) c = static_cast<char>('a' + rng.below(26));
  const std::string tail_a(3000, 'x');
  std::string tail_b(3000, '\0');
  for (auto& c : tail_b) c = static_cast<char>('0' + rng.below(10));

  const std::size_t limit = 5000;
  const auto va = extract_fourgrams(head + tail_a, limit);
  const auto vb = extract_fourgrams(head + tail_b, limit);
  CHECK(va == vb);
  CHECK(va == extract_fourgrams(head, limit));

  // A window straddling the boundary must not appear.
  const auto boundary = extract_fourgrams(std::string("aaaabbbb"), 6);
  const auto full_head = extract_fourgrams(std::string("aaaabb"));
  CHECK(boundary == full_head);
}

TEST_CASE("determinism and cardinality bound") {
  Rng rng = Rng::seeded(45);
  std::string doc(40000, '\0');
  for (auto& c : doc) c = static_cast<char>(rng.below(256));
  const auto v1 = extract_fourgrams(doc);
  const auto v2 = extract_fourgrams(doc);
  CHECK(v1 == v2);
  CHECK(v1.indices.size() <= std::min<std::size_t>(kDefaultPrefixLimit - 3, 1000000));
  CHECK(v1.dim == 1000000);
}

namespace {

struct TempCorpus {
  std::filesystem::path root;
  explicit TempCorpus(const std::string& name) {
    root = std::filesystem::temp_directory_path() / name;
    std::filesystem::create_directories(root);
  }
  ~TempCorpus() { std::filesystem::remove_all(root); }
  void write(const std::string& file, const std::string& contents) const {
    std::ofstream out(root / file, std::ios::binary);
    out << contents;
  }
};

}  // namespace

TEST_CASE("corpus ingestion: labels, order, counts") {
  const TempCorpus corpus("ppsf_corpus_test");
  corpus.write("b_msg.txt", "cheap pills online now");
  corpus.write("a_msg.txt", "meeting at noon tomorrow");
  corpus.write("c_msg.txt", "viagra viagra viagra win");
  corpus.write("labels.tsv", "b_msg.txt\tspam\na_msg.txt\tham\nc_msg.txt\tspam\n");

  const auto [data, manifest] = ingest_corpus(corpus.root, corpus.root / "labels.tsv");
  REQUIRE(data.size() == 3);
  // Lexicographic by filename: a, b, c.
  CHECK(manifest.records[0].filename == "a_msg.txt");
  CHECK(manifest.records[1].filename == "b_msg.txt");
  CHECK(data.labels[0] == -1);
  CHECK(data.labels[1] == 1);
  CHECK(data.labels[2] == 1);
  CHECK(manifest.spam_count == 2);
  CHECK(manifest.ham_count == 1);
  CHECK(manifest.spam_fraction() == doctest::Approx(2.0 / 3.0));
  CHECK(data.instances[0] == extract_fourgrams(std::string("meeting at noon tomorrow")));
}

TEST_CASE("corpus ingestion error paths") {
  const TempCorpus corpus("ppsf_corpus_errs");
  corpus.write("x.txt", "hello world message");

  corpus.write("labels.tsv", "");
  auto [empty, manifest] = ingest_corpus(corpus.root, corpus.root / "labels.tsv");
  CHECK(empty.size() == 0);

  corpus.write("labels.tsv", "x.txt\tspam\nx.txt\tham\n");
  CHECK_THROWS_WITH_AS(ingest_corpus(corpus.root, corpus.root / "labels.tsv"),
                       doctest::Contains("duplicate"), std::runtime_error);

  corpus.write("labels.tsv", "x.txt\tjunk\n");
  CHECK_THROWS_WITH_AS(ingest_corpus(corpus.root, corpus.root / "labels.tsv"),
                       doctest::Contains("unknown label"), std::runtime_error);

  corpus.write("labels.tsv", "x.txt spam\n");
  CHECK_THROWS_WITH_AS(ingest_corpus(corpus.root, corpus.root / "labels.tsv"),
                       doctest::Contains("malformed"), std::runtime_error);

  corpus.write("labels.tsv", "missing.txt\tspam\n");
  CHECK_THROWS_WITH_AS(ingest_corpus(corpus.root, corpus.root / "labels.tsv"),
                       doctest::Contains("missing"), std::runtime_error);
}

TEST_CASE("vector dump format") {
  std::vector<SparseBinaryVector> docs = {SparseBinaryVector{{2, 5, 9}, 10},
                                          SparseBinaryVector{{}, 10}};
  CHECK(dump_vectors(docs) == "2 5 9\n\n");
}
