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

#include <Eigen/Dense>
#include <cmath>
#include <set>

#include "ppsf/dimreduce.hpp"
#include "ppsf/synth.hpp"
#include "testutil.hpp"

using namespace ppsf;

namespace {

// Two sparse binary vectors with |A| = |B| = per_set and a shared core of
// `overlap` indices; cos(angle) = overlap / per_set.
std::pair<SparseBinaryVector, SparseBinaryVector> angled_pair(std::uint64_t dim,
                                                              unsigned per_set,
                                                              unsigned overlap,
                                                              std::uint64_t salt) {
  SparseBinaryVector a, b;
  a.dim = b.dim = dim;
  std::uint64_t base = salt * 1000;
  for (unsigned i = 0; i < overlap; ++i) {
    a.indices.push_back(base + i);
    b.indices.push_back(base + i);
  }
  for (unsigned i = overlap; i < per_set; ++i) {
    a.indices.push_back(base + 100 + i);
    b.indices.push_back(base + 200 + i);
  }
  std::sort(a.indices.begin(), a.indices.end());
  std::sort(b.indices.begin(), b.indices.end());
  return {a, b};
}

}  // namespace

TEST_CASE("lsh: determinism and empty signature") {
  ReductionSpec spec{ReduceMethod::kLsh, 1000, 0, 99, 1, 0};
  const SparseBinaryVector x{{3, 17, 400}, 1000};
  CHECK(lsh_project(spec, x).empty());

  spec.target_dim = 64;
  const auto s1 = lsh_project(spec, x);
  const auto s2 = lsh_project(spec, x);
  CHECK(s1 == s2);
  REQUIRE(s1.size() == 64);

  ReductionSpec other = spec;
  other.seed = 100;
  CHECK(lsh_project(other, x) != s1);
}

TEST_CASE("lsh: bit agreement tracks 1 - angle/pi") {
  const unsigned bits = 256;
  const unsigned pairs = 1000;
  const unsigned per_set = 16;
  const unsigned overlap = 8;  // cos angle = 0.5 -> angle = pi/3
  const double expected = 1.0 - std::acos(0.5) / M_PI;

  std::uint64_t agree = 0;
  for (unsigned p = 0; p < pairs; ++p) {
    ReductionSpec spec{ReduceMethod::kLsh, 1u << 20, bits, 7000 + p, 1, 0};
    const auto [a, b] = angled_pair(spec.source_dim, per_set, overlap, p);
    const auto sa = lsh_project(spec, a);
    const auto sb = lsh_project(spec, b);
    for (unsigned j = 0; j < bits; ++j) agree += sa[j] == sb[j];
  }
  const double total = static_cast<double>(pairs) * bits;
  const double fraction = static_cast<double>(agree) / total;
  const double sigma = std::sqrt(expected * (1.0 - expected) / total);
  CHECK(std::fabs(fraction - expected) <= 3.0 * sigma);
}

TEST_CASE("hashspace: identity when m >= dim, collisions by construction") {
  ReductionSpec spec{ReduceMethod::kHashSpace, 100, 0, 0, 1, 128};
  const SparseBinaryVector x{{5, 50, 99}, 100};
  CHECK(hashspace_reduce(spec, x).indices == x.indices);

  spec.hash_modulus = 16;
  const SparseBinaryVector y{{5, 21, 37}, 100};  // all 5 mod 16
  const auto reduced = hashspace_reduce(spec, y);
  REQUIRE(reduced.indices.size() == 1);
  CHECK(reduced.indices[0] == 5);
  CHECK(reduced.dim == 16);
}

TEST_CASE("hashspace: presence set equals the brute-force modular image") {
  Rng rng = Rng::seeded(51);
  ReductionSpec spec{ReduceMethod::kHashSpace, 100000, 0, 0, 1, 997};
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = testutil::random_sparse(rng, 100000, 40);
    std::set<std::uint64_t> expected;
    for (auto idx : x.indices) expected.insert(idx % 997);
    const auto got = hashspace_reduce(spec, x);
    REQUIRE(got.indices == std::vector<std::uint64_t>(expected.begin(), expected.end()));
  }
}

TEST_CASE("dfprune keeps exactly the features at or above the threshold") {
  const LabeledDataset corpus = make_synthetic_corpus(40, 30, 5, 0.7, 123);
  const auto df = document_frequencies(corpus);

  ReductionSpec spec{ReduceMethod::kDfPrune, 30, 0, 0, 1, 0};
  const auto all = fit_selection(spec, corpus);
  std::size_t present = 0;
  for (const auto& [feature, count] : df) present += count >= 1;
  CHECK(all.selected.size() == present);

  spec.df_threshold = 5;
  const auto pruned = fit_selection(spec, corpus);
  for (auto feature : pruned.selected) {
    const auto it = std::lower_bound(df.begin(), df.end(),
                                     std::make_pair(feature, std::uint64_t{0}));
    REQUIRE(it != df.end());
    REQUIRE(it->first == feature);
    REQUIRE(it->second >= 5);
  }
  // Monotonicity: raising the threshold never adds features.
  ReductionSpec spec6 = spec;
  spec6.df_threshold = 6;
  const auto pruned6 = fit_selection(spec6, corpus);
  CHECK(pruned6.selected.size() <= pruned.selected.size());
  for (auto f : pruned6.selected) {
    CHECK(std::binary_search(pruned.selected.begin(), pruned.selected.end(), f));
  }
}

TEST_CASE("uniform selection: seeded, unique, in range") {
  const LabeledDataset corpus;  // uniform ignores the corpus
  ReductionSpec spec{ReduceMethod::kUniform, 500, 40, 31337, 1, 0};
  const auto a = fit_selection(spec, corpus);
  const auto b = fit_selection(spec, corpus);
  CHECK(a.selected == b.selected);
  REQUIRE(a.selected.size() == 40);
  CHECK(std::is_sorted(a.selected.begin(), a.selected.end()));
  CHECK(std::adjacent_find(a.selected.begin(), a.selected.end()) == a.selected.end());
  CHECK(a.selected.back() < 500);
}

TEST_CASE("multinomial: zero-df features never selected; law passes chi-square") {
  const LabeledDataset corpus = make_synthetic_corpus(60, 40, 6, 0.7, 321);
  const auto df = document_frequencies(corpus);
  std::set<std::uint64_t> nonzero;
  for (const auto& [f, c] : df) nonzero.insert(f);

  ReductionSpec spec{ReduceMethod::kMultinomial, 40, 10, 606, 1, 0};
  const auto state = fit_selection(spec, corpus);
  REQUIRE(state.selected.size() == 10);
  for (auto f : state.selected) REQUIRE(nonzero.count(f) == 1);

  spec.target_dim = nonzero.size() + 1;
  CHECK_THROWS_AS(fit_selection(spec, corpus), std::runtime_error);

  // The raw draw law: chi-square goodness of fit against df proportions.
  std::vector<double> weights;
  for (const auto& [f, c] : df) weights.push_back(static_cast<double>(c));
  DiscreteSampler sampler(weights);
  Rng rng = Rng::seeded(909);
  std::vector<std::uint64_t> counts(weights.size(), 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[sampler.draw(rng)];
  double total_weight = 0.0;
  for (double w : weights) total_weight += w;
  double statistic = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double expected = draws * weights[i] / total_weight;
    statistic += (counts[i] - expected) * (counts[i] - expected) / expected;
  }
  const double p = testutil::chi2_sf(statistic, static_cast<double>(weights.size() - 1));
  CHECK(p > 0.01);
}

TEST_CASE("selection projection re-indexes against the selected set") {
  ProjectionState state;
  state.spec.method = ReduceMethod::kUniform;
  state.selected = {3, 8, 20, 41};
  const SparseBinaryVector x{{2, 8, 20, 40, 77}, 100};
  const auto projected = project_selection(state, x);
  CHECK(projected.dim == 4);
  CHECK(projected.indices == std::vector<std::uint64_t>{1, 2});
}

TEST_CASE("data independence: projections ignore other documents") {
  const SparseBinaryVector doc{{10, 77, 300}, 1000};
  ReductionSpec lsh{ReduceMethod::kLsh, 1000, 32, 5, 1, 0};
  const auto sig = lsh_project(lsh, doc);
  // Same spec, arbitrary other corpora in play elsewhere: projection depends
  // only on (spec, doc) by construction; re-run after unrelated work.
  const LabeledDataset unrelated = make_synthetic_corpus(30, 1000, 4, 0.6, 9);
  ReductionSpec uni{ReduceMethod::kUniform, 1000, 50, 42, 1, 0};
  const auto sel_a = fit_selection(uni, unrelated);
  const auto sel_b = fit_selection(uni, make_synthetic_corpus(50, 1000, 4, 0.6, 10));
  CHECK(sel_a.selected == sel_b.selected);  // corpus plays no role
  CHECK(lsh_project(lsh, doc) == sig);
}

TEST_CASE("pca: rank-1 data reconstructs exactly") {
  // Points on the line t * (3, 4) / 5.
  std::vector<std::vector<double>> rows;
  for (int t = -5; t <= 5; ++t) {
    rows.push_back({0.6 * t, 0.8 * t});
  }
  const auto state = pca_fit(rows, 1, 17);
  REQUIRE(state.basis.size() == 1);
  CHECK(std::fabs(std::fabs(state.basis[0][0]) - 0.6) < 1e-8);
  CHECK(std::fabs(std::fabs(state.basis[0][1]) - 0.8) < 1e-8);
  for (const auto& row : rows) {
    const auto projected = pca_project(state, row);
    // Reconstruction: mean + p * basis must reproduce the point.
    for (std::size_t i = 0; i < 2; ++i) {
      const double rebuilt = state.mean[i] + projected[0] * state.basis[0][i];
      REQUIRE(rebuilt == doctest::Approx(row[i]).epsilon(1e-8));
    }
  }
}

TEST_CASE("pca matches a dense eigensolver on random 20x10 data") {
  Rng rng = Rng::seeded(53);
  std::vector<std::vector<double>> rows(20, std::vector<double>(10));
  for (auto& row : rows) {
    for (auto& v : row) v = rng.gaussian();
  }
  const unsigned k = 4;
  const auto state = pca_fit(rows, k, 99);

  // Independent oracle: Eigen's self-adjoint solver on the same covariance.
  Eigen::MatrixXd x(20, 10);
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 10; ++j) x(i, j) = rows[i][j];
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered / 20.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  REQUIRE(solver.info() == Eigen::Success);

  // Captured variance per component matches the top eigenvalues.
  for (unsigned c = 0; c < k; ++c) {
    const double oracle = solver.eigenvalues()(9 - c);
    CHECK(state.variances[c] == doctest::Approx(oracle).epsilon(1e-6));
  }
  // Basis vectors align with the oracle eigenvectors up to sign.
  for (unsigned c = 0; c < k; ++c) {
    double dot = 0.0;
    for (int j = 0; j < 10; ++j) dot += state.basis[c][j] * solver.eigenvectors()(j, 9 - c);
    CHECK(std::fabs(dot) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("pca invariants: orthonormal basis, mean projects to zero, full rank") {
  Rng rng = Rng::seeded(54);
  std::vector<std::vector<double>> rows(15, std::vector<double>(6));
  for (auto& row : rows) {
    for (auto& v : row) v = rng.uniform(-2.0, 2.0);
  }
  const auto state = pca_fit(rows, 6, 3);

  for (std::size_t a = 0; a < 6; ++a) {
    for (std::size_t b = 0; b < 6; ++b) {
      double dot = 0.0;
      for (std::size_t j = 0; j < 6; ++j) dot += state.basis[a][j] * state.basis[b][j];
      REQUIRE(std::fabs(dot - (a == b ? 1.0 : 0.0)) < 1e-6);
    }
  }
  const auto zero = pca_project(state, state.mean);
  for (double v : zero) REQUIRE(std::fabs(v) < 1e-8);

  // k = d captures the total variance.
  double captured = 0.0;
  for (double v : state.variances) captured += v;
  double total = 0.0;
  for (std::size_t j = 0; j < 6; ++j) {
    double mean = 0.0;
    for (const auto& row : rows) mean += row[j];
    mean /= rows.size();
    for (const auto& row : rows) total += (row[j] - mean) * (row[j] - mean) / rows.size();
  }
  CHECK(captured == doctest::Approx(total).epsilon(1e-8));
}

TEST_CASE("pca error paths: iteration cap and bad shapes") {
  Rng rng = Rng::seeded(55);
  std::vector<std::vector<double>> rows(12, std::vector<double>(5));
  for (auto& row : rows) {
    for (auto& v : row) v = rng.gaussian();
  }
  CHECK_THROWS_WITH_AS(pca_fit(rows, 3, 1, 1e-14, 1), doctest::Contains("converge"),
                       std::runtime_error);
  CHECK_THROWS_AS(pca_fit(rows, 6, 1), std::invalid_argument);   // k > d
  CHECK_THROWS_AS(pca_fit({}, 1, 1), std::invalid_argument);     // empty
}

TEST_CASE("projection state serialization reproduces the mapping") {
  const LabeledDataset corpus = make_synthetic_corpus(40, 64, 5, 0.8, 777);
  ReductionSpec spec{ReduceMethod::kMultinomial, 64, 12, 2024, 1, 0};
  const auto state = fit_selection(spec, corpus);
  const auto back = parse_projection(serialize_projection(state));
  CHECK(back.selected == state.selected);
  CHECK(back.spec.method == state.spec.method);
  CHECK(back.spec.seed == state.spec.seed);

  // Data-independent methods reproduce from the spec header alone.
  ReductionSpec from_header = back.spec;
  const auto refit = fit_selection(from_header, corpus);
  CHECK(refit.selected == state.selected);
}

TEST_CASE("apply_reduction shapes and pca exclusion") {
  const LabeledDataset corpus = make_synthetic_corpus(20, 50, 4, 0.8, 11);
  ReductionSpec lsh{ReduceMethod::kLsh, 50, 16, 5, 1, 0};
  ProjectionState state;
  state.spec = lsh;
  const auto reduced = apply_reduction(state, corpus);
  CHECK(reduced.dim == 16);
  CHECK(reduced.size() == corpus.size());
  CHECK(reduced.labels == corpus.labels);

  ProjectionState pca_state;
  pca_state.spec.method = ReduceMethod::kPca;
  CHECK_THROWS_AS(apply_reduction(pca_state, corpus), std::invalid_argument);
}
