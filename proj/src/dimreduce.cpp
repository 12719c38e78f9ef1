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

#include "ppsf/dimreduce.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "ppsf/serial.hpp"

namespace ppsf {

std::string to_string(ReduceMethod m) {
  switch (m) {
    case ReduceMethod::kLsh: return "lsh";
    case ReduceMethod::kHashSpace: return "hashspace";
    case ReduceMethod::kDfPrune: return "dfprune";
    case ReduceMethod::kUniform: return "uniform";
    case ReduceMethod::kMultinomial: return "multinomial";
    case ReduceMethod::kPca: return "pca";
  }
  throw std::invalid_argument("unknown reduce method");
}

ReduceMethod reduce_method_from_string(const std::string& name) {
  if (name == "lsh") return ReduceMethod::kLsh;
  if (name == "hashspace") return ReduceMethod::kHashSpace;
  if (name == "dfprune") return ReduceMethod::kDfPrune;
  if (name == "uniform") return ReduceMethod::kUniform;
  if (name == "multinomial") return ReduceMethod::kMultinomial;
  if (name == "pca") return ReduceMethod::kPca;
  throw std::invalid_argument("unknown reduce method: " + name);
}

namespace {

std::uint64_t mix_counters(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = seed;
  s = splitmix64(s) ^ a;
  s = splitmix64(s) ^ b;
  return splitmix64(s);
}

double u64_to_unit_double(std::uint64_t v) {
  return static_cast<double>(v >> 11) * 0x1.0p-53;
}

}  // namespace

double lsh_hyperplane_entry(std::uint64_t seed, std::uint64_t hyperplane,
                            std::uint64_t coordinate) {
  // Box-Muller on two counter-mode uniforms.
  double u1 = u64_to_unit_double(mix_counters(seed, hyperplane, 2 * coordinate));
  const double u2 = u64_to_unit_double(mix_counters(seed, hyperplane, 2 * coordinate + 1));
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::vector<std::uint8_t> lsh_project(const ReductionSpec& spec,
                                      const SparseBinaryVector& x) {
  if (spec.method != ReduceMethod::kLsh) {
    throw std::invalid_argument("lsh_project: spec method is not lsh");
  }
  std::vector<std::uint8_t> bits(spec.target_dim, 0);
  for (std::uint64_t j = 0; j < spec.target_dim; ++j) {
    double dot = 0.0;
    for (std::uint64_t idx : x.indices) {
      dot += lsh_hyperplane_entry(spec.seed, j, idx);
    }
    bits[j] = dot >= 0.0 ? 1 : 0;  // tie at exactly 0 lands on the 1 side
  }
  return bits;
}

SparseBinaryVector hashspace_reduce(const ReductionSpec& spec,
                                    const SparseBinaryVector& x) {
  if (spec.method != ReduceMethod::kHashSpace) {
    throw std::invalid_argument("hashspace_reduce: spec method is not hashspace");
  }
  if (spec.hash_modulus == 0) {
    throw std::invalid_argument("hashspace_reduce: hash modulus must be >= 1");
  }
  SparseBinaryVector out;
  out.dim = spec.hash_modulus;
  out.indices.reserve(x.indices.size());
  for (std::uint64_t idx : x.indices) out.indices.push_back(idx % spec.hash_modulus);
  std::sort(out.indices.begin(), out.indices.end());
  out.indices.erase(std::unique(out.indices.begin(), out.indices.end()),
                    out.indices.end());
  return out;
}

DiscreteSampler::DiscreteSampler(const std::vector<double>& weights) {
  if (weights.empty()) throw std::invalid_argument("DiscreteSampler: no weights");
  cumulative_.reserve(weights.size());
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) {
      throw std::invalid_argument("DiscreteSampler: weights must be finite and >= 0");
    }
    total += w;
    cumulative_.push_back(total);
  }
  if (total <= 0.0) throw std::invalid_argument("DiscreteSampler: all weights zero");
}

std::size_t DiscreteSampler::draw(Rng& rng) const {
  const double u = rng.next_double() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return static_cast<std::size_t>(std::min<std::ptrdiff_t>(
      it - cumulative_.begin(), static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> document_frequencies(
    const LabeledDataset& corpus) {
  std::unordered_map<std::uint64_t, std::uint64_t> df;
  for (const auto& doc : corpus.instances) {
    for (std::uint64_t idx : doc.indices) ++df[idx];
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out(df.begin(), df.end());
  std::sort(out.begin(), out.end());
  return out;
}

ProjectionState fit_selection(const ReductionSpec& spec, const LabeledDataset& corpus) {
  ProjectionState state;
  state.spec = spec;
  switch (spec.method) {
    case ReduceMethod::kDfPrune: {
      if (corpus.size() == 0) throw std::invalid_argument("dfprune: empty corpus");
      for (const auto& [feature, df] : document_frequencies(corpus)) {
        if (df >= spec.df_threshold) state.selected.push_back(feature);
      }
      state.spec.target_dim = state.selected.size();
      return state;
    }
    case ReduceMethod::kUniform: {
      if (spec.target_dim > spec.source_dim) {
        throw std::invalid_argument("uniform selection: target above source dim");
      }
      Rng rng = Rng::seeded(spec.seed).derive("uniform-select");
      std::set<std::uint64_t> chosen;
      while (chosen.size() < spec.target_dim) {
        chosen.insert(rng.below(spec.source_dim));
      }
      state.selected.assign(chosen.begin(), chosen.end());
      return state;
    }
    case ReduceMethod::kMultinomial: {
      if (corpus.size() == 0) throw std::invalid_argument("multinomial: empty corpus");
      const auto df = document_frequencies(corpus);
      if (df.size() < spec.target_dim) {
        throw std::runtime_error(
            "multinomial: fewer features with nonzero document frequency than target");
      }
      std::vector<double> weights(df.size());
      for (std::size_t i = 0; i < df.size(); ++i) {
        weights[i] = static_cast<double>(df[i].second);
      }
      DiscreteSampler sampler(weights);
      Rng rng = Rng::seeded(spec.seed).derive("multinomial-select");
      std::set<std::uint64_t> chosen;
      while (chosen.size() < spec.target_dim) {
        chosen.insert(df[sampler.draw(rng)].first);
      }
      state.selected.assign(chosen.begin(), chosen.end());
      return state;
    }
    default:
      throw std::invalid_argument("fit_selection: method has no index-selection fit");
  }
}

SparseBinaryVector project_selection(const ProjectionState& state,
                                     const SparseBinaryVector& x) {
  SparseBinaryVector out;
  out.dim = state.selected.size();
  for (std::uint64_t idx : x.indices) {
    const auto it = std::lower_bound(state.selected.begin(), state.selected.end(), idx);
    if (it != state.selected.end() && *it == idx) {
      out.indices.push_back(static_cast<std::uint64_t>(it - state.selected.begin()));
    }
  }
  return out;
}

namespace {

// Modified Gram-Schmidt on the columns of m (n rows of length k).
void orthonormalize_columns(std::vector<std::vector<double>>& cols) {
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t prev = 0; prev < j; ++prev) {
      double dot = 0.0;
      for (std::size_t i = 0; i < cols[j].size(); ++i) dot += cols[j][i] * cols[prev][i];
      for (std::size_t i = 0; i < cols[j].size(); ++i) cols[j][i] -= dot * cols[prev][i];
    }
    double norm = 0.0;
    for (double v : cols[j]) norm += v * v;
    norm = std::sqrt(norm);
    if (norm < 1e-300) throw std::runtime_error("pca: degenerate basis column");
    for (double& v : cols[j]) v /= norm;
  }
}

}  // namespace

ProjectionState pca_fit(const std::vector<std::vector<double>>& rows,
                        std::uint64_t target_dim, std::uint64_t seed, double tol,
                        unsigned max_iters) {
  if (rows.empty()) throw std::invalid_argument("pca_fit: empty input");
  const std::size_t n = rows.size();
  const std::size_t d = rows[0].size();
  if (target_dim == 0 || target_dim > std::min<std::size_t>(n, d)) {
    throw std::invalid_argument("pca_fit: target dim must be in [1, min(n, d)]");
  }
  for (const auto& r : rows) {
    if (r.size() != d) throw std::invalid_argument("pca_fit: ragged input");
  }

  ProjectionState state;
  state.spec.method = ReduceMethod::kPca;
  state.spec.source_dim = d;
  state.spec.target_dim = target_dim;
  state.spec.seed = seed;

  state.mean.assign(d, 0.0);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < d; ++i) state.mean[i] += r[i];
  }
  for (double& v : state.mean) v /= static_cast<double>(n);

  // Population covariance, dense; this path is for desk-scale d.
  std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
  for (const auto& r : rows) {
    std::vector<double> c(d);
    for (std::size_t i = 0; i < d; ++i) c[i] = r[i] - state.mean[i];
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i; j < d; ++j) cov[i][j] += c[i] * c[j];
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov[i][j] /= static_cast<double>(n);
      cov[j][i] = cov[i][j];
    }
  }

  Rng rng = Rng::seeded(seed).derive("pca-init");
  std::vector<std::vector<double>> basis(target_dim, std::vector<double>(d));
  for (auto& col : basis) {
    for (double& v : col) v = rng.gaussian();
  }
  orthonormalize_columns(basis);

  bool converged = false;
  for (unsigned iter = 0; iter < max_iters && !converged; ++iter) {
    std::vector<std::vector<double>> next(target_dim, std::vector<double>(d, 0.0));
    for (std::size_t c = 0; c < target_dim; ++c) {
      for (std::size_t i = 0; i < d; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < d; ++j) sum += cov[i][j] * basis[c][j];
        next[c][i] = sum;
      }
    }
    orthonormalize_columns(next);
    converged = true;
    for (std::size_t c = 0; c < target_dim && converged; ++c) {
      double dot = 0.0;
      for (std::size_t i = 0; i < d; ++i) dot += next[c][i] * basis[c][i];
      if (1.0 - std::fabs(dot) > tol) converged = false;
    }
    basis = std::move(next);
  }
  if (!converged) throw std::runtime_error("pca_fit: orthogonal iteration did not converge");

  state.basis = std::move(basis);
  state.variances.resize(target_dim);
  for (std::size_t c = 0; c < target_dim; ++c) {
    // Rayleigh quotient v' S v of the converged direction.
    double quad = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < d; ++j) sum += cov[i][j] * state.basis[c][j];
      quad += state.basis[c][i] * sum;
    }
    state.variances[c] = quad;
  }
  return state;
}

std::vector<double> pca_project(const ProjectionState& state,
                                const std::vector<double>& row) {
  if (state.spec.method != ReduceMethod::kPca) {
    throw std::invalid_argument("pca_project: state is not a pca fit");
  }
  if (row.size() != state.mean.size()) {
    throw std::invalid_argument("pca_project: dimension mismatch");
  }
  std::vector<double> out(state.basis.size(), 0.0);
  for (std::size_t c = 0; c < state.basis.size(); ++c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      sum += state.basis[c][i] * (row[i] - state.mean[i]);
    }
    out[c] = sum;
  }
  return out;
}

std::vector<double> pca_project(const ProjectionState& state,
                                const SparseBinaryVector& x) {
  std::vector<double> dense(state.mean.size(), 0.0);
  for (std::uint64_t idx : x.indices) {
    if (idx >= dense.size()) throw std::out_of_range("pca_project: index out of range");
    dense[idx] = 1.0;
  }
  return pca_project(state, dense);
}

LabeledDataset apply_reduction(const ProjectionState& state, const LabeledDataset& data) {
  LabeledDataset out;
  out.labels = data.labels;
  switch (state.spec.method) {
    case ReduceMethod::kLsh: {
      out.dim = state.spec.target_dim;
      for (const auto& doc : data.instances) {
        const auto bits = lsh_project(state.spec, doc);
        SparseBinaryVector v;
        v.dim = state.spec.target_dim;
        for (std::uint64_t j = 0; j < bits.size(); ++j) {
          if (bits[j]) v.indices.push_back(j);
        }
        out.instances.push_back(std::move(v));
      }
      return out;
    }
    case ReduceMethod::kHashSpace: {
      out.dim = state.spec.hash_modulus;
      for (const auto& doc : data.instances) {
        out.instances.push_back(hashspace_reduce(state.spec, doc));
      }
      return out;
    }
    case ReduceMethod::kDfPrune:
    case ReduceMethod::kUniform:
    case ReduceMethod::kMultinomial: {
      out.dim = state.selected.size();
      for (const auto& doc : data.instances) {
        out.instances.push_back(project_selection(state, doc));
      }
      return out;
    }
    case ReduceMethod::kPca:
      throw std::invalid_argument(
          "apply_reduction: pca is data dependent and excluded from protocol data paths");
  }
  throw std::invalid_argument("apply_reduction: unknown method");
}

std::vector<std::uint8_t> serialize_projection(const ProjectionState& state) {
  ByteWriter w;
  w.put_u8(static_cast<std::uint8_t>(state.spec.method));
  w.put_u64(state.spec.source_dim);
  w.put_u64(state.spec.target_dim);
  w.put_u64(state.spec.seed);
  w.put_u64(state.spec.df_threshold);
  w.put_u64(state.spec.hash_modulus);
  w.put_u64(state.selected.size());
  for (std::uint64_t v : state.selected) w.put_u64(v);
  w.put_u64(state.mean.size());
  for (double v : state.mean) w.put_f64(v);
  w.put_u64(state.basis.size());
  for (const auto& row : state.basis) {
    w.put_u64(row.size());
    for (double v : row) w.put_f64(v);
  }
  w.put_u64(state.variances.size());
  for (double v : state.variances) w.put_f64(v);
  return w.take();
}

ProjectionState parse_projection(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  ProjectionState state;
  const std::uint8_t method = r.get_u8();
  if (method > static_cast<std::uint8_t>(ReduceMethod::kPca)) {
    throw ParseError("projection: unknown method tag");
  }
  state.spec.method = static_cast<ReduceMethod>(method);
  state.spec.source_dim = r.get_u64();
  state.spec.target_dim = r.get_u64();
  state.spec.seed = r.get_u64();
  state.spec.df_threshold = r.get_u64();
  state.spec.hash_modulus = r.get_u64();
  state.selected.resize(r.get_u64());
  for (auto& v : state.selected) v = r.get_u64();
  state.mean.resize(r.get_u64());
  for (auto& v : state.mean) v = r.get_f64();
  state.basis.resize(r.get_u64());
  for (auto& row : state.basis) {
    row.resize(r.get_u64());
    for (auto& v : row) v = r.get_f64();
  }
  state.variances.resize(r.get_u64());
  for (auto& v : state.variances) v = r.get_f64();
  if (!r.exhausted()) throw ParseError("projection: trailing bytes");
  return state;
}

}  // namespace ppsf
