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

#ifndef PPSF_TESTS_TESTUTIL_HPP_
#define PPSF_TESTS_TESTUTIL_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "ppsf/features.hpp"
#include "ppsf/logistic.hpp"
#include "ppsf/paillier.hpp"
#include "ppsf/rng.hpp"

namespace ppsf::testutil {

// Toy key over N = 15 (p=3, q=5): the smallest field usable for exhaustive
// oracles.
inline KeyPair tiny_key() { return keypair_from_primes(BigInt(3), BigInt(5)); }

// N = 221 (p=13, q=17), still below 255 so full-field sweeps stay cheap.
inline KeyPair small_key() { return keypair_from_primes(BigInt(13), BigInt(17)); }

// N = 60491 (p=251, q=241): collision probabilities ~1/60000, good for
// distinctness checks.
inline KeyPair medium_key() { return keypair_from_primes(BigInt(251), BigInt(241)); }

// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    worst = std::max(worst, std::fabs(f - static_cast<double>(i) / n));
    worst = std::max(worst, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  return worst;
}

// Critical value of the one-sample KS test, asymptotic form c(a)/sqrt(n).
inline double ks_critical(double alpha, std::size_t n) {
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  return c / std::sqrt(static_cast<double>(n));
}

// Regularized upper incomplete gamma Q(s, x), series + continued fraction.
inline double gamma_q(double s, double x) {
  if (x < 0.0 || s <= 0.0) return 1.0;
  if (x == 0.0) return 1.0;
  const double log_gamma = std::lgamma(s);
  if (x < s + 1.0) {
    // Lower series P(s,x), return 1 - P.
    double term = 1.0 / s;
    double sum = term;
    double a = s;
    for (int i = 0; i < 500; ++i) {
      a += 1.0;
      term *= x / a;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
    }
    const double p = sum * std::exp(-x + s * std::log(x) - log_gamma);
    return 1.0 - p;
  }
  // Continued fraction for Q directly (Lentz).
  double b = x + 1.0 - s;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + s * std::log(x) - log_gamma);
}

// Survival function of the chi-square distribution with df degrees.
inline double chi2_sf(double statistic, double df) {
  return gamma_q(df / 2.0, statistic / 2.0);
}

// O(P*N) pairwise AUC oracle with half credit for ties.
inline double auc_bruteforce(const std::vector<double>& scores,
                             const std::vector<int>& labels) {
  double concordant = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != -1) continue;
      ++pairs;
      if (scores[i] > scores[j]) {
        concordant += 1.0;
      } else if (scores[i] == scores[j]) {
        concordant += 0.5;
      }
    }
  }
  return concordant / static_cast<double>(pairs);
}

// Central finite difference of the log-likelihood.
inline std::vector<double> gradient_fd(const std::vector<double>& weights,
                                       const LabeledDataset& data, double step = 1e-5) {
  std::vector<double> grad(weights.size());
  std::vector<double> probe = weights;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    probe[j] = weights[j] + step;
    const double up = log_likelihood(probe, data);
    probe[j] = weights[j] - step;
    const double down = log_likelihood(probe, data);
    probe[j] = weights[j];
    grad[j] = (up - down) / (2.0 * step);
  }
  return grad;
}

inline SparseBinaryVector random_sparse(Rng& rng, std::uint64_t dim, unsigned count) {
  SparseBinaryVector v;
  v.dim = dim;
  std::vector<std::uint64_t> idx;
  while (idx.size() < count) {
    const std::uint64_t candidate = rng.below(dim);
    if (std::find(idx.begin(), idx.end(), candidate) == idx.end()) {
      idx.push_back(candidate);
    }
  }
  std::sort(idx.begin(), idx.end());
  v.indices = std::move(idx);
  return v;
}

inline LabeledDataset random_dataset(Rng& rng, std::size_t docs, std::uint64_t dim,
                                     unsigned per_doc) {
  LabeledDataset data;
  data.dim = dim;
  for (std::size_t i = 0; i < docs; ++i) {
    data.instances.push_back(random_sparse(rng, dim, per_doc));
    data.labels.push_back(i % 2 == 0 ? 1 : -1);
  }
  return data;
}

}  // namespace ppsf::testutil

#endif  // PPSF_TESTS_TESTUTIL_HPP_
