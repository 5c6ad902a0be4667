// Copyright 2026 The Conclusive Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Sampled check of a strategy: prepare members according to the priors,
// measure, and compare outcome frequencies with the Born probabilities.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "conclusive/ensemble.hpp"
#include "conclusive/random.hpp"
#include "conclusive/strategy.hpp"

namespace conclusive {

/// Outcome probabilities below this are sampled as exactly zero.
inline constexpr double kSamplingFloor = 1e-8;

struct SimulationOptions {
  /// Trials per shard. Shard k draws from stream derive_seed(seed, k), so
  /// counts depend on (seed, shard_size) but not on `workers`.
  std::size_t shard_size = std::size_t{1} << 16;
  unsigned workers = 1;
  ValidationTolerances tolerances{};
};

struct SimulationResult {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  /// counts[a][o]: member a prepared, outcome o observed; o = n is failure.
  std::vector<std::vector<std::uint64_t>> counts;
  std::vector<std::uint64_t> member_trials;
  double empirical_success = 0.0;
  double predicted_success = 0.0;
  /// max over cells of |empirical - predicted| / binomial sigma; cells with
  /// predicted probability 0 or 1 contribute 0 if matched exactly and
  /// infinity otherwise.
  double max_deviation_sigma = 0.0;
  /// Same statistic for the overall success frequency.
  double success_deviation_sigma = 0.0;
};

namespace detail {

inline std::vector<double> cumulative(std::vector<double> weights) {
  double total = 0.0;
  for (double& w : weights) {
    total += w;
    w = total;
  }
  for (double& w : weights) w /= total;
  weights.back() = 1.0;
  return weights;
}

inline std::size_t draw(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

/// Deviation in sigmas of an observed count from a binomial prediction.
inline double sigma_deviation(double p, std::uint64_t count, std::uint64_t total) {
  if (total == 0) return 0.0;
  if (p < kSamplingFloor || p > 1.0 - kSamplingFloor) {
    const std::uint64_t expected = p < kSamplingFloor ? 0 : total;
    return count == expected ? 0.0 : std::numeric_limits<double>::infinity();
  }
  const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(total));
  return std::abs(static_cast<double>(count) / static_cast<double>(total) - p) / sigma;
}

}  // namespace detail

inline SimulationResult simulate(const ClassifiedEnsemble& e, const ClassificationStrategy& s, std::size_t trials,
                                 std::uint64_t seed, const SimulationOptions& options = {}) {
  if (trials < 1) throw InputError("trials must be >= 1");
  if (options.shard_size < 1) throw InputError("shard size must be >= 1");
  const StrategyValidation validation = validate_strategy(e, s, options.tolerances);
  if (!validation.valid()) throw DomainError("strategy failed validation");

  const Eigen::MatrixXd born = outcome_probabilities(e, s);
  const std::size_t members = e.size();
  const std::size_t outcomes = born.cols();

  // Sampling tables: sub-floor probabilities removed, rest renormalized.
  std::vector<std::vector<double>> outcome_prob(members, std::vector<double>(outcomes));
  std::vector<std::vector<double>> outcome_cdf(members);
  for (std::size_t a = 0; a < members; ++a) {
    for (std::size_t o = 0; o < outcomes; ++o) {
      const double p = born(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(o));
      outcome_prob[a][o] = p < kSamplingFloor ? 0.0 : p;
    }
    double total = 0.0;
    for (double p : outcome_prob[a]) total += p;
    for (double& p : outcome_prob[a]) p /= total;
    outcome_cdf[a] = detail::cumulative(outcome_prob[a]);
  }
  std::vector<double> priors;
  for (std::size_t a = 0; a < members; ++a) priors.push_back(e.prior(a));
  const std::vector<double> member_cdf = detail::cumulative(priors);

  const std::size_t shards = (trials + options.shard_size - 1) / options.shard_size;
  using Table = std::vector<std::vector<std::uint64_t>>;
  std::vector<Table> shard_counts(shards, Table(members, std::vector<std::uint64_t>(outcomes, 0)));
  auto run_shard = [&](std::size_t k) {
    Rng rng(derive_seed(seed, k));
    const std::size_t begin = k * options.shard_size;
    const std::size_t end = std::min(trials, begin + options.shard_size);
    Table& table = shard_counts[k];
    for (std::size_t t = begin; t < end; ++t) {
      const std::size_t a = detail::draw(member_cdf, rng.uniform());
      const std::size_t o = detail::draw(outcome_cdf[a], rng.uniform());
      ++table[a][o];
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(shards)));
  if (workers == 1) {
    for (std::size_t k = 0; k < shards; ++k) run_shard(k);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < shards; k += workers) run_shard(k);
      });
    }
  }

  SimulationResult r;
  r.trials = trials;
  r.seed = seed;
  r.counts.assign(members, std::vector<std::uint64_t>(outcomes, 0));
  r.member_trials.assign(members, 0);
  for (const auto& table : shard_counts) {
    for (std::size_t a = 0; a < members; ++a) {
      for (std::size_t o = 0; o < outcomes; ++o) r.counts[a][o] += table[a][o];
    }
  }
  std::uint64_t successes = 0;
  for (std::size_t a = 0; a < members; ++a) {
    for (std::size_t o = 0; o < outcomes; ++o) r.member_trials[a] += r.counts[a][o];
    successes += r.counts[a][static_cast<std::size_t>(e.label(a) - 1)];
  }
  r.empirical_success = static_cast<double>(successes) / static_cast<double>(trials);
  r.predicted_success = validation.average_success;
  for (std::size_t a = 0; a < members; ++a) {
    for (std::size_t o = 0; o < outcomes; ++o) {
      r.max_deviation_sigma = std::max(
          r.max_deviation_sigma, detail::sigma_deviation(outcome_prob[a][o], r.counts[a][o], r.member_trials[a]));
    }
  }
  r.success_deviation_sigma = detail::sigma_deviation(r.predicted_success, successes, trials);
  return r;
}

}  // namespace conclusive
