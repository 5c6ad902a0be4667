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

// Closed-form limits on conclusive classification.
//
// For members a, b in different classes, any no-error strategy has failure
// probabilities with sqrt(gamma_a gamma_b) >= |<psi_a|psi_b>|. Weighting
// each such inequality by the priors and class sizes and applying AM-GM
// gives a lower bound on the average failure probability
//
//   Q >= sum over ordered class pairs i != j, k in S_i, l in S_j of
//        sqrt(eta_ik eta_jl / ((N - m_i)(N - m_j))) |<psi_ik|psi_jl>|
//
// and hence P <= 1 - Q_min. The double sum runs over ORDERED class pairs,
// so every unordered pair of members appears twice; this is what makes the
// per-pair AM-GM terms (which carry a factor 2) add up to Q.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <utility>

#include "conclusive/ensemble.hpp"
#include "conclusive/error.hpp"

namespace conclusive {

/// Member index pair (a, b) with a < b.
using MemberPair = std::pair<std::size_t, std::size_t>;

/// |<psi_a|psi_b>| for every unordered cross-class pair: the smallest value
/// sqrt(gamma_a gamma_b) can take.
inline std::map<MemberPair, double> pairwise_failure_bound(const ClassifiedEnsemble& e) {
  const GramMatrix g = gram_matrix(e);
  std::map<MemberPair, double> out;
  for (std::size_t a = 0; a < e.size(); ++a) {
    for (std::size_t b = a + 1; b < e.size(); ++b) {
      if (e.label(a) != e.label(b)) {
        out[{a, b}] = std::abs(g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)));
      }
    }
  }
  return out;
}

/// Q_min; see the header comment for the summation convention.
inline double average_failure_lower_bound(const ClassifiedEnsemble& e) {
  const double total = static_cast<double>(e.size());
  double q = 0.0;
  for (const auto& [pair, overlap] : pairwise_failure_bound(e)) {
    const auto [a, b] = pair;
    const double rest_a = total - static_cast<double>(e.class_size(e.label(a)));
    const double rest_b = total - static_cast<double>(e.class_size(e.label(b)));
    q += 2.0 * std::sqrt(e.prior(a) * e.prior(b) / (rest_a * rest_b)) * overlap;
  }
  return q;
}

inline double success_upper_bound(const ClassifiedEnsemble& e) {
  return std::clamp(1.0 - average_failure_lower_bound(e), 0.0, 1.0);
}

struct BoundReport {
  std::map<MemberPair, double> pairwise_min_failure_products;
  double failure_lower_bound = 0.0;           // Q_min
  double success_upper_bound = 1.0;           // P_max, clamped to [0, 1]
  double success_upper_bound_unclamped = 1.0; // 1 - Q_min
};

inline BoundReport bound_report(const ClassifiedEnsemble& e) {
  BoundReport r;
  r.pairwise_min_failure_products = pairwise_failure_bound(e);
  r.failure_lower_bound = average_failure_lower_bound(e);
  r.success_upper_bound_unclamped = 1.0 - r.failure_lower_bound;
  r.success_upper_bound = std::clamp(r.success_upper_bound_unclamped, 0.0, 1.0);
  return r;
}

/// Optimal success for two equiprobable states with overlap magnitude s.
inline double idp_limit(double overlap) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw InputError("overlap must lie in [0, 1]");
  return 1.0 - overlap;
}

/// Optimal success for two states with priors p >= q and overlap s.
///
/// While the failure split gamma_1 = s sqrt(q/p), gamma_2 = s sqrt(p/q) is
/// admissible (s <= sqrt(q/p)) the optimum is 1 - 2 sqrt(pq) s. Beyond that
/// the less likely state always fails (gamma_2 = 1), gamma_1 = s^2, and the
/// optimum is p (1 - s^2). The second branch is confirmed against the
/// numerical optimizer in the tests.
inline double jaeger_shimony(double p, double q, double overlap) {
  if (!(q > 0.0 && p >= q)) throw InputError("priors must satisfy p >= q > 0");
  if (std::abs(p + q - 1.0) > 1e-9) throw InputError("priors do not sum to 1");
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw InputError("overlap must lie in [0, 1]");
  if (overlap <= std::sqrt(q / p)) return 1.0 - 2.0 * std::sqrt(p * q) * overlap;
  return p * (1.0 - overlap * overlap);
}

}  // namespace conclusive
