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

// Numerical search for a good conclusive strategy: a certified lower bound
// on the optimal average success probability.
//
// Support reduction. If a no-error strategy has POVM element E_m = A_m^dagger
// A_m and psi is a member outside class m, then <psi|E_m|psi> = 0 with
// E_m >= 0, so E_m^{1/2} psi = 0 and E_m psi = 0. Hence E_m annihilates
// span(S \ S_m), i.e. E_m is supported on its orthogonal complement. The
// part of that complement outside span(S) never changes the objective, so
// the search keeps E_m = Q_m X_m Q_m^dagger with Q_m = detection_subspace
// and X_m >= 0. No-error then holds by construction.
//
// The remaining problem is linear in (E_1..E_n):
//   maximize   sum_m tr(E_m R_m),  R_m = sum_{k in S_m} eta_mk |psi_mk><psi_mk|
//   subject to E_m >= 0 on K_m,   sum_m E_m <= I.
// It is solved by projected gradient ascent. The Euclidean projection onto
// the feasible set is computed with Dykstra's alternating projections
// between the two convex pieces, each of which has a spectral closed form.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <thread>
#include <utility>
#include <vector>

#include "conclusive/bounds.hpp"
#include "conclusive/ensemble.hpp"
#include "conclusive/numerics.hpp"
#include "conclusive/random.hpp"
#include "conclusive/strategy.hpp"

namespace conclusive {

struct OptimizationConfig {
  std::size_t restarts = 16;
  std::size_t max_iterations = 2000;
  /// Initial step. It grows geometrically each iteration up to kMaxStepScale times this value.
  double step_size = 0.05;
  std::uint64_t seed = 0;
  double tolerance = 1e-7;
  /// Threads used for restarts. Results do not depend on this.
  unsigned workers = 1;
  ValidationTolerances validation{};
};

struct OptimizedStrategy {
  ClassificationStrategy strategy;
  double success_lower_bound = 0.0;   // P_lower, validated
  double upper_bound_reference = 1.0; // closed-form P_max
  bool converged = false;
  std::size_t best_restart = 0;
};

namespace detail {

struct SearchProblem {
  Eigen::Index dim = 0;
  std::vector<ComplexMatrix> support;  // Q_m, d x r_m
  std::vector<ComplexMatrix> weights;  // R_m
};

using Povm = std::vector<ComplexMatrix>;  // E_1..E_n

inline SearchProblem make_problem(const ClassifiedEnsemble& e) {
  SearchProblem p;
  p.dim = e.dim();
  for (int m = 1; m <= e.class_count(); ++m) {
    p.support.push_back(detection_subspace(e, m));
    ComplexMatrix r = ComplexMatrix::Zero(e.dim(), e.dim());
    for (std::size_t a = 0; a < e.size(); ++a) {
      if (e.label(a) == m) r += e.prior(a) * outer(e.state(a));
    }
    p.weights.push_back(std::move(r));
  }
  return p;
}

inline double objective(const SearchProblem& p, const Povm& x) {
  double f = 0.0;
  for (std::size_t m = 0; m < x.size(); ++m) f += (x[m] * p.weights[m]).trace().real();
  return f;
}

/// Nearest PSD matrix supported on span(q).
inline ComplexMatrix project_supported_psd(const ComplexMatrix& q, const ComplexMatrix& x) {
  if (q.cols() == 0) return ComplexMatrix::Zero(x.rows(), x.cols());
  ComplexMatrix reduced = q.adjoint() * x * q;
  reduced = 0.5 * (reduced + reduced.adjoint());
  return q * psd_part(reduced) * q.adjoint();
}

/// Nearest point (summed Frobenius norm) with sum_m E_m <= I: only the sum
/// is constrained, so the correction is shared equally.
inline Povm project_sum_below_identity(Povm x) {
  ComplexMatrix total = ComplexMatrix::Zero(x.front().rows(), x.front().cols());
  for (const auto& e : x) total += e;
  total = 0.5 * (total + total.adjoint());
  const auto eig = hermitian_eig(total);
  if (eig.eigenvalues.maxCoeff() <= 1.0) return x;
  const ComplexMatrix excess = spectral_map(eig, [](double v) { return std::max(v - 1.0, 0.0); });
  const double share = 1.0 / static_cast<double>(x.size());
  for (auto& e : x) e -= share * excess;
  return x;
}

inline double distance_sq(const Povm& a, const Povm& b) {
  double s = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) s += (a[m] - b[m]).squaredNorm();
  return s;
}

/// Euclidean projection onto the feasible set by Dykstra's algorithm.
inline Povm project_feasible(const SearchProblem& p, const Povm& start) {
  constexpr int kMaxSweeps = 500;
  constexpr double kStopSq = 1e-20;
  const std::size_t n = start.size();
  Povm x = start;
  Povm inc_a(n, ComplexMatrix::Zero(p.dim, p.dim));
  Povm inc_b = inc_a;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    Povm y(n);
    double changed = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      y[m] = project_supported_psd(p.support[m], x[m] + inc_a[m]);
      const ComplexMatrix prev = inc_a[m];
      inc_a[m] = x[m] + inc_a[m] - y[m];
      changed += (inc_a[m] - prev).squaredNorm();
    }
    Povm shifted(n);
    for (std::size_t m = 0; m < n; ++m) shifted[m] = y[m] + inc_b[m];
    Povm next = project_sum_below_identity(std::move(shifted));
    for (std::size_t m = 0; m < n; ++m) {
      const ComplexMatrix prev = inc_b[m];
      inc_b[m] = y[m] + inc_b[m] - next[m];
      changed += (inc_b[m] - prev).squaredNorm();
    }
    // The iterate alone can stall far from the projection; the correction
    // terms must settle too.
    changed += distance_sq(next, x);
    x = std::move(next);
    if (changed <= kStopSq) break;
  }
  return x;
}

/// Makes x exactly feasible: supported PSD pieces, then a common scale so
/// the sum fits under I. Both steps preserve the no-error structure.
inline Povm make_feasible(const SearchProblem& p, Povm x) {
  ComplexMatrix total = ComplexMatrix::Zero(p.dim, p.dim);
  for (std::size_t m = 0; m < x.size(); ++m) {
    x[m] = project_supported_psd(p.support[m], x[m]);
    total += x[m];
  }
  const double top = max_eigenvalue(0.5 * (total + total.adjoint()));
  if (top > 1.0) {
    for (auto& e : x) e /= top;
  }
  return x;
}

inline ClassificationStrategy strategy_from_povm(const SearchProblem& p, const Povm& x) {
  ClassificationStrategy s;
  s.dim = p.dim;
  ComplexMatrix rest = ComplexMatrix::Identity(p.dim, p.dim);
  for (const auto& e : x) {
    const ComplexMatrix h = 0.5 * (e + e.adjoint());
    s.class_operators.push_back(psd_sqrt(h));
    rest -= h;
  }
  s.failure_operator = psd_sqrt(0.5 * (rest + rest.adjoint()));
  return s;
}

inline Povm starting_point(const SearchProblem& p, std::size_t restart, std::uint64_t seed) {
  const std::size_t n = p.support.size();
  Povm x(n);
  if (restart == 0) {
    // Scaled projectors onto the supports.
    for (std::size_t m = 0; m < n; ++m) x[m] = p.support[m] * p.support[m].adjoint();
    return make_feasible(p, std::move(x));
  }
  Rng rng(derive_seed(seed, restart));
  for (std::size_t m = 0; m < n; ++m) {
    const Eigen::Index r = p.support[m].cols();
    ComplexMatrix b(r, r);
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index j = 0; j < r; ++j) b(i, j) = Complex(rng.normal(), rng.normal());
    }
    x[m] = p.support[m] * (b * b.adjoint()) * p.support[m].adjoint();
  }
  return make_feasible(p, std::move(x));
}

// The objective is linear, so a longer step lands closer to the maximizer
// and never decreases the objective after projection.
inline constexpr double kStepGrowth = 1.5;
inline constexpr double kMaxStepScale = 100.0;

struct RestartResult {
  Povm povm;
  bool converged = false;
};

inline RestartResult run_restart(const SearchProblem& p, const OptimizationConfig& cfg, std::size_t restart) {
  RestartResult out;
  Povm x = starting_point(p, restart, cfg.seed);
  const std::size_t n = x.size();
  double step = cfg.step_size;
  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    Povm stepped(n);
    for (std::size_t m = 0; m < n; ++m) stepped[m] = x[m] + step * p.weights[m];
    step = std::min(step * kStepGrowth, cfg.step_size * kMaxStepScale);
    Povm next = project_feasible(p, stepped);
    const double moved = std::sqrt(distance_sq(next, x));
    x = std::move(next);
    if (moved <= cfg.tolerance) {
      out.converged = true;
      break;
    }
  }
  out.povm = make_feasible(p, std::move(x));
  return out;
}

}  // namespace detail

inline OptimizedStrategy optimize_classification(const ClassifiedEnsemble& e, const OptimizationConfig& cfg = {}) {
  if (cfg.restarts < 1) throw InputError("restarts must be >= 1");
  if (!(cfg.tolerance > 0.0)) throw InputError("tolerance must be positive");

  OptimizedStrategy best;
  best.upper_bound_reference = success_upper_bound(e);
  best.strategy = ClassificationStrategy::trivial(e.dim(), e.class_count());
  best.success_lower_bound = validate_strategy(e, best.strategy, cfg.validation).average_success;
  best.converged = true;

  const detail::SearchProblem problem = detail::make_problem(e);
  const bool any_support = std::any_of(problem.support.begin(), problem.support.end(),
                                       [](const ComplexMatrix& q) { return q.cols() > 0; });
  if (!any_support) return best;

  std::vector<detail::RestartResult> results(cfg.restarts);
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(cfg.restarts)));
  if (workers == 1) {
    for (std::size_t r = 0; r < cfg.restarts; ++r) results[r] = detail::run_restart(problem, cfg, r);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t r = w; r < cfg.restarts; r += workers) results[r] = detail::run_restart(problem, cfg, r);
      });
    }
  }

  // argmax of validated success; strict comparison keeps the lowest index
  // on ties.
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < results.size(); ++r) {
    ClassificationStrategy s = detail::strategy_from_povm(problem, results[r].povm);
    const StrategyValidation v = validate_strategy(e, s, cfg.validation);
    if (!v.valid()) continue;
    if (v.average_success > best_value) {
      best_value = v.average_success;
      best.strategy = std::move(s);
      best.success_lower_bound = v.average_success;
      best.converged = results[r].converged;
      best.best_restart = r;
    }
  }
  return best;
}

struct Bracket {
  double lower = 0.0;
  double upper = 1.0;
};

inline Bracket bracket_optimum(const ClassifiedEnsemble& e, const OptimizationConfig& cfg = {}) {
  const auto opt = optimize_classification(e, cfg);
  return {opt.success_lower_bound, success_upper_bound(e)};
}

}  // namespace conclusive
