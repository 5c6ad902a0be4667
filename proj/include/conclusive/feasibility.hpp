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

// Which members of an ensemble can be identified without error, and why.
//
// A member can be assigned to its class with nonzero probability and no
// error exactly when it has a component orthogonal to every state of the
// other classes. The split of the member into "expansion over the other
// classes" plus "orthogonal remainder" is what `decompose` computes.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "conclusive/ensemble.hpp"
#include "conclusive/numerics.hpp"

namespace conclusive {

struct Decomposition {
  std::size_t state_index = 0;
  /// Members outside the state's class, in ascending order; parallel to
  /// `coefficients`.
  std::vector<std::size_t> complement_indices;
  /// Minimum-norm expansion of the in-span component over the complement
  /// states.
  std::vector<Complex> coefficients;
  /// Norm of the orthogonal remainder as computed, before thresholding.
  double residual_norm = 0.0;
  /// d. Zero when residual_norm <= kRankTol.
  Complex residual_weight{0.0, 0.0};
  /// Unit vector orthogonal to every complement state; absent when d = 0.
  std::optional<ComplexVector> residual_direction;

  double residual_weight_sq() const { return std::norm(residual_weight); }
};

namespace detail {

/// Minimum-norm least-squares solution of columns * x = target, dropping
/// singular values <= rank_tol.
inline Eigen::VectorXcd min_norm_solve(const ComplexMatrix& columns, const ComplexVector& target,
                                       double rank_tol) {
  if (columns.cols() == 0) return Eigen::VectorXcd(0);
  Eigen::JacobiSVD<ComplexMatrix> svd(columns, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sigma = svd.singularValues();
  Eigen::VectorXcd utb = svd.matrixU().adjoint() * target;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    utb(k) = sigma(k) > rank_tol ? utb(k) / sigma(k) : Complex{0.0, 0.0};
  }
  return svd.matrixV() * utb;
}

}  // namespace detail

inline Decomposition decompose(const ClassifiedEnsemble& e, std::size_t idx) {
  if (idx >= e.size()) throw InputError("state index out of range");
  Decomposition out;
  out.state_index = idx;
  out.complement_indices = e.indices_outside(e.label(idx));
  const auto others = e.states_outside(e.label(idx));
  const ComplexVector& target = e.state(idx);

  const SpanSplit split = project_onto_span(others, target);

  ComplexMatrix columns(e.dim(), static_cast<Eigen::Index>(others.size()));
  for (std::size_t k = 0; k < others.size(); ++k) columns.col(static_cast<Eigen::Index>(k)) = others[k];
  const Eigen::VectorXcd c = detail::min_norm_solve(columns, split.projection, kRankTol);
  out.coefficients.assign(c.data(), c.data() + c.size());

  out.residual_norm = split.residual.norm();
  if (out.residual_norm > kRankTol) {
    out.residual_weight = out.residual_norm;
    out.residual_direction = split.residual / out.residual_norm;
  }
  return out;
}

struct StateFeasibility {
  std::size_t state_index = 0;
  bool classifiable = false;
  /// Raw |d|^2 before thresholding, so callers can apply a stricter cut.
  double residual_weight_sq = 0.0;
};

struct FeasibilityReport {
  std::vector<StateFeasibility> per_state;
  bool feasible = false;
};

inline FeasibilityReport classifiable_states(const ClassifiedEnsemble& e) {
  FeasibilityReport report;
  for (std::size_t a = 0; a < e.size(); ++a) {
    const auto d = decompose(e, a);
    const double raw_sq = d.residual_norm * d.residual_norm;
    const bool ok = raw_sq > kRankTol * kRankTol;
    report.per_state.push_back({a, ok, raw_sq});
    report.feasible = report.feasible || ok;
  }
  return report;
}

inline bool is_conclusively_classifiable(const ClassifiedEnsemble& e) {
  return classifiable_states(e).feasible;
}

}  // namespace conclusive
