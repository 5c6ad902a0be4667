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

// Measurement strategies for conclusive classification.
//
// A strategy is stored in Kraus form: one detection operator A_m per class
// plus a failure operator A_I, with A_I^dagger A_I + sum_m A_m^dagger A_m = I.
// Outcome m must never fire on a state outside class m.

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "conclusive/ensemble.hpp"
#include "conclusive/error.hpp"
#include "conclusive/feasibility.hpp"
#include "conclusive/numerics.hpp"

namespace conclusive {

inline constexpr double kCompletenessTol = 1e-8;
inline constexpr double kLeakageTol = 1e-8;

struct ValidationTolerances {
  double completeness = kCompletenessTol;
  double leakage = kLeakageTol;
};

struct ClassificationStrategy {
  Eigen::Index dim = 0;
  std::vector<ComplexMatrix> class_operators;  // A_1..A_n
  ComplexMatrix failure_operator;              // A_I

  int class_count() const { return static_cast<int>(class_operators.size()); }

  /// A_I^dagger A_I + sum_m A_m^dagger A_m.
  ComplexMatrix resolution() const {
    ComplexMatrix total = failure_operator.adjoint() * failure_operator;
    for (const auto& a : class_operators) total += a.adjoint() * a;
    return total;
  }

  double completeness_defect() const {
    return max_abs(resolution() - ComplexMatrix::Identity(dim, dim));
  }

  /// Never detects anything: A_I = I, A_m = 0.
  static ClassificationStrategy trivial(Eigen::Index dim, int classes) {
    ClassificationStrategy s;
    s.dim = dim;
    s.class_operators.assign(static_cast<std::size_t>(classes), ComplexMatrix::Zero(dim, dim));
    s.failure_operator = ComplexMatrix::Identity(dim, dim);
    return s;
  }
};

inline void require_compatible(const ClassifiedEnsemble& e, const ClassificationStrategy& s) {
  const auto d = e.dim();
  bool ok = s.dim == d && s.class_count() == e.class_count() && s.failure_operator.rows() == d &&
            s.failure_operator.cols() == d;
  for (const auto& a : s.class_operators) ok = ok && a.rows() == d && a.cols() == d;
  if (!ok) throw InputError("dimension mismatch");
}

/// Born probabilities <psi_a|A_m^dagger A_m|psi_a>: one row per member, one
/// column per class, and a final column for the failure outcome.
inline Eigen::MatrixXd outcome_probabilities(const ClassifiedEnsemble& e, const ClassificationStrategy& s) {
  require_compatible(e, s);
  const auto n = s.class_count();
  Eigen::MatrixXd probs(static_cast<Eigen::Index>(e.size()), n + 1);
  for (std::size_t a = 0; a < e.size(); ++a) {
    const auto row = static_cast<Eigen::Index>(a);
    for (int m = 0; m < n; ++m) {
      probs(row, m) = (s.class_operators[static_cast<std::size_t>(m)] * e.state(a)).squaredNorm();
    }
    probs(row, n) = (s.failure_operator * e.state(a)).squaredNorm();
  }
  return probs;
}

struct StrategyValidation {
  bool complete = false;
  bool no_error = false;
  double max_completeness_defect = 0.0;
  double max_cross_class_probability = 0.0;
  std::vector<double> per_state_success;  // P_ik
  std::vector<double> per_state_failure;  // gamma_ik
  double average_success = 0.0;           // P
  double average_failure = 0.0;           // Q

  bool valid() const { return complete && no_error; }
};

inline StrategyValidation validate_strategy(const ClassifiedEnsemble& e, const ClassificationStrategy& s,
                                            const ValidationTolerances& tol = {}) {
  const Eigen::MatrixXd probs = outcome_probabilities(e, s);
  const int n = s.class_count();
  StrategyValidation v;
  v.max_completeness_defect = s.completeness_defect();
  v.complete = v.max_completeness_defect <= tol.completeness;
  for (std::size_t a = 0; a < e.size(); ++a) {
    const auto row = static_cast<Eigen::Index>(a);
    const int own = e.label(a) - 1;
    for (int m = 0; m < n; ++m) {
      if (m != own) v.max_cross_class_probability = std::max(v.max_cross_class_probability, probs(row, m));
    }
    v.per_state_success.push_back(probs(row, own));
    v.per_state_failure.push_back(probs(row, n));
    v.average_success += e.prior(a) * probs(row, own);
    v.average_failure += e.prior(a) * probs(row, n);
  }
  v.no_error = v.max_cross_class_probability <= tol.leakage;
  return v;
}

/// The single-detector strategy built from one classifiable member: project
/// onto the member's orthogonal remainder and report its class, fail
/// otherwise.
inline ClassificationStrategy construct_single_state_strategy(const ClassifiedEnsemble& e, std::size_t idx) {
  const Decomposition dec = decompose(e, idx);
  if (!dec.residual_direction) throw DomainError("state lies in complement span");
  const auto d = e.dim();
  ClassificationStrategy s = ClassificationStrategy::trivial(d, e.class_count());
  const ComplexMatrix a = outer(*dec.residual_direction);
  s.class_operators[static_cast<std::size_t>(e.label(idx) - 1)] = a;
  s.failure_operator = psd_sqrt(ComplexMatrix::Identity(d, d) - a.adjoint() * a);
  return s;
}

/// Orthonormal basis of the part of span(S) orthogonal to every state
/// outside class `label`. Any no-error detector for that class must be
/// supported here (within span(S)). May have zero columns.
inline ComplexMatrix detection_subspace(const ClassifiedEnsemble& e, int label) {
  const auto others = e.states_outside(label);
  const ComplexMatrix q_other = orthonormal_basis(others, e.dim());
  std::vector<ComplexVector> remainders;
  for (const auto& v : e.states_inside(label)) remainders.push_back(remove_span(q_other, v));
  return orthonormal_basis(remainders, e.dim());
}

/// One projective detector per class onto its detection subspace, jointly
/// scaled down until they fit under the identity.
inline ClassificationStrategy construct_projective_strategy(const ClassifiedEnsemble& e) {
  const auto d = e.dim();
  std::vector<ComplexMatrix> projectors;
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  bool any = false;
  for (int m = 1; m <= e.class_count(); ++m) {
    const ComplexMatrix q = detection_subspace(e, m);
    any = any || q.cols() > 0;
    projectors.push_back(q * q.adjoint());
    total += projectors.back();
  }
  if (!any) throw DomainError("infeasible ensemble");
  const double scale = 1.0 / std::max(1.0, max_eigenvalue(total));
  ClassificationStrategy s;
  s.dim = d;
  for (auto& p : projectors) s.class_operators.push_back(std::sqrt(scale) * p);
  s.failure_operator = psd_sqrt(ComplexMatrix::Identity(d, d) - scale * total);
  return s;
}

// ---------------------------------------------------------------------------
// Neumark dilation

/// Unitary realization of a strategy on system (dim d) tensor ancilla (dim
/// n+1). Basis index of |s>|a> is s * (n+1) + a. The ancilla starts in |P>,
/// which is ancilla basis vector `ancilla_ready_index`; ancilla outcome
/// a < n reports class a+1 and a = n is the failure outcome.
struct Dilation {
  Eigen::Index system_dim = 0;
  Eigen::Index ancilla_dim = 0;
  ComplexMatrix unitary;
  Eigen::Index ancilla_ready_index = 0;
  std::vector<Eigen::Index> outcome_basis;

  Eigen::Index index(Eigen::Index system, Eigen::Index ancilla) const { return system * ancilla_dim + ancilla; }

  /// U (|state> |P>).
  ComplexVector evolve(const ComplexVector& state) const {
    if (state.size() != system_dim) throw InputError("dimension mismatch");
    ComplexVector in = ComplexVector::Zero(system_dim * ancilla_dim);
    for (Eigen::Index s = 0; s < system_dim; ++s) in(index(s, ancilla_ready_index)) = state(s);
    return unitary * in;
  }

  /// Unnormalized system state left when the ancilla is found in
  /// outcome_basis[outcome].
  ComplexVector branch(const ComplexVector& state, std::size_t outcome) const {
    const ComplexVector out = evolve(state);
    const auto a = outcome_basis.at(outcome);
    ComplexVector b(system_dim);
    for (Eigen::Index s = 0; s < system_dim; ++s) b(s) = out(index(s, a));
    return b;
  }

  std::vector<double> outcome_probabilities(const ComplexVector& state) const {
    const ComplexVector out = evolve(state);
    std::vector<double> probs(outcome_basis.size(), 0.0);
    for (std::size_t k = 0; k < outcome_basis.size(); ++k) {
      for (Eigen::Index s = 0; s < system_dim; ++s) probs[k] += std::norm(out(index(s, outcome_basis[k])));
    }
    return probs;
  }
};

inline Dilation neumark_dilation(const ClassificationStrategy& s, double completeness_tol = kCompletenessTol) {
  if (s.completeness_defect() > completeness_tol) throw DomainError("not a measurement");
  const auto d = s.dim;
  const auto n = static_cast<Eigen::Index>(s.class_operators.size());
  Dilation dil;
  dil.system_dim = d;
  dil.ancilla_dim = n + 1;
  dil.ancilla_ready_index = 0;
  for (Eigen::Index a = 0; a <= n; ++a) dil.outcome_basis.push_back(a);

  // V|chi> = sum_m (A_m|chi>)|P_m> + (A_I|chi>)|P_{n+1}>, as a D x d matrix.
  const Eigen::Index big = d * (n + 1);
  ComplexMatrix v = ComplexMatrix::Zero(big, d);
  for (Eigen::Index a = 0; a <= n; ++a) {
    const ComplexMatrix& op = a < n ? s.class_operators[static_cast<std::size_t>(a)] : s.failure_operator;
    for (Eigen::Index row = 0; row < d; ++row) v.row(dil.index(row, a)) = op.row(row);
  }
  // V^dagger V = I only up to the accepted defect; symmetric
  // orthonormalization removes it so the completion sees an exact isometry.
  const auto eig = hermitian_eig(v.adjoint() * v);
  v = v * spectral_map(eig, [](double x) { return 1.0 / std::sqrt(x); });

  const ComplexMatrix completed = complete_to_unitary(v);
  // Columns of the completion after the first d fill the slots not of the
  // form |s>|P>, in order.
  dil.unitary.resize(big, big);
  Eigen::Index extra = d;
  for (Eigen::Index col = 0; col < big; ++col) {
    if (col % (n + 1) == dil.ancilla_ready_index) {
      dil.unitary.col(col) = completed.col(col / (n + 1));
    } else {
      dil.unitary.col(col) = completed.col(extra++);
    }
  }
  return dil;
}

// ---------------------------------------------------------------------------
// JSON: {"dim": d, "class_operators": [matrix...], "failure_operator": matrix}
// where a matrix is an array of rows of [re, im] pairs.

inline nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(detail::complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const nlohmann::json& j, Eigen::Index dim, const std::string& where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim) throw InputError("dimension mismatch in " + where);
  ComplexMatrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
      throw InputError("dimension mismatch in " + where);
    }
    for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = detail::parse_complex(row[static_cast<std::size_t>(c)], where);
  }
  return m;
}

inline nlohmann::json strategy_to_json(const ClassificationStrategy& s) {
  nlohmann::json ops = nlohmann::json::array();
  for (const auto& a : s.class_operators) ops.push_back(matrix_to_json(a));
  return {{"dim", s.dim}, {"class_operators", ops}, {"failure_operator", matrix_to_json(s.failure_operator)}};
}

inline ClassificationStrategy parse_strategy(std::string_view text) {
  const auto root = detail::parse_json(text);
  detail::require_only_fields(root, {"dim", "class_operators", "failure_operator"}, "strategy");
  if (!root["dim"].is_number_integer() || root["dim"].get<long long>() < 1) {
    detail::schema_error("'dim' must be a positive integer");
  }
  if (!root["class_operators"].is_array()) detail::schema_error("'class_operators' must be an array");
  ClassificationStrategy s;
  s.dim = static_cast<Eigen::Index>(root["dim"].get<long long>());
  std::size_t k = 0;
  for (const auto& op : root["class_operators"]) {
    s.class_operators.push_back(matrix_from_json(op, s.dim, "class_operators[" + std::to_string(k++) + "]"));
  }
  s.failure_operator = matrix_from_json(root["failure_operator"], s.dim, "failure_operator");
  return s;
}

inline ClassificationStrategy load_strategy(const std::filesystem::path& path) {
  return parse_strategy(detail::read_file(path));
}

}  // namespace conclusive
