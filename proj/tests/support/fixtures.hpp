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

// Shared test fixtures: named states, random ensembles, and oracles that
// recompute quantities without going through the library code they check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <vector>

#include "conclusive/conclusive.hpp"

namespace conclusive::testing {

inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

inline ComplexVector ket(std::initializer_list<Complex> amps) {
  ComplexVector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index k = 0;
  for (auto a : amps) v(k++) = a;
  return v;
}

inline ComplexVector ket0() { return ket({1.0, 0.0}); }
inline ComplexVector ket1() { return ket({0.0, 1.0}); }
inline ComplexVector ket_plus() { return ket({kInvSqrt2, kInvSqrt2}); }
inline ComplexVector ket_minus() { return ket({kInvSqrt2, -kInvSqrt2}); }

struct Entry {
  ComplexVector state;
  double prior;
  int label;
};

inline ClassifiedEnsemble make_ensemble(int classes, std::vector<Entry> entries) {
  std::vector<Member> members;
  const auto dim = entries.front().state.size();
  for (auto& en : entries) members.push_back({PureState(en.state), en.prior, en.label});
  return ClassifiedEnsemble(dim, classes, std::move(members));
}

/// |0>, cos(t)|0> + sin(t)|1> with overlap s = cos(t), singleton classes.
inline ClassifiedEnsemble two_state(double p, double q, double overlap) {
  return make_ensemble(2, {{ket0(), p, 1}, {ket({overlap, std::sqrt(1.0 - overlap * overlap)}), q, 2}});
}

/// S_1 = {|+>}, S_2 = {|0>}, equal priors.
inline ClassifiedEnsemble plus_zero() { return make_ensemble(2, {{ket_plus(), 0.5, 1}, {ket0(), 0.5, 2}}); }

inline ComplexVector random_state(Rng& rng, Eigen::Index dim) {
  ComplexVector v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) v(k) = Complex(rng.normal(), rng.normal());
  return v.normalized();
}

/// Haar-ish random unitary from the QR factorization of a Gaussian matrix.
inline ComplexMatrix random_unitary(Rng& rng, Eigen::Index dim) {
  ComplexMatrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  return qr.householderQ() * ComplexMatrix::Identity(dim, dim);
}

inline ComplexMatrix random_hermitian(Rng& rng, Eigen::Index dim) {
  ComplexMatrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  return 0.5 * (g + g.adjoint());
}

inline std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi - lo + 1));
}

/// Random ensemble with dim in [2, max_dim] and N in [2, max_members].
/// Roughly a third of the draws confine the states to a lower-dimensional
/// subspace or copy a state across classes, so both feasible and infeasible
/// ensembles show up.
inline ClassifiedEnsemble random_ensemble(Rng& rng, Eigen::Index max_dim = 4, std::size_t max_members = 5,
                                          bool singleton_classes = false) {
  const auto dim = static_cast<Eigen::Index>(uniform_index(rng, 2, static_cast<std::size_t>(max_dim)));
  const std::size_t n_members = uniform_index(rng, 2, max_members);
  const int classes = singleton_classes ? static_cast<int>(n_members)
                                        : static_cast<int>(uniform_index(rng, 2, n_members));
  std::vector<int> labels;
  for (std::size_t a = 0; a < n_members; ++a) {
    labels.push_back(a < static_cast<std::size_t>(classes) ? static_cast<int>(a) + 1
                                                           : static_cast<int>(uniform_index(rng, 1, classes)));
  }
  for (std::size_t a = labels.size(); a > 1; --a) std::swap(labels[a - 1], labels[uniform_index(rng, 0, a - 1)]);

  const double mode = rng.uniform();
  std::vector<ComplexVector> states;
  if (mode < 0.2) {
    const auto sub = static_cast<Eigen::Index>(uniform_index(rng, 1, static_cast<std::size_t>(dim - 1)));
    const ComplexMatrix frame = random_unitary(rng, dim).leftCols(sub);
    for (std::size_t a = 0; a < n_members; ++a) states.push_back((frame * random_state(rng, sub)).normalized());
  } else {
    for (std::size_t a = 0; a < n_members; ++a) states.push_back(random_state(rng, dim));
    if (mode < 0.3) {
      const Complex phase = std::polar(1.0, 2.0 * M_PI * rng.uniform());
      states[1] = phase * states[0];
    }
  }

  std::vector<double> priors;
  for (std::size_t a = 0; a < n_members; ++a) priors.push_back(0.05 + rng.uniform());
  const double total = std::accumulate(priors.begin(), priors.end(), 0.0);
  std::vector<Member> members;
  for (std::size_t a = 0; a < n_members; ++a) members.push_back({PureState(states[a]), priors[a] / total, labels[a]});
  return ClassifiedEnsemble(dim, classes, std::move(members));
}

/// Same ensemble with every state replaced by u|psi> (times an optional
/// per-state phase).
inline ClassifiedEnsemble transform(const ClassifiedEnsemble& e, const ComplexMatrix& u,
                                    const std::vector<double>& phases = {}) {
  std::vector<Member> members;
  for (std::size_t a = 0; a < e.size(); ++a) {
    const Complex ph = phases.empty() ? Complex(1.0) : std::polar(1.0, phases[a]);
    members.push_back({PureState(ph * (u * e.state(a))), e.prior(a), e.label(a)});
  }
  return ClassifiedEnsemble(e.dim(), e.class_count(), std::move(members));
}

/// Random complete measurement with `classes` detection operators. Not
/// error-free in general.
inline ClassificationStrategy random_measurement(Rng& rng, Eigen::Index dim, int classes) {
  std::vector<ComplexMatrix> kraus;
  ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
  for (int m = 0; m <= classes; ++m) {
    ComplexMatrix k(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) k(i, j) = Complex(rng.normal(), rng.normal());
    }
    total += k.adjoint() * k;
    kraus.push_back(std::move(k));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(total);
  const ComplexMatrix inv_sqrt = solver.operatorInverseSqrt();
  ClassificationStrategy s;
  s.dim = dim;
  for (int m = 0; m < classes; ++m) s.class_operators.push_back(kraus[static_cast<std::size_t>(m)] * inv_sqrt);
  s.failure_operator = kraus.back() * inv_sqrt;
  return s;
}

// ---------------------------------------------------------------------------
// Oracles

/// <a|b> by explicit summation.
inline Complex inner_oracle(const ComplexVector& a, const ComplexVector& b) {
  Complex s = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) s += std::conj(a(k)) * b(k);
  return s;
}

/// Failure lower bound by direct enumeration of ordered member pairs.
inline double failure_bound_oracle(const ClassifiedEnsemble& e) {
  const std::size_t total = e.size();
  std::vector<std::size_t> class_size(static_cast<std::size_t>(e.class_count()) + 1, 0);
  for (std::size_t a = 0; a < total; ++a) ++class_size[static_cast<std::size_t>(e.label(a))];
  double q = 0.0;
  for (std::size_t a = 0; a < total; ++a) {
    for (std::size_t b = 0; b < total; ++b) {
      if (e.label(a) == e.label(b)) continue;
      const double na = static_cast<double>(total - class_size[static_cast<std::size_t>(e.label(a))]);
      const double nb = static_cast<double>(total - class_size[static_cast<std::size_t>(e.label(b))]);
      q += std::sqrt(e.prior(a) * e.prior(b) / (na * nb)) * std::abs(inner_oracle(e.state(a), e.state(b)));
    }
  }
  return q;
}

/// Numerical rank of the state set from the singular values of the matrix
/// whose columns are the states.
inline Eigen::Index state_rank_oracle(const std::vector<ComplexVector>& states, Eigen::Index dim,
                                      double tol = 1e-9) {
  if (states.empty()) return 0;
  ComplexMatrix m(dim, static_cast<Eigen::Index>(states.size()));
  for (std::size_t k = 0; k < states.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = states[k];
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return (svd.singularValues().array() > tol).count();
}

/// Rank of the Gram matrix from its eigenvalues.
inline Eigen::Index gram_rank_oracle(const ComplexMatrix& g, double tol = 1e-9) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(g);
  return (solver.eigenvalues().array() > tol).count();
}

/// Classifiability by rank counting: member a is classifiable iff adding it
/// to the other classes' states raises the rank.
inline bool classifiable_oracle(const ClassifiedEnsemble& e, std::size_t a) {
  auto others = e.states_outside(e.label(a));
  const auto base = state_rank_oracle(others, e.dim());
  others.push_back(e.state(a));
  return state_rank_oracle(others, e.dim()) > base;
}

/// Eigenvalues of a 2x2 Hermitian matrix from its characteristic polynomial.
inline std::pair<double, double> eig2_oracle(const ComplexMatrix& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m(0, 1)));
  return {0.5 * (a + d) - half_gap, 0.5 * (a + d) + half_gap};
}

}  // namespace conclusive::testing
