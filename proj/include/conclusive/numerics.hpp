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

// Dense complex linear algebra shared by the rest of the library. Matrices
// are small (d up to a few dozen), so everything here favours accuracy and
// determinism over speed.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "conclusive/error.hpp"

namespace conclusive {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// A vector lies inside a span iff its residual norm is at most this.
/// Absolute, since every state in the library is unit norm.
inline constexpr double kRankTol = 1e-9;

/// Tolerance on ||m - m^dagger|| accepted by hermitian_eig.
inline constexpr double kHermitianTol = 1e-10;

/// Negative eigenvalues in [-kPsdClampTol, 0) are rounding noise.
inline constexpr double kPsdClampTol = 1e-10;

/// Column orthonormality accepted by complete_to_unitary.
inline constexpr double kIsometryTol = 1e-9;

/// Completion candidates with a residual norm at or below this are skipped.
inline constexpr double kCompletionSkipTol = 1e-8;

/// Largest entry magnitude.
inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Largest entry magnitude of m^dagger m - I.
inline double isometry_defect(const ComplexMatrix& m) {
  const ComplexMatrix gram = m.adjoint() * m;
  return max_abs(gram - ComplexMatrix::Identity(m.cols(), m.cols()));
}

/// Projector |v><v|.
inline ComplexMatrix outer(const ComplexVector& v) { return v * v.adjoint(); }

/// <a|m|a>, real part. Callers pass Hermitian m.
inline double expectation(const ComplexMatrix& m, const ComplexVector& a) {
  return a.dot(m * a).real();
}

/// Orthonormal basis (as columns) of span(vectors), built by classical
/// Gram-Schmidt with one reorthogonalization pass. A candidate whose
/// residual norm is <= rank_tol is treated as linearly dependent and
/// dropped. The result may have zero columns.
inline ComplexMatrix orthonormal_basis(std::span<const ComplexVector> vectors,
                                       Eigen::Index dim,
                                       double rank_tol = kRankTol) {
  std::vector<ComplexVector> basis;
  basis.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (v.size() != dim) throw InputError("dimension mismatch");
    ComplexVector w = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) w -= q * q.dot(w);
    }
    const double norm = w.norm();
    if (norm > rank_tol) basis.push_back(w / norm);
  }
  ComplexMatrix out(dim, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = basis[k];
  }
  return out;
}

/// Removes from v its component in the column span of an orthonormal q.
/// Two passes keep the result orthogonal to q at machine precision.
inline ComplexVector remove_span(const ComplexMatrix& q, ComplexVector v) {
  if (q.cols() == 0) return v;
  for (int pass = 0; pass < 2; ++pass) v -= q * (q.adjoint() * v);
  return v;
}

/// Split of a target vector relative to a span.
struct SpanSplit {
  ComplexVector projection;  // component inside the span
  ComplexVector residual;    // component orthogonal to the span
};

/// Splits target into its orthogonal projection onto span(basis) and the
/// remainder. projection + residual == target exactly up to rounding.
inline SpanSplit project_onto_span(std::span<const ComplexVector> basis,
                                   const ComplexVector& target,
                                   double rank_tol = kRankTol) {
  const ComplexMatrix q = orthonormal_basis(basis, target.size(), rank_tol);
  SpanSplit split;
  split.residual = remove_span(q, target);
  split.projection = target - split.residual;
  return split;
}

struct HermitianEigenDecomposition {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors; // orthonormal columns, matching eigenvalues
};

inline void require_hermitian(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw InputError("dimension mismatch");
  if (max_abs(m - m.adjoint()) > kHermitianTol) throw Error("not Hermitian");
}

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized
/// before solving, so rounding-level asymmetry does not leak into the
/// eigenvectors.
inline HermitianEigenDecomposition hermitian_eig(const ComplexMatrix& m) {
  require_hermitian(m);
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Largest eigenvalue of a Hermitian matrix.
inline double max_eigenvalue(const ComplexMatrix& m) {
  return hermitian_eig(m).eigenvalues.maxCoeff();
}

/// V f(Lambda) V^dagger for a Hermitian eigendecomposition.
template <typename F>
ComplexMatrix spectral_map(const HermitianEigenDecomposition& eig, F&& f) {
  const RealVector mapped = eig.eigenvalues.unaryExpr(std::forward<F>(f));
  return eig.eigenvectors * mapped.asDiagonal() * eig.eigenvectors.adjoint();
}

/// Principal square root of a positive semidefinite matrix.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const auto eig = hermitian_eig(m);
  if (eig.eigenvalues.minCoeff() < -kPsdClampTol) throw Error("not PSD");
  return spectral_map(eig, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

/// Nearest (Frobenius) positive semidefinite matrix: negative eigenvalues
/// are set to zero.
inline ComplexMatrix psd_part(const ComplexMatrix& m) {
  return spectral_map(hermitian_eig(m), [](double x) { return std::max(x, 0.0); });
}

/// Extends a matrix with orthonormal columns to a square unitary whose
/// leading columns are the input. Missing columns come from Gram-Schmidt
/// over the standard basis; at each step the candidate with the largest
/// residual is taken (lowest index on ties) and candidates with residual
/// <= kCompletionSkipTol are never used.
inline ComplexMatrix complete_to_unitary(const ComplexMatrix& isometry_columns) {
  const Eigen::Index rows = isometry_columns.rows();
  const Eigen::Index cols = isometry_columns.cols();
  if (rows == 0 || cols == 0 || cols > rows) throw Error("not an isometry");
  if (isometry_defect(isometry_columns) > kIsometryTol) throw Error("not an isometry");

  ComplexMatrix u(rows, rows);
  u.leftCols(cols) = isometry_columns;
  std::vector<bool> used(static_cast<std::size_t>(rows), false);
  for (Eigen::Index filled = cols; filled < rows; ++filled) {
    const ComplexMatrix q = u.leftCols(filled);
    Eigen::Index best = -1;
    double best_norm = kCompletionSkipTol;
    ComplexVector best_vec;
    for (Eigen::Index k = 0; k < rows; ++k) {
      if (used[static_cast<std::size_t>(k)]) continue;
      ComplexVector w = remove_span(q, ComplexVector::Unit(rows, k));
      const double norm = w.norm();
      if (norm > best_norm) {
        best = k;
        best_norm = norm;
        best_vec = std::move(w);
      }
    }
    if (best < 0) throw Error("not an isometry");
    used[static_cast<std::size_t>(best)] = true;
    u.col(filled) = remove_span(q, best_vec / best_norm).normalized();
  }
  return u;
}

}  // namespace conclusive
