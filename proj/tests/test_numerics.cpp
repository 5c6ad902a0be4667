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

#include <catch_amalgamated.hpp>

#include <vector>

#include "conclusive/numerics.hpp"
#include "support/fixtures.hpp"

namespace conclusive {
namespace {

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using namespace testing;

TEST_CASE("project_onto_span splits by inspection", "[numerics]") {
  SECTION("empty span") {
    const auto split = project_onto_span({}, ket0());
    CHECK(max_abs(split.projection) == 0.0);
    CHECK(max_abs(split.residual - ket0()) == 0.0);
  }
  SECTION("target inside span") {
    const std::vector<ComplexVector> basis{ket0()};
    const auto split = project_onto_span(basis, ket0());
    CHECK(max_abs(split.projection - ket0()) < 1e-15);
    CHECK(max_abs(split.residual) < 1e-15);
  }
  SECTION("|+> against |0>") {
    const std::vector<ComplexVector> basis{ket0()};
    const auto split = project_onto_span(basis, ket_plus());
    CHECK(max_abs(split.projection - kInvSqrt2 * ket0()) < 1e-15);
    CHECK(max_abs(split.residual - kInvSqrt2 * ket1()) < 1e-15);
  }
  SECTION("dimension mismatch") {
    const std::vector<ComplexVector> basis{ket({1.0, 0.0, 0.0})};
    CHECK_THROWS_WITH(project_onto_span(basis, ket0()), ContainsSubstring("dimension mismatch"));
  }
}

TEST_CASE("project_onto_span residual is orthogonal and norms add up", "[numerics][property]") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto dim = static_cast<Eigen::Index>(uniform_index(rng, 1, 6));
    const std::size_t count = uniform_index(rng, 0, static_cast<std::size_t>(dim) + 2);
    std::vector<ComplexVector> basis;
    for (std::size_t k = 0; k < count; ++k) basis.push_back(random_state(rng, dim));
    if (count >= 2 && rng.uniform() < 0.5) basis.back() = 0.3 * basis[0] - 1.7 * basis[1];
    const ComplexVector target = random_state(rng, dim);
    const auto split = project_onto_span(basis, target);
    for (const auto& b : basis) CHECK(std::abs(b.dot(split.residual)) <= 1e-10);
    CHECK_THAT(split.projection.squaredNorm() + split.residual.squaredNorm(),
               WithinAbs(target.squaredNorm(), 1e-10));
    CHECK(max_abs(split.projection + split.residual - target) <= 1e-14);
  }
}

TEST_CASE("hermitian_eig examples", "[numerics]") {
  SECTION("identity") {
    const auto eig = hermitian_eig(ComplexMatrix::Identity(2, 2));
    CHECK_THAT(eig.eigenvalues(0), WithinAbs(1.0, 1e-15));
    CHECK_THAT(eig.eigenvalues(1), WithinAbs(1.0, 1e-15));
  }
  SECTION("diag(0, 1)") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(1, 1) = 1.0;
    const auto eig = hermitian_eig(m);
    CHECK_THAT(eig.eigenvalues(0), WithinAbs(0.0, 1e-15));
    CHECK_THAT(eig.eigenvalues(1), WithinAbs(1.0, 1e-15));
    CHECK_THAT(std::abs(eig.eigenvectors(0, 0)), WithinAbs(1.0, 1e-15));
    CHECK_THAT(std::abs(eig.eigenvectors(1, 1)), WithinAbs(1.0, 1e-15));
  }
  SECTION("|+><+| has spectrum {0, 1}") {
    const auto eig = hermitian_eig(outer(ket_plus()));
    CHECK_THAT(eig.eigenvalues(0), WithinAbs(0.0, 1e-15));
    CHECK_THAT(eig.eigenvalues(1), WithinAbs(1.0, 1e-15));
  }
  SECTION("non-Hermitian input") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_WITH(hermitian_eig(m), ContainsSubstring("not Hermitian"));
  }
}

TEST_CASE("hermitian_eig agrees with the 2x2 characteristic polynomial", "[numerics][oracle]") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix m = random_hermitian(rng, 2);
    const auto [lo, hi] = eig2_oracle(m);
    const auto eig = hermitian_eig(m);
    CHECK_THAT(eig.eigenvalues(0), WithinAbs(lo, 1e-12));
    CHECK_THAT(eig.eigenvalues(1), WithinAbs(hi, 1e-12));
  }
}

TEST_CASE("hermitian_eig reconstructs random Hermitian matrices", "[numerics][property]") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto dim = static_cast<Eigen::Index>(uniform_index(rng, 1, 8));
    const ComplexMatrix m = random_hermitian(rng, dim);
    const auto eig = hermitian_eig(m);
    const ComplexMatrix& v = eig.eigenvectors;
    CHECK(max_abs(v * eig.eigenvalues.asDiagonal() * v.adjoint() - m) <= 1e-8);
    CHECK(max_abs(m * v - v * eig.eigenvalues.asDiagonal()) <= 1e-9);
    CHECK(isometry_defect(v) <= 1e-10);
    for (Eigen::Index k = 1; k < dim; ++k) CHECK(eig.eigenvalues(k - 1) <= eig.eigenvalues(k));
  }
}

TEST_CASE("psd_sqrt examples", "[numerics]") {
  CHECK(max_abs(psd_sqrt(ComplexMatrix::Identity(3, 3)) - ComplexMatrix::Identity(3, 3)) < 1e-14);

  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 4.0;
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = 2.0;
  CHECK(max_abs(psd_sqrt(m) - expected) < 1e-14);

  const ComplexMatrix p = outer(ket_plus());
  CHECK(max_abs(psd_sqrt(p) - p) < 1e-14);
}

TEST_CASE("psd_sqrt clamps rounding noise but rejects real negatives", "[numerics]") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -5e-11;
  const ComplexMatrix r = psd_sqrt(m);
  CHECK(std::abs(r(1, 1)) == 0.0);

  m(1, 1) = -1e-9;
  CHECK_THROWS_WITH(psd_sqrt(m), ContainsSubstring("not PSD"));
}

TEST_CASE("psd_sqrt squares back to random PSD matrices", "[numerics][property]") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto dim = static_cast<Eigen::Index>(uniform_index(rng, 1, 8));
    const ComplexMatrix g = random_hermitian(rng, dim);
    const ComplexMatrix m = g * g.adjoint();
    const ComplexMatrix r = psd_sqrt(m);
    CHECK(max_abs(r * r - m) <= 1e-8);
    CHECK(max_abs(r - r.adjoint()) <= 1e-12);
    CHECK(hermitian_eig(r).eigenvalues.minCoeff() >= -1e-10);
  }
}

TEST_CASE("complete_to_unitary examples", "[numerics]") {
  Rng rng(17);
  SECTION("a full unitary is returned unchanged") {
    const ComplexMatrix u = random_unitary(rng, 3);
    CHECK(max_abs(complete_to_unitary(u) - u) == 0.0);
  }
  SECTION("single column |0>") {
    const ComplexMatrix u = complete_to_unitary(ComplexMatrix(ket0()));
    CHECK(max_abs(u.col(0) - ket0()) == 0.0);
    CHECK(isometry_defect(u) <= 1e-12);
  }
  SECTION("single column |+>") {
    const ComplexMatrix u = complete_to_unitary(ComplexMatrix(ket_plus()));
    CHECK(max_abs(u.col(0) - ket_plus()) == 0.0);
    CHECK(isometry_defect(u) <= 1e-9);
    CHECK_THAT(std::abs(u.determinant()), WithinAbs(1.0, 1e-9));
  }
  SECTION("non-orthonormal columns are rejected") {
    ComplexMatrix m(2, 2);
    m.col(0) = ket0();
    m.col(1) = ket_plus();
    CHECK_THROWS_WITH(complete_to_unitary(m), ContainsSubstring("not an isometry"));
    CHECK_THROWS_WITH(complete_to_unitary(ComplexMatrix::Identity(2, 3)), ContainsSubstring("not an isometry"));
  }
}

TEST_CASE("complete_to_unitary on random isometries", "[numerics][property]") {
  Rng rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rows = static_cast<Eigen::Index>(uniform_index(rng, 1, 12));
    const auto cols = static_cast<Eigen::Index>(uniform_index(rng, 1, static_cast<std::size_t>(rows)));
    const ComplexMatrix v = random_unitary(rng, rows).leftCols(cols);
    const ComplexMatrix u = complete_to_unitary(v);
    CHECK(isometry_defect(u) <= 1e-9);
    CHECK(max_abs(u.leftCols(cols) - v) == 0.0);
  }
}

}  // namespace
}  // namespace conclusive
