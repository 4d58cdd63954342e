// Copyright 2026 The qpctl Authors
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


#include <doctest.h>

#include <cmath>
#include <random>

#include "qpctl/operator_basis.hpp"
#include "test_support.hpp"

using namespace qpctl;

namespace {

// Textbook Gell-Mann matrices lambda_1..lambda_8.
std::vector<CMatrix> textbook_gell_mann() {
  std::vector<CMatrix> l(8, CMatrix::Zero(3, 3));
  l[0](0, 1) = l[0](1, 0) = 1.0;
  l[1](0, 1) = -kI;
  l[1](1, 0) = kI;
  l[2](0, 0) = 1.0;
  l[2](1, 1) = -1.0;
  l[3](0, 2) = l[3](2, 0) = 1.0;
  l[4](0, 2) = -kI;
  l[4](2, 0) = kI;
  l[5](1, 2) = l[5](2, 1) = 1.0;
  l[6](1, 2) = -kI;
  l[6](2, 1) = kI;
  l[7](0, 0) = l[7](1, 1) = 1.0 / std::sqrt(3.0);
  l[7](2, 2) = -2.0 / std::sqrt(3.0);
  return l;
}

}  // namespace

TEST_SUITE("operator_basis") {

TEST_CASE("gell-mann dim 2 is the Pauli basis over sqrt 2") {
  const auto b = gell_mann_basis(2);
  REQUIRE(b->size() == 4);
  CMatrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, -kI, kI, 0;
  sz << 1, 0, 0, -1;
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(max_abs((*b)[0] - s * sx) < 1e-15);
  CHECK(max_abs((*b)[1] - s * sy) < 1e-15);
  CHECK(max_abs((*b)[2] - s * sz) < 1e-15);
  CHECK(max_abs((*b)[3] - s * CMatrix::Identity(2, 2)) < 1e-15);
}

TEST_CASE("gell-mann dim 3 matches the textbook matrices") {
  const auto b = gell_mann_basis(3);
  REQUIRE(b->size() == 9);
  const auto l = textbook_gell_mann();
  // symmetric, antisymmetric, diagonal ordering
  const int order[8] = {0, 3, 5, 1, 4, 6, 2, 7};
  for (int a = 0; a < 8; ++a) {
    CHECK(max_abs((*b)[a] - l[order[a]] / std::sqrt(2.0)) < 1e-15);
  }
  CHECK(max_abs((*b)[8] - CMatrix::Identity(3, 3) / std::sqrt(3.0)) < 1e-15);
}

TEST_CASE("bases are orthonormal for several dimensions") {
  for (int n = 2; n <= 5; ++n) {
    for (auto kind : {BasisKind::GellMann, BasisKind::Logical}) {
      const auto b = make_basis(kind, n);
      CHECK(b->size() == n * n);
      CHECK(b->orthonormality_error() < 1e-12);
      // independent check of the Gram matrix
      for (int l = 0; l < b->size(); ++l) {
        for (int m = 0; m < b->size(); ++m) {
          const Complex g = ((*b)[l].adjoint() * (*b)[m]).trace();
          CHECK(std::abs(g - Complex(l == m ? 1.0 : 0.0)) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("gell-mann elements are Hermitian and traceless except the last") {
  const auto b = gell_mann_basis(4);
  for (int l = 0; l < b->size(); ++l) {
    CHECK(is_hermitian((*b)[l], 1e-15));
    if (l + 1 < b->size()) CHECK(std::abs((*b)[l].trace()) < 1e-14);
  }
}

TEST_CASE("logical basis places |i><j| at i*N+j") {
  const auto b = logical_basis(3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CMatrix e = CMatrix::Zero(3, 3);
      e(i, j) = 1.0;
      CHECK(max_abs((*b)[i * 3 + j] - e) == 0.0);
    }
  }
}

TEST_CASE("dimension below two is rejected") {
  CHECK_THROWS_AS(gell_mann_basis(1), InvalidDimension);
  CHECK_THROWS_AS(logical_basis(0), InvalidDimension);
  CHECK_THROWS_AS(gell_mann_basis(-2), InvalidDimension);
}

TEST_CASE("basis change is unitary, composes and round-trips") {
  std::mt19937 rng(11);
  const auto g = gell_mann_basis(3);
  const auto lg = logical_basis(3);
  const auto u = basis_change(*g, *lg).matrix;
  CHECK(u.rows() == 9);
  CHECK(max_abs(u.adjoint() * u - CMatrix::Identity(9, 9)) < 1e-12);
  CHECK(max_abs(basis_change(*g, *g).matrix - CMatrix::Identity(9, 9)) < 1e-12);

  const auto back = basis_change(*lg, *g).matrix;
  CHECK(max_abs(u * back - CMatrix::Identity(9, 9)) < 1e-12);

  const ProcessMatrix chi = testing::random_process(rng, g);
  const CMatrix there = basis_change(*g, *lg).apply(chi.data());
  CHECK(max_abs(basis_change(*g, *lg).apply_inverse(there) - chi.data()) < 1e-12);
  CHECK(max_abs(basis_change(*lg, *g).apply(there) - chi.data()) < 1e-12);

  // The map represented by chi is the same in both bases.
  const CMatrix rho = testing::random_hermitian(rng, 3);
  auto act = [&](const OperatorBasis& b, const CMatrix& m) {
    CMatrix out = CMatrix::Zero(3, 3);
    for (int l = 0; l < 9; ++l) {
      for (int k = 0; k < 9; ++k) out += m(l, k) * b[l] * rho * b[k].adjoint();
    }
    return out;
  };
  CHECK(max_abs(act(*g, chi.data()) - act(*lg, there)) < 1e-12);
}

TEST_CASE("basis change across dimensions is rejected") {
  CHECK_THROWS_AS(basis_change(*gell_mann_basis(2), *gell_mann_basis(3)), DimensionMismatch);
}

TEST_CASE("embedded operators") {
  std::mt19937 rng(5);
  const auto b = gell_mann_basis(3);
  CHECK(max_abs(embed_operator(CMatrix::Identity(3, 3), *b) - CMatrix::Identity(9, 9)) < 1e-12);
  const CMatrix y = testing::random_hermitian(rng, 3);
  const CMatrix ey = embed_operator(y, *b);
  CHECK(max_abs(ey - ey.adjoint()) < 1e-12);
  const CMatrix z = testing::random_matrix(rng, 3, 3);
  // left multiplication is a representation
  CHECK(max_abs(embed_operator(y * z, *b) - ey * embed_operator(z, *b)) < 1e-12);
  CHECK(max_abs(embed_operator(2.0 * y + z, *b) - (2.0 * ey + embed_operator(z, *b))) < 1e-12);
  CHECK_THROWS_AS(embed_operator(CMatrix::Identity(2, 2), *b), DimensionMismatch);
}

TEST_CASE("row-major vectorization identities") {
  std::mt19937 rng(2026);
  for (int trial = 0; trial < 100; ++trial) {
    const CMatrix x = testing::random_matrix(rng, 9, 9);
    const CMatrix y = testing::random_matrix(rng, 9, 9);
    const CMatrix z = testing::random_matrix(rng, 9, 9);
    const CVector lhs = vectorize(x * y * z);
    const CVector rhs = kron(x, z.transpose()) * vectorize(y);
    CHECK(max_abs(lhs - rhs) < 1e-12 * (1.0 + max_abs(lhs)));
    CHECK(std::abs(vectorize(x).dot(vectorize(y)) - hs_inner(x, y)) < 1e-10);
  }
  const CMatrix m = testing::random_matrix(rng, 4, 4);
  const CVector v = vectorize(m);
  CHECK(v(1) == m(0, 1));
  CHECK(v(4) == m(1, 0));
  CHECK((devectorize(v).array() == m.array()).all());
  CHECK_THROWS_AS(devectorize(CVector::Zero(5)), DimensionMismatch);
}

}  // TEST_SUITE
