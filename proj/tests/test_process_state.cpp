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
#include <numbers>
#include <random>
#include <sstream>

#include "qpctl/lambda_system.hpp"
#include "qpctl/process_state.hpp"
#include "test_support.hpp"

using namespace qpctl;

namespace {

CMatrix qft3() {
  const Complex q = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  CMatrix u(3, 3);
  u << 1, 1, 1, 1, q, q * q, 1, q * q, q;
  return u / std::sqrt(3.0);
}

// |U>> indexed (out*N + in) over N.
CMatrix choi_of_unitary(const CMatrix& u) {
  const int n = static_cast<int>(u.rows());
  CVector v(n * n);
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < n; ++i) v(a * n + i) = u(a, i);
  }
  return v * v.adjoint() / static_cast<double>(n);
}

double offdiag_l1(const CMatrix& rho) {
  double s = 0.0;
  for (int p = 0; p < rho.rows(); ++p) {
    for (int q = 0; q < rho.cols(); ++q) {
      if (p != q) s += std::abs(rho(p, q));
    }
  }
  return s;
}

}  // namespace

TEST_SUITE("process_state") {

TEST_CASE("identity process has a single entry N at the identity element") {
  const auto b = gell_mann_basis(3);
  const ProcessMatrix chi = initial_process(b);
  CMatrix expected = CMatrix::Zero(9, 9);
  expected(8, 8) = 3.0;
  CHECK(max_abs(chi.data() - expected) < 1e-14);
  CHECK(purity(chi) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(validate(chi).ok);
}

TEST_CASE("unitary processes satisfy the overlap identity") {
  std::mt19937 rng(7);
  for (auto kind : {BasisKind::GellMann, BasisKind::Logical}) {
    const auto b = make_basis(kind, 3);
    for (int trial = 0; trial < 20; ++trial) {
      const CMatrix u = testing::random_unitary(rng, 3);
      const CMatrix v = testing::random_unitary(rng, 3);
      const ProcessMatrix cu = chi_from_unitary(u, b);
      const ProcessMatrix cv = chi_from_unitary(v, b);
      const double expected = std::norm((u.adjoint() * v).trace());
      CHECK(std::abs(hs_inner(cu.data(), cv.data()) - Complex(expected)) < 1e-10);
      CHECK(std::abs(cu.data().trace() - Complex(3.0)) < 1e-12);
      CHECK(purity(cu) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(validate(cu).ok);
    }
  }
}

TEST_CASE("chi_from_unitary rejects bad input") {
  const auto b = gell_mann_basis(3);
  CHECK_THROWS_AS(chi_from_unitary(2.0 * CMatrix::Identity(3, 3), b), DomainError);
  CHECK_THROWS_AS(chi_from_unitary(CMatrix::Identity(2, 2), b), DimensionMismatch);
}

TEST_CASE("processes act as Kraus maps") {
  std::mt19937 rng(8);
  const auto b = gell_mann_basis(3);
  const auto kraus = testing::random_kraus(rng, 3, 3);
  const ProcessMatrix chi = testing::process_from_kraus(kraus, b);
  const CMatrix rho = testing::random_hermitian(rng, 3);
  CMatrix direct = CMatrix::Zero(3, 3);
  for (const auto& a : kraus) direct += a * rho * a.adjoint();
  CMatrix via_chi = CMatrix::Zero(3, 3);
  for (int l = 0; l < 9; ++l) {
    for (int m = 0; m < 9; ++m) via_chi += chi.data()(l, m) * (*b)[l] * rho * (*b)[m].adjoint();
  }
  CHECK(max_abs(direct - via_chi) < 1e-12);
  CHECK(validate(chi).ok);
}

TEST_CASE("choi state of the identity is the maximally entangled projector") {
  const ProcessMatrix chi = initial_process(gell_mann_basis(3));
  const CMatrix rho = choi_state(chi);
  CHECK(max_abs(rho - choi_of_unitary(CMatrix::Identity(3, 3))) < 1e-14);
  CHECK(std::abs(rho.trace() - Complex(1.0)) < 1e-14);
}

TEST_CASE("choi state of a random process is a density matrix and inverts") {
  std::mt19937 rng(9);
  const auto b = gell_mann_basis(3);
  for (int trial = 0; trial < 10; ++trial) {
    const ProcessMatrix chi = testing::random_process(rng, b);
    const CMatrix rho = choi_state(chi);
    CHECK(std::abs(rho.trace() - Complex(1.0)) < 1e-12);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho);
    CHECK(eig.eigenvalues().minCoeff() > -1e-12);
    CHECK(max_abs(from_choi_state(rho, b).data() - chi.data()) < 1e-12);
  }
}

TEST_CASE("completely depolarizing map has purity 1/N^2") {
  const auto b = gell_mann_basis(3);
  const CMatrix rho = CMatrix::Identity(9, 9) / 9.0;
  const ProcessMatrix chi = from_choi_state(rho, b);
  const double oracle = (rho * rho).trace().real();  // Tr[(I/9)^2]
  CHECK(oracle == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(purity(chi) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(coherence_l1(chi) < 1e-14);
  CHECK(validate(chi).ok);
}

TEST_CASE("closed-form coherence values") {
  const auto b = gell_mann_basis(3);
  const ProcessMatrix qft = chi_from_unitary(qft3(), b);
  CHECK(offdiag_l1(choi_of_unitary(qft3())) / 8.0 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(coherence_l1(qft) - 1.0) < 1e-10);
  const ProcessMatrix phase = chi_from_unitary(phase_gate(std::numbers::pi).matrix, b);
  CHECK(std::abs(coherence_l1(phase) - 0.25) < 1e-10);
  CHECK(std::abs(coherence_l1(initial_process(b)) - 0.25) < 1e-10);
  // coherence is defined on the logical basis whatever basis chi is stored in
  CHECK(std::abs(coherence_l1(qft.in_basis(logical_basis(3))) - 1.0) < 1e-10);
}

TEST_CASE("purity and fidelity are basis independent") {
  std::mt19937 rng(10);
  const ProcessMatrix chi = testing::random_process(rng, gell_mann_basis(3));
  const ProcessMatrix lg = chi.in_basis(logical_basis(3));
  CHECK(purity(chi) == doctest::Approx(purity(lg)).epsilon(1e-12));
  CHECK(coherence_l1(chi) == doctest::Approx(coherence_l1(lg)).epsilon(1e-12));
}

TEST_CASE("generalized Bloch vectors") {
  std::mt19937 rng(12);
  const auto b = gell_mann_basis(3);
  const BlochVector id = bloch_decompose(initial_process(b));
  CHECK(id.r.size() == 80);
  CHECK(id.r.squaredNorm() == doctest::Approx(8.0).epsilon(1e-12));

  const BlochVector dep = bloch_decompose(from_choi_state(CMatrix::Identity(9, 9) / 9.0, b));
  CHECK(dep.r.norm() < 1e-12);

  for (int trial = 0; trial < 20; ++trial) {
    const ProcessMatrix chi = testing::random_process(rng, trial % 2 ? b : logical_basis(3));
    const BlochVector r = bloch_decompose(chi);
    CHECK(max_abs(bloch_reconstruct(r, chi.basis_ptr()).data() - chi.data()) < 1e-10);
    const double tr2 = hs_norm2(chi.data());
    CHECK(r.r.squaredNorm() == doctest::Approx(tr2 - 1.0).epsilon(1e-10));
    CHECK(purity(chi) == doctest::Approx((1.0 + r.r.squaredNorm()) / 9.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(bloch_reconstruct(BlochVector{RVector::Zero(3), 3}, b), DimensionMismatch);
}

TEST_CASE("validation flags each invariant") {
  const auto b = gell_mann_basis(3);
  CMatrix m = initial_process(b).data();

  CMatrix skew = m;
  skew(0, 1) = 1e-3;
  CHECK(validate(ProcessMatrix(b, skew)).failure.find("hermiticity") != std::string::npos);

  CHECK(validate(ProcessMatrix(b, 1.1 * m)).failure.find("trace") != std::string::npos);

  CMatrix neg = m;
  neg(8, 8) = 3.1;
  neg(0, 0) = -0.1;
  CHECK(validate(ProcessMatrix(b, neg)).failure.find("eigenvalue") != std::string::npos);

  CMatrix nan = m;
  nan(4, 4) = std::nan("");
  CHECK_FALSE(validate(ProcessMatrix(b, nan)).ok);

  CHECK_THROWS_AS(ProcessMatrix(b, CMatrix::Zero(4, 4)), DimensionMismatch);
}

TEST_CASE("text serialization round-trips bit-exactly") {
  std::mt19937 rng(13);
  for (auto kind : {BasisKind::GellMann, BasisKind::Logical}) {
    const ProcessMatrix chi = testing::random_process(rng, make_basis(kind, 3));
    std::stringstream ss;
    write_process(ss, chi);
    const ProcessMatrix back = read_process(ss);
    CHECK(back.basis().same_as(chi.basis()));
    CHECK((back.data().array() == chi.data().array()).all());
  }
  std::stringstream bad("# something else\n");
  CHECK_THROWS_AS(read_process(bad), Error);
  std::stringstream short_rows("# qpctl-process dim=2 basis=logical\n1,0 0,0\n");
  CHECK_THROWS_AS(read_process(short_rows), Error);
}

}  // TEST_SUITE
