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

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qpctl {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A quantity left its mathematical domain (zero norm, degenerate Bloch vector, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or a violated numerical invariant during a run.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Hilbert-Schmidt inner product <<X|Y>> = Tr[X^dagger Y].
inline Complex hs_inner(const CMatrix& x, const CMatrix& y) {
  return (x.conjugate().cwiseProduct(y)).sum();
}

inline double hs_norm2(const CMatrix& x) { return x.squaredNorm(); }

inline double max_abs(const CMatrix& x) {
  return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
}

/// Row-major Kronecker product; matches the row-major vectorization below.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Row-major stacking: vec(X)[i*K + j] = X(i, j).
CVector vectorize(const CMatrix& m);

/// Inverse of vectorize; throws DimensionMismatch unless size is a perfect square.
CMatrix devectorize(const CVector& v);

bool is_hermitian(const CMatrix& m, double tol);

bool is_unitary(const CMatrix& m, double tol);

}  // namespace qpctl
