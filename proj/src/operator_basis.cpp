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

#include "qpctl/operator_basis.hpp"

#include <cmath>
#include <string>

namespace qpctl {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector vectorize(const CMatrix& m) {
  CVector v(m.size());
  const Eigen::Index cols = m.cols();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) v(i * cols + j) = m(i, j);
  }
  return v;
}

CMatrix devectorize(const CVector& v) {
  const auto k = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (k * k != v.size()) {
    throw DimensionMismatch("devectorize: length " + std::to_string(v.size()) +
                            " is not a perfect square");
  }
  CMatrix m(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) m(i, j) = v(i * k + j);
  }
  return m;
}

bool is_hermitian(const CMatrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

bool is_unitary(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const CMatrix id = CMatrix::Identity(m.rows(), m.cols());
  return max_abs(m.adjoint() * m - id) <= tol;
}

std::string_view to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::GellMann:
      return "gellmann";
    case BasisKind::Logical:
      return "logical";
  }
  return "unknown";
}

OperatorBasis::OperatorBasis(int dim, BasisKind kind, std::vector<CMatrix> elements)
    : dim_(dim), kind_(kind), elements_(std::move(elements)) {
  if (dim_ < 1) throw InvalidDimension("operator basis: dimension must be positive");
  if (static_cast<int>(elements_.size()) != dim_ * dim_) {
    throw DimensionMismatch("operator basis: expected N^2 elements");
  }
  for (const auto& e : elements_) {
    if (e.rows() != dim_ || e.cols() != dim_) {
      throw DimensionMismatch("operator basis: element is not N x N");
    }
  }
}

double OperatorBasis::orthonormality_error() const {
  double worst = 0.0;
  for (int l = 0; l < size(); ++l) {
    for (int m = 0; m < size(); ++m) {
      const Complex overlap = hs_inner(elements_[l], elements_[m]);
      worst = std::max(worst, std::abs(overlap - Complex(l == m ? 1.0 : 0.0)));
    }
  }
  return worst;
}

namespace {

void require_dim(int dim) {
  if (dim < 2) {
    throw InvalidDimension("basis dimension must be >= 2, got " + std::to_string(dim));
  }
}

}  // namespace

BasisPtr gell_mann_basis(int dim) {
  require_dim(dim);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<CMatrix> elements;
  elements.reserve(dim * dim);

  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      CMatrix s = CMatrix::Zero(dim, dim);
      s(j, k) = inv_sqrt2;
      s(k, j) = inv_sqrt2;
      elements.push_back(std::move(s));
    }
  }
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      CMatrix a = CMatrix::Zero(dim, dim);
      a(j, k) = -kI * inv_sqrt2;
      a(k, j) = kI * inv_sqrt2;
      elements.push_back(std::move(a));
    }
  }
  for (int l = 1; l < dim; ++l) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    CMatrix d = CMatrix::Zero(dim, dim);
    for (int j = 0; j < l; ++j) d(j, j) = scale;
    d(l, l) = -static_cast<double>(l) * scale;
    elements.push_back(std::move(d));
  }
  elements.push_back(CMatrix::Identity(dim, dim) / std::sqrt(static_cast<double>(dim)));
  return std::make_shared<const OperatorBasis>(dim, BasisKind::GellMann, std::move(elements));
}

BasisPtr logical_basis(int dim) {
  require_dim(dim);
  std::vector<CMatrix> elements;
  elements.reserve(dim * dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      CMatrix e = CMatrix::Zero(dim, dim);
      e(i, j) = 1.0;
      elements.push_back(std::move(e));
    }
  }
  return std::make_shared<const OperatorBasis>(dim, BasisKind::Logical, std::move(elements));
}

BasisPtr make_basis(BasisKind kind, int dim) {
  return kind == BasisKind::GellMann ? gell_mann_basis(dim) : logical_basis(dim);
}

BasisChange basis_change(const OperatorBasis& from, const OperatorBasis& to) {
  if (from.dim() != to.dim()) {
    throw DimensionMismatch("basis_change: dimensions " + std::to_string(from.dim()) + " and " +
                            std::to_string(to.dim()) + " differ");
  }
  const int n2 = from.size();
  BasisChange change{CMatrix(n2, n2)};
  for (int a = 0; a < n2; ++a) {
    for (int b = 0; b < n2; ++b) change.matrix(a, b) = hs_inner(from[a], to[b]);
  }
  return change;
}

CMatrix embed_operator(const CMatrix& y, const OperatorBasis& basis) {
  if (y.rows() != basis.dim() || y.cols() != basis.dim()) {
    throw DimensionMismatch("embed_operator: operator is not N x N");
  }
  const int n2 = basis.size();
  CMatrix out(n2, n2);
  for (int m = 0; m < n2; ++m) {
    const CMatrix ycm = y * basis[m];
    for (int l = 0; l < n2; ++l) out(l, m) = hs_inner(basis[l], ycm);
  }
  return out;
}

}  // namespace qpctl
