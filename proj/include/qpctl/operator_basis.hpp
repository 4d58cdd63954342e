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

#include <memory>
#include <string_view>
#include <vector>

#include "qpctl/linalg.hpp"

namespace qpctl {

enum class BasisKind { GellMann, Logical };

std::string_view to_string(BasisKind kind);

/// Ordered orthonormal basis {C_l} of the N^2-dimensional operator space,
/// Tr[C_l^dagger C_m] = delta_lm.
///
/// GellMann ordering: all symmetric pairs (j<k, row-major), then the
/// antisymmetric pairs in the same order, then the N-1 diagonal elements,
/// and the identity I/sqrt(N) last. Every element is the textbook generalized
/// Gell-Mann matrix divided by sqrt(2).
///
/// Logical ordering: |i><j| at index i*N + j.
class OperatorBasis {
 public:
  OperatorBasis(int dim, BasisKind kind, std::vector<CMatrix> elements);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(elements_.size()); }
  BasisKind kind() const { return kind_; }
  const CMatrix& operator[](int index) const { return elements_[index]; }
  const std::vector<CMatrix>& elements() const { return elements_; }

  /// Largest |Tr[C_l^dagger C_m] - delta_lm|.
  double orthonormality_error() const;

  bool same_as(const OperatorBasis& other) const {
    return dim_ == other.dim_ && kind_ == other.kind_;
  }

 private:
  int dim_;
  BasisKind kind_;
  std::vector<CMatrix> elements_;
};

using BasisPtr = std::shared_ptr<const OperatorBasis>;

/// Generalized Gell-Mann basis; throws InvalidDimension for dim < 2.
BasisPtr gell_mann_basis(int dim);

/// Elementary matrices |i><j|; throws InvalidDimension for dim < 2.
BasisPtr logical_basis(int dim);

BasisPtr make_basis(BasisKind kind, int dim);

/// Unitary U with U(a, b) = Tr[from_a^dagger to_b]. A process matrix in
/// `from` converts to `to` as U^dagger chi U.
struct BasisChange {
  CMatrix matrix;

  CMatrix apply(const CMatrix& chi) const { return matrix.adjoint() * chi * matrix; }
  CMatrix apply_inverse(const CMatrix& chi) const { return matrix * chi * matrix.adjoint(); }
};

BasisChange basis_change(const OperatorBasis& from, const OperatorBasis& to);

/// Matrix [Y]_{lm} = Tr[C_l^dagger Y C_m] of left multiplication by Y.
CMatrix embed_operator(const CMatrix& y, const OperatorBasis& basis);

}  // namespace qpctl
