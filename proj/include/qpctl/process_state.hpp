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

#include <iosfwd>
#include <string>

#include "qpctl/operator_basis.hpp"

namespace qpctl {

/// Process matrix chi of a CPTP map on an N-level system, expressed in an
/// operator basis: E[rho] = sum_lm chi_lm C_l rho C_m^dagger.
class ProcessMatrix {
 public:
  ProcessMatrix(BasisPtr basis, CMatrix data);

  int dim() const { return basis_->dim(); }
  const OperatorBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const CMatrix& data() const { return data_; }

  /// Same process expressed in `target`.
  ProcessMatrix in_basis(const BasisPtr& target) const;

 private:
  BasisPtr basis_;
  CMatrix data_;
};

struct ValidationTolerances {
  double hermiticity = 1e-9;
  double trace = 1e-9;
  double min_eigenvalue = -1e-8;
  double purity_slack = 1e-8;
};

struct ValidationReport {
  double hermiticity_error = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
  double purity_excess = 0.0;  // Tr[chi^2] - N^2
  bool ok = false;
  std::string failure;  // first violated invariant, empty when ok
};

ValidationReport validate(const ProcessMatrix& chi, const ValidationTolerances& tol = {});

/// [chi_U]_lm = Tr[U C_l^dagger] Tr[U C_m^dagger]^*; throws DomainError if U is not unitary.
ProcessMatrix chi_from_unitary(const CMatrix& u, const BasisPtr& basis);

/// Identity map, chi_lm = N delta_{l,N^2} delta_{m,N^2} in the Gell-Mann basis.
ProcessMatrix initial_process(const BasisPtr& basis);

/// Choi-Jamiolkowski state chi~/N in the logical basis, indexed (out*N + in).
CMatrix choi_state(const ProcessMatrix& chi);

/// Inverse of choi_state.
ProcessMatrix from_choi_state(const CMatrix& rho, const BasisPtr& basis);

/// <<chi|chi>>/N^2.
double purity(const ProcessMatrix& chi);

/// Normalized l1 norm of the off-diagonal Choi-state entries (logical basis).
double coherence_l1(const ProcessMatrix& chi);

/// Generalized Bloch vector chi = I/N + sum_a r_a M_a, with {M_a} the
/// Gell-Mann basis of the N^2-dimensional space (identity element excluded).
struct BlochVector {
  RVector r;
  int dim = 0;  // N of the underlying process
};

BlochVector bloch_decompose(const ProcessMatrix& chi);
ProcessMatrix bloch_reconstruct(const BlochVector& bloch, const BasisPtr& basis);

/// Plain-text dump: a header line "# qpctl-process dim=<N> basis=<kind>",
/// then N^2 rows of N^2 space-separated "re,im" pairs with 17 significant digits.
void write_process(std::ostream& out, const ProcessMatrix& chi);
ProcessMatrix read_process(std::istream& in);

}  // namespace qpctl
