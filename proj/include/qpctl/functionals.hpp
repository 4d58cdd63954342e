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

#include <optional>
#include <string_view>
#include <vector>

#include "qpctl/process_state.hpp"

namespace qpctl {

enum class FunctionalKind {
  ConvexOverlap,     // "fc"
  NonconvexOverlap,  // "fnc"
  HilbertSchmidt,    // "fhs"
  Geometric,         // "fgeo"
  StateBased,        // "fstate"
  Purity,            // "purity"
  CoherenceL1,       // "coherence"
};

std::string_view functional_name(FunctionalKind kind);

/// Inverse of functional_name; throws Error for unknown names.
FunctionalKind parse_functional_kind(std::string_view name);

/// All kinds in declaration order.
const std::vector<FunctionalKind>& all_functional_kinds();

/// Final-time objective F (maximized; the optimizer minimizes -F).
struct FunctionalSpec {
  FunctionalKind kind = FunctionalKind::ConvexOverlap;
  std::optional<ProcessMatrix> target;  // Xi, for the four process fidelities
  std::optional<CMatrix> target_unitary;  // O, for StateBased
  double w_angle = 0.5;
  double w_length = 0.5;
  std::vector<double> state_weights{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  double coherence_smoothing = 1e-8;
};

/// Spec for `kind` aimed at unitary `gate`; the target process lives in `basis`.
/// Purity and CoherenceL1 ignore the gate.
FunctionalSpec make_spec(FunctionalKind kind, const CMatrix& gate, const BasisPtr& basis);

/// Throws DomainError when weights or targets are inconsistent with the kind.
void check_spec(const FunctionalSpec& spec);

/// True when -F is linear in chi, so the Krotov update needs no sigma term.
bool is_first_order(FunctionalKind kind);

double f_c(const ProcessMatrix& chi1, const ProcessMatrix& chi2);
double f_nc(const ProcessMatrix& chi1, const ProcessMatrix& chi2);
double f_hs(const ProcessMatrix& chi1, const ProcessMatrix& chi2);
/// Throws DomainError if either argument is the maximally mixed process.
double f_geo(const ProcessMatrix& chi1, const ProcessMatrix& chi2, double w_angle,
             double w_length);

/// D_angle and D_length of the geometric functional.
struct GeometricParts {
  double angle = 0.0;
  double length = 0.0;
};
GeometricParts geometric_parts(const ProcessMatrix& chi1, const ProcessMatrix& chi2);

/// The three probe states: diag(2(N-i+1))/(N(N+1)), the all-ones matrix over N, I/N.
std::vector<CMatrix> probe_states(int dim);

/// sum_k (w_k / Tr[rho_k^2]) Tr[O rho_k O^dagger sigma_k] for initial states rho_k
/// and final states sigma_k.
double f_state(const CMatrix& gate, const std::vector<CMatrix>& initial,
               const std::vector<CMatrix>& final_states, const std::vector<double>& weights);

/// Matrix X with f_state = <<X|chi>> for the probe states; Hermitian.
CMatrix state_linear_form(const CMatrix& gate, const BasisPtr& basis,
                          const std::vector<double>& weights);

/// Coherence with |z| replaced by sqrt(|z|^2 + eps^2); the function whose gradient is used.
double coherence_smoothed(const ProcessMatrix& chi, double eps);

/// F(chi). Process fidelities convert chi into the target basis first.
double evaluate(const FunctionalSpec& spec, const ProcessMatrix& chi);

/// Wirtinger derivative dF/d<<chi| in the basis of chi, so that
/// dF = 2 Re <<gradient|d chi>> to first order. This is the costate boundary.
CMatrix gradient(const FunctionalSpec& spec, const ProcessMatrix& chi);

struct KrotovSigma {
  double a = 0.0;
  double sigma = 0.0;
};

/// Curvature estimate from the previous iteration's endpoint data:
/// A = (dJ_T + 2 Re <<dchi|Lambda>>) / <<dchi|dchi>> with J_T = -F and
/// Lambda = dF/d<<chi| at the older endpoint; sigma = -max(zeta, 2A + zeta).
/// First-order kinds and |dchi| < 1e-14 give sigma = 0.
KrotovSigma krotov_A(const FunctionalSpec& spec, const CMatrix& delta_chi, const CMatrix& lambda,
                     double delta_j, double zeta);

}  // namespace qpctl
