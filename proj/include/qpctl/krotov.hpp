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

#include <functional>
#include <span>
#include <vector>

#include "qpctl/functionals.hpp"
#include "qpctl/lindblad.hpp"

namespace qpctl {

struct IterationRecord {
  int n = 0;
  double F = 0.0;
  double J_d = 0.0;
  double J = 0.0;  // -F + J_d
  std::vector<double> max_update;  // per field, max_k |eps^(n) - eps^(n-1)|
  double purity = 0.0;
  double coherence = 0.0;
  double sigma = 0.0;
};

/// Update weights w_m and shapes f_m are carried by the guess ControlFields.
/// The reference field is always the previous iterate.
struct KrotovConfig {
  int max_iterations = 500;
  double delta_j_tol = 1e-7;
  double zeta_a = 0.01;
  bool force_first_order = false;
  /// Called after every record (including n = 0) with the fields that produced it.
  std::function<void(const IterationRecord&, std::span<const ControlField>)> observer;
};

enum class Termination { Converged, MaxIterations };

std::string_view to_string(Termination t);

struct OptimizationResult {
  std::vector<IterationRecord> records;
  std::vector<ControlField> final_fields;
  Trajectory final_trajectory;
  Termination termination = Termination::MaxIterations;
};

/// Krotov iteration minimizing J = -F + J_d.
///
/// Each iteration propagates the costate backward under the previous fields
/// and then sweeps forward, updating the field on interval k from the costate
/// at t_{k+1}, the new state at t_k and the derivative of the step map.
/// This is the pointwise update rule integrated consistently over one step,
/// so J decreases monotonically up to O(dt^4) terms.
OptimizationResult run(const LindbladModel& model, const TimeGrid& grid,
                       const FunctionalSpec& spec, const std::vector<ControlField>& guess,
                       const KrotovConfig& config = {});

/// Pointwise update rule in the model basis:
/// eps_ref + (f/w) (Im <<L|dK|chi>> + (sigma/2) Im <<dchi|dK|chi>>).
double update_field_step(const CMatrix& lambda, const CMatrix& chi_new, const CMatrix& delta_chi,
                         double sigma, const Superoperator& dk, double shape, double weight,
                         double eps_ref);

/// sum_m integral (w_m / f_m) (eps_m - eps_ref_m)^2 dt, exact for piecewise-constant
/// fields. Throws DomainError where f_m = 0 but the fields differ.
double j_d(std::span<const ControlField> fields, std::span<const ControlField> reference,
           const TimeGrid& grid);

}  // namespace qpctl
