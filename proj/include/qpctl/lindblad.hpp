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

#include <span>
#include <string>
#include <vector>

#include "qpctl/parallel.hpp"
#include "qpctl/process_state.hpp"

namespace qpctl {

/// Uniform grid of `steps` intervals on [t0, tf]; times in microseconds.
class TimeGrid {
 public:
  TimeGrid(double t0, double tf, int steps);
  TimeGrid(double tf, int steps) : TimeGrid(0.0, tf, steps) {}

  double t0() const { return t0_; }
  double tf() const { return tf_; }
  int steps() const { return steps_; }
  double dt() const { return (tf_ - t0_) / steps_; }
  double duration() const { return tf_ - t0_; }
  double time(int k) const { return t0_ + k * dt(); }
  /// Centre of interval k, where piecewise-constant samples live.
  double midpoint(int k) const { return t0_ + (k + 0.5) * dt(); }

 private:
  double t0_;
  double tf_;
  int steps_;
};

/// Piecewise-constant real control: values[k] holds on [t_k, t_{k+1}).
/// `shape` and `weight` are the update shape f_m and weight w_m used by the
/// optimizer; both are sampled at interval midpoints like `values`.
struct ControlField {
  std::string label;
  std::vector<double> values;
  std::vector<double> shape;
  double weight = 1.0;
};

struct Control {
  CMatrix hamiltonian;
  std::string label;
};

struct Jump {
  CMatrix op;
  double rate = 0.0;  // 1/us
};

/// H_S(t) = drift + sum_m eps_m(t) H_m, plus jump operators with rates.
class LindbladModel {
 public:
  LindbladModel(BasisPtr basis, CMatrix drift, std::vector<Control> controls,
                std::vector<Jump> jumps);

  int dim() const { return basis_->dim(); }
  const BasisPtr& basis() const { return basis_; }
  const CMatrix& drift() const { return drift_; }
  const std::vector<Control>& controls() const { return controls_; }
  const std::vector<Jump>& jumps() const { return jumps_; }
  int num_controls() const { return static_cast<int>(controls_.size()); }

  CMatrix hamiltonian(std::span<const double> field_values) const;

 private:
  BasisPtr basis_;
  CMatrix drift_;
  std::vector<Control> controls_;
  std::vector<Jump> jumps_;
};

/// N^4 x N^4 matrix K with d|chi>>/dt = -i K |chi>> (row-major vectorization).
struct Superoperator {
  CMatrix matrix;
};

Superoperator build_generator(const LindbladModel& model, std::span<const double> field_values);

/// dK/d eps_m: the commutator superoperator of the embedded H_m. Field independent.
Superoperator control_generator_derivative(const LindbladModel& model, int m);

/// Field samples of every control on interval k.
std::vector<double> field_values_at(std::span<const ControlField> fields, int k);

/// Throws DimensionMismatch / NumericError if fields do not fit the model and grid.
void check_fields(const LindbladModel& model, std::span<const ControlField> fields,
                  const TimeGrid& grid);

/// Exact per-step propagation of process matrices.
///
/// In the logical operator basis the process generator is the N-level
/// Lindbladian acting on the output index of chi~ with the identity on the
/// input index. exp(-i K dt) therefore factors through an N^2 x N^2 exponential
/// of the density-matrix Lindbladian; all maps here act on logical-basis
/// matrices. The dense N^4 x N^4 route is kept in `propagate_forward_reference`.
class StepPropagator {
 public:
  explicit StepPropagator(const LindbladModel& model);

  int dim() const { return dim_; }
  int num_controls() const { return static_cast<int>(control_liouvillians_.size()); }

  /// Density-matrix Lindbladian L(eps) on row-major vec(rho).
  CMatrix liouvillian(std::span<const double> field_values) const;
  /// dL/d eps_m.
  const CMatrix& control_liouvillian(int m) const { return control_liouvillians_[m]; }

  /// N^2 x N^2 propagator exp(L(eps) dt) on row-major vec(rho).
  CMatrix step_map(std::span<const double> field_values, double dt) const;

  /// The step map together with d exp(L dt)/d eps_m for every control. The
  /// derivative integral is evaluated with Simpson's rule on the half-step
  /// exponential (local error O(dt^5)).
  struct StepWithDerivatives {
    CMatrix map;
    std::vector<CMatrix> derivatives;
  };
  StepWithDerivatives step_with_derivatives(std::span<const double> field_values,
                                            double dt) const;

  /// chi~ -> lifted map applied to chi~ (logical basis).
  CMatrix apply(const CMatrix& map, const CMatrix& chi_logical) const;
  /// Adjoint of `apply`; used for backward costate steps.
  CMatrix apply_adjoint(const CMatrix& map, const CMatrix& costate_logical) const;

  /// H_m (x) I: the embedded control Hamiltonian in the logical basis.
  const CMatrix& control_embedding(int m) const { return control_embeddings_[m]; }

  const BasisChange& to_logical() const { return to_logical_; }
  const BasisPtr& logical() const { return logical_; }

  /// X((a,b),(i,j)) = chi~((a,i),(b,j)): the layout on which maps act by
  /// left multiplication. Both directions are permutations, so inner products
  /// are preserved.
  CMatrix to_pair_layout(const CMatrix& chi_logical) const;
  CMatrix from_pair_layout(const CMatrix& x) const;

  /// Model-basis matrix to pair layout and back.
  CMatrix model_to_pair(const CMatrix& chi) const;
  CMatrix pair_to_model(const CMatrix& x) const;

 private:

  int dim_;
  CMatrix drift_liouvillian_;
  std::vector<CMatrix> control_liouvillians_;
  std::vector<CMatrix> control_embeddings_;
  BasisPtr logical_;
  BasisChange to_logical_;
};

/// States chi(t_k), k = 0..steps, in `basis`.
struct Trajectory {
  BasisPtr basis;
  std::vector<CMatrix> states;

  ProcessMatrix at(std::size_t k) const { return ProcessMatrix(basis, states.at(k)); }
  ProcessMatrix final_state() const { return at(states.size() - 1); }
};

/// Forward propagation from the identity process.
Trajectory propagate_forward(const LindbladModel& model, std::span<const ControlField> fields,
                             const TimeGrid& grid);

/// Same result through the dense N^4 x N^4 matrix exponential of build_generator.
Trajectory propagate_forward_reference(const LindbladModel& model,
                                       std::span<const ControlField> fields,
                                       const TimeGrid& grid);

/// Forward propagation of several field sets.
std::vector<Trajectory> propagate_forward_batch(
    const LindbladModel& model, const std::vector<std::vector<ControlField>>& field_sets,
    const TimeGrid& grid, Execution exec = Execution::Parallel);

/// d|L>>/dt = -i K^dagger |L>>, integrated from tf back to t0. `boundary` is the
/// N^2 x N^2 matrix form of |Lambda(tf)>> in the model basis; entry k of the
/// result is Lambda(t_k) in the same basis.
std::vector<CMatrix> propagate_costate_backward(const LindbladModel& model,
                                                std::span<const ControlField> fields,
                                                const TimeGrid& grid, const CMatrix& boundary);

/// Independent density-matrix propagation (column-stacked vectorization).
/// Requires a unit-trace positive semidefinite rho0.
CMatrix density_oracle(const LindbladModel& model, std::span<const ControlField> fields,
                       const TimeGrid& grid, const CMatrix& rho0);

/// Same propagation without the state checks; linear in `op`.
CMatrix propagate_operator_oracle(const LindbladModel& model, std::span<const ControlField> fields,
                                  const TimeGrid& grid, const CMatrix& op);

/// chi(tf) assembled from the N^2 oracle images of |i><j|.
ProcessMatrix reconstruct_process_from_oracle(const LindbladModel& model,
                                              std::span<const ControlField> fields,
                                              const TimeGrid& grid,
                                              Execution exec = Execution::Parallel);

}  // namespace qpctl
