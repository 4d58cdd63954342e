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

#include "qpctl/lindblad.hpp"

#include <cmath>

#include <fmt/format.h>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace qpctl {

TimeGrid::TimeGrid(double t0, double tf, int steps) : t0_(t0), tf_(tf), steps_(steps) {
  if (!(tf > t0)) throw DomainError(fmt::format("TimeGrid: tf ({}) must exceed t0 ({})", tf, t0));
  if (steps <= 0) throw DomainError("TimeGrid: steps must be positive");
}

LindbladModel::LindbladModel(BasisPtr basis, CMatrix drift, std::vector<Control> controls,
                             std::vector<Jump> jumps)
    : basis_(std::move(basis)),
      drift_(std::move(drift)),
      controls_(std::move(controls)),
      jumps_(std::move(jumps)) {
  const int n = basis_->dim();
  auto check_square = [n](const CMatrix& m, const std::string& what) {
    if (m.rows() != n || m.cols() != n) throw DimensionMismatch(what + " is not N x N");
  };
  check_square(drift_, "drift Hamiltonian");
  if (!is_hermitian(drift_, 1e-12)) throw DomainError("drift Hamiltonian is not Hermitian");
  for (const auto& c : controls_) {
    check_square(c.hamiltonian, "control Hamiltonian '" + c.label + "'");
    if (!is_hermitian(c.hamiltonian, 1e-12)) {
      throw DomainError("control Hamiltonian '" + c.label + "' is not Hermitian");
    }
  }
  for (const auto& j : jumps_) {
    check_square(j.op, "jump operator");
    if (!(j.rate >= 0.0)) throw DomainError("jump rate must be nonnegative");
  }
}

CMatrix LindbladModel::hamiltonian(std::span<const double> field_values) const {
  if (static_cast<int>(field_values.size()) != num_controls()) {
    throw DimensionMismatch(fmt::format("expected {} field values, got {}", num_controls(),
                                        field_values.size()));
  }
  CMatrix h = drift_;
  for (int m = 0; m < num_controls(); ++m) h += field_values[m] * controls_[m].hamiltonian;
  return h;
}

namespace {

CMatrix commutator_superop(const CMatrix& h) {
  const CMatrix id = CMatrix::Identity(h.rows(), h.cols());
  return kron(h, id) - kron(id, h.transpose());
}

// Row-major superoperator of sum_a g_a (L rho L^dag - 1/2 {L^dag L, rho}).
CMatrix dissipator_superop(const std::vector<CMatrix>& ops, const std::vector<double>& rates) {
  const Eigen::Index n = ops.empty() ? 0 : ops.front().rows();
  CMatrix out = CMatrix::Zero(n * n, n * n);
  const CMatrix id = CMatrix::Identity(n, n);
  for (std::size_t a = 0; a < ops.size(); ++a) {
    const CMatrix& l = ops[a];
    const CMatrix ldl = l.adjoint() * l;
    out += rates[a] * (kron(l, l.conjugate()) - 0.5 * kron(ldl, id) - 0.5 * kron(id, ldl.transpose()));
  }
  return out;
}

}  // namespace

Superoperator build_generator(const LindbladModel& model, std::span<const double> field_values) {
  const OperatorBasis& basis = *model.basis();
  const CMatrix h = embed_operator(model.hamiltonian(field_values), basis);
  std::vector<CMatrix> ops;
  std::vector<double> rates;
  for (const auto& j : model.jumps()) {
    ops.push_back(embed_operator(j.op, basis));
    rates.push_back(j.rate);
  }
  CMatrix k = commutator_superop(h);
  if (!ops.empty()) k += kI * dissipator_superop(ops, rates);
  return Superoperator{std::move(k)};
}

Superoperator control_generator_derivative(const LindbladModel& model, int m) {
  if (m < 0 || m >= model.num_controls()) {
    throw DimensionMismatch(fmt::format("control index {} out of range", m));
  }
  return Superoperator{
      commutator_superop(embed_operator(model.controls()[m].hamiltonian, *model.basis()))};
}

std::vector<double> field_values_at(std::span<const ControlField> fields, int k) {
  std::vector<double> values(fields.size());
  for (std::size_t m = 0; m < fields.size(); ++m) values[m] = fields[m].values[k];
  return values;
}

void check_fields(const LindbladModel& model, std::span<const ControlField> fields,
                  const TimeGrid& grid) {
  if (static_cast<int>(fields.size()) != model.num_controls()) {
    throw DimensionMismatch(fmt::format("model has {} controls but {} fields were given",
                                        model.num_controls(), fields.size()));
  }
  for (const auto& f : fields) {
    if (static_cast<int>(f.values.size()) != grid.steps()) {
      throw DimensionMismatch(fmt::format("field '{}' has {} samples, grid has {} steps", f.label,
                                          f.values.size(), grid.steps()));
    }
    for (double v : f.values) {
      if (!std::isfinite(v)) throw NumericError("field '" + f.label + "' has non-finite values");
    }
  }
}

StepPropagator::StepPropagator(const LindbladModel& model)
    : dim_(model.dim()),
      logical_(logical_basis(model.dim())),
      to_logical_(basis_change(*model.basis(), *logical_basis(model.dim()))) {
  std::vector<CMatrix> ops;
  std::vector<double> rates;
  for (const auto& j : model.jumps()) {
    ops.push_back(j.op);
    rates.push_back(j.rate);
  }
  drift_liouvillian_ = -kI * commutator_superop(model.drift());
  if (!ops.empty()) drift_liouvillian_ += dissipator_superop(ops, rates);
  const CMatrix id = CMatrix::Identity(dim_, dim_);
  for (const auto& c : model.controls()) {
    control_liouvillians_.push_back(-kI * commutator_superop(c.hamiltonian));
    control_embeddings_.push_back(kron(c.hamiltonian, id));
  }
}

CMatrix StepPropagator::liouvillian(std::span<const double> field_values) const {
  if (static_cast<int>(field_values.size()) != num_controls()) {
    throw DimensionMismatch(fmt::format("expected {} field values, got {}", num_controls(),
                                        field_values.size()));
  }
  CMatrix generator = drift_liouvillian_;
  for (std::size_t m = 0; m < control_liouvillians_.size(); ++m) {
    generator += field_values[m] * control_liouvillians_[m];
  }
  return generator;
}

CMatrix StepPropagator::step_map(std::span<const double> field_values, double dt) const {
  return (liouvillian(field_values) * dt).exp();
}

StepPropagator::StepWithDerivatives StepPropagator::step_with_derivatives(
    std::span<const double> field_values, double dt) const {
  const CMatrix half = (liouvillian(field_values) * (0.5 * dt)).exp();
  StepWithDerivatives out{half * half, {}};
  out.derivatives.reserve(control_liouvillians_.size());
  // d/d eps exp(L dt) = int_0^dt exp(L (dt - s)) L_m exp(L s) ds
  for (const auto& lm : control_liouvillians_) {
    const CMatrix mid = half * lm * half;
    out.derivatives.push_back((dt / 6.0) * (out.map * lm + 4.0 * mid + lm * out.map));
  }
  return out;
}

// X((a,b),(i,j)) = chi~((a,i),(b,j)): output indices on rows, input indices on columns.
CMatrix StepPropagator::to_pair_layout(const CMatrix& chi) const {
  if (chi.rows() != dim_ * dim_ || chi.cols() != dim_ * dim_) {
    throw DimensionMismatch("process matrix does not match the model dimension");
  }
  const int n = dim_;
  CMatrix x(n * n, n * n);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < n; ++b)
        for (int j = 0; j < n; ++j) x(a * n + b, i * n + j) = chi(a * n + i, b * n + j);
  return x;
}

CMatrix StepPropagator::from_pair_layout(const CMatrix& x) const {
  const int n = dim_;
  CMatrix chi(n * n, n * n);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < n; ++b)
        for (int j = 0; j < n; ++j) chi(a * n + i, b * n + j) = x(a * n + b, i * n + j);
  return chi;
}

CMatrix StepPropagator::model_to_pair(const CMatrix& chi) const {
  return to_pair_layout(to_logical_.apply(chi));
}

CMatrix StepPropagator::pair_to_model(const CMatrix& x) const {
  return to_logical_.apply_inverse(from_pair_layout(x));
}

CMatrix StepPropagator::apply(const CMatrix& map, const CMatrix& chi_logical) const {
  return from_pair_layout(map * to_pair_layout(chi_logical));
}

CMatrix StepPropagator::apply_adjoint(const CMatrix& map, const CMatrix& costate_logical) const {
  return from_pair_layout(map.adjoint() * to_pair_layout(costate_logical));
}

Trajectory propagate_forward(const LindbladModel& model, std::span<const ControlField> fields,
                             const TimeGrid& grid) {
  check_fields(model, fields, grid);
  const StepPropagator prop(model);
  Trajectory traj{model.basis(), {}};
  traj.states.reserve(grid.steps() + 1);
  CMatrix chi = initial_process(prop.logical()).data();
  traj.states.push_back(prop.to_logical().apply_inverse(chi));
  for (int k = 0; k < grid.steps(); ++k) {
    const auto eps = field_values_at(fields, k);
    chi = prop.apply(prop.step_map(eps, grid.dt()), chi);
    traj.states.push_back(prop.to_logical().apply_inverse(chi));
  }
  return traj;
}

Trajectory propagate_forward_reference(const LindbladModel& model,
                                       std::span<const ControlField> fields,
                                       const TimeGrid& grid) {
  check_fields(model, fields, grid);
  Trajectory traj{model.basis(), {}};
  traj.states.reserve(grid.steps() + 1);
  CVector chi = vectorize(initial_process(model.basis()).data());
  traj.states.push_back(devectorize(chi));
  for (int k = 0; k < grid.steps(); ++k) {
    const auto eps = field_values_at(fields, k);
    const CMatrix step = (-kI * grid.dt() * build_generator(model, eps).matrix).exp();
    chi = step * chi;
    traj.states.push_back(devectorize(chi));
  }
  return traj;
}

std::vector<Trajectory> propagate_forward_batch(
    const LindbladModel& model, const std::vector<std::vector<ControlField>>& field_sets,
    const TimeGrid& grid, Execution exec) {
  std::vector<Trajectory> out(field_sets.size());
  parallel_for(static_cast<int>(field_sets.size()), exec,
               [&](int i) { out[i] = propagate_forward(model, field_sets[i], grid); });
  return out;
}

std::vector<CMatrix> propagate_costate_backward(const LindbladModel& model,
                                                std::span<const ControlField> fields,
                                                const TimeGrid& grid, const CMatrix& boundary) {
  check_fields(model, fields, grid);
  const int n2 = model.basis()->size();
  if (boundary.rows() != n2 || boundary.cols() != n2) {
    throw DimensionMismatch(fmt::format("costate boundary must have N^4 = {} entries, got {}",
                                        n2 * n2, boundary.size()));
  }
  const StepPropagator prop(model);
  std::vector<CMatrix> out(grid.steps() + 1);
  CMatrix lambda = prop.to_logical().apply(boundary);
  out[grid.steps()] = boundary;
  for (int k = grid.steps() - 1; k >= 0; --k) {
    const auto eps = field_values_at(fields, k);
    lambda = prop.apply_adjoint(prop.step_map(eps, grid.dt()), lambda);
    out[k] = prop.to_logical().apply_inverse(lambda);
  }
  return out;
}

namespace {

// Column-stacked Liouvillian: vec(A X B) = (B^T (x) A) vec(X).
CMatrix column_stacked_liouvillian(const CMatrix& h, const std::vector<Jump>& jumps) {
  const Eigen::Index n = h.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix l = -kI * (Eigen::kroneckerProduct(id, h).eval() -
                     Eigen::kroneckerProduct(h.transpose(), id).eval());
  for (const auto& j : jumps) {
    const CMatrix ldl = j.op.adjoint() * j.op;
    l += j.rate * (Eigen::kroneckerProduct(j.op.conjugate(), j.op).eval() -
                   0.5 * Eigen::kroneckerProduct(id, ldl).eval() -
                   0.5 * Eigen::kroneckerProduct(ldl.transpose(), id).eval());
  }
  return l;
}

}  // namespace

CMatrix propagate_operator_oracle(const LindbladModel& model, std::span<const ControlField> fields,
                                  const TimeGrid& grid, const CMatrix& op) {
  check_fields(model, fields, grid);
  const Eigen::Index n = model.dim();
  if (op.rows() != n || op.cols() != n) throw DimensionMismatch("oracle input is not N x N");
  CVector v = Eigen::Map<const CVector>(op.data(), n * n);  // Eigen storage is column-major
  for (int k = 0; k < grid.steps(); ++k) {
    const auto eps = field_values_at(fields, k);
    const CMatrix gen = column_stacked_liouvillian(model.hamiltonian(eps), model.jumps());
    v = (gen * grid.dt()).exp() * v;
  }
  return Eigen::Map<const CMatrix>(v.data(), n, n);
}

CMatrix density_oracle(const LindbladModel& model, std::span<const ControlField> fields,
                       const TimeGrid& grid, const CMatrix& rho0) {
  if (rho0.rows() != model.dim() || rho0.cols() != model.dim()) {
    throw DimensionMismatch("density_oracle: state is not N x N");
  }
  if (!is_hermitian(rho0, 1e-10) || std::abs(rho0.trace() - Complex(1.0)) > 1e-10) {
    throw DomainError("density_oracle: initial state must be Hermitian with unit trace");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho0, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw DomainError("density_oracle: initial state is not positive semidefinite");
  }
  return propagate_operator_oracle(model, fields, grid, rho0);
}

ProcessMatrix reconstruct_process_from_oracle(const LindbladModel& model,
                                              std::span<const ControlField> fields,
                                              const TimeGrid& grid, Execution exec) {
  const int n = model.dim();
  std::vector<CMatrix> images(n * n);
  parallel_for(n * n, exec, [&](int idx) {
    CMatrix unit = CMatrix::Zero(n, n);
    unit(idx / n, idx % n) = 1.0;
    images[idx] = propagate_operator_oracle(model, fields, grid, unit);
  });
  // chi~((a,i),(b,j)) = E(|i><j|)(a, b)
  CMatrix chi(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) chi(a * n + i, b * n + j) = images[i * n + j](a, b);
  return ProcessMatrix(logical_basis(n), std::move(chi)).in_basis(model.basis());
}

}  // namespace qpctl
