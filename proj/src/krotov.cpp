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

#include "qpctl/krotov.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>

#include <fmt/format.h>

namespace qpctl {

std::string_view to_string(Termination t) {
  return t == Termination::Converged ? "converged" : "max-iterations";
}

double update_field_step(const CMatrix& lambda, const CMatrix& chi_new, const CMatrix& delta_chi,
                         double sigma, const Superoperator& dk, double shape, double weight,
                         double eps_ref) {
  const CVector k_chi = dk.matrix * vectorize(chi_new);
  const double first = vectorize(lambda).dot(k_chi).imag();
  const double second = vectorize(delta_chi).dot(k_chi).imag();
  return eps_ref + shape / weight * (first + 0.5 * sigma * second);
}

double j_d(std::span<const ControlField> fields, std::span<const ControlField> reference,
           const TimeGrid& grid) {
  if (fields.size() != reference.size()) throw DimensionMismatch("j_d: field count mismatch");
  double total = 0.0;
  for (std::size_t m = 0; m < fields.size(); ++m) {
    const auto& f = fields[m];
    const auto& r = reference[m];
    if (f.values.size() != r.values.size() || f.shape.size() != f.values.size() ||
        static_cast<int>(f.values.size()) != grid.steps()) {
      throw DimensionMismatch("j_d: field '" + f.label + "' does not match the grid");
    }
    for (std::size_t k = 0; k < f.values.size(); ++k) {
      const double diff = f.values[k] - r.values[k];
      if (diff == 0.0) continue;
      if (f.shape[k] <= 0.0) {
        throw DomainError(fmt::format("j_d: field '{}' changed where its shape vanishes", f.label));
      }
      total += f.weight / f.shape[k] * diff * diff * grid.dt();
    }
  }
  return total;
}

namespace {

void check_update_settings(std::span<const ControlField> fields, const KrotovConfig& config) {
  if (config.max_iterations < 0) throw DomainError("max_iterations must be >= 0");
  if (!(config.delta_j_tol > 0.0)) throw DomainError("delta_j_tol must be > 0");
  if (!(config.zeta_a >= 0.0)) throw DomainError("zeta_a must be >= 0");
  for (const auto& f : fields) {
    if (!(f.weight > 0.0)) throw DomainError("update weight of '" + f.label + "' must be > 0");
    if (f.shape.size() != f.values.size()) {
      throw DimensionMismatch("shape of '" + f.label + "' does not match its samples");
    }
    for (double s : f.shape) {
      if (!(s >= 0.0) || !std::isfinite(s)) {
        throw DomainError("shape of '" + f.label + "' must be finite and nonnegative");
      }
    }
  }
}

struct Endpoint {
  CMatrix chi;     // model basis
  CMatrix lambda;  // gradient at chi
  double j_t = 0.0;
};

}  // namespace

OptimizationResult run(const LindbladModel& model, const TimeGrid& grid,
                       const FunctionalSpec& spec, const std::vector<ControlField>& guess,
                       const KrotovConfig& config) {
  check_fields(model, guess, grid);
  check_spec(spec);
  check_update_settings(guess, config);

  const StepPropagator prop(model);
  const int steps = grid.steps();
  const int controls = model.num_controls();
  const double dt = grid.dt();
  const BasisPtr& basis = model.basis();

  auto describe = [&](const CMatrix& chi_model) {
    const ProcessMatrix chi(basis, chi_model);
    return std::tuple{evaluate(spec, chi), purity(chi), coherence_l1(chi)};
  };

  std::vector<ControlField> fields = guess;
  std::vector<CMatrix> states(steps + 1);
  states[0] = prop.model_to_pair(initial_process(basis).data());
  for (int k = 0; k < steps; ++k) {
    states[k + 1] = prop.step_map(field_values_at(fields, k), dt) * states[k];
  }

  OptimizationResult result;
  Endpoint current;
  current.chi = prop.pair_to_model(states[steps]);
  {
    const auto [f, p, c] = describe(current.chi);
    current.j_t = -f;
    IterationRecord rec{0, f, 0.0, -f, std::vector<double>(controls, 0.0), p, c, 0.0};
    result.records.push_back(rec);
    if (config.observer) config.observer(rec, fields);
  }

  std::vector<CMatrix> costate(steps + 1);
  std::vector<CMatrix> maps(steps);
  std::vector<std::vector<CMatrix>> derivs(steps);
  std::vector<CMatrix> new_states(steps + 1);
  std::optional<Endpoint> previous;
  result.termination = Termination::MaxIterations;

  for (int n = 1; n <= config.max_iterations; ++n) {
    current.lambda = gradient(spec, ProcessMatrix(basis, current.chi));
    costate[steps] = prop.model_to_pair(current.lambda);
    for (int k = steps - 1; k >= 0; --k) {
      auto step = prop.step_with_derivatives(field_values_at(fields, k), dt);
      costate[k] = step.map.adjoint() * costate[k + 1];
      maps[k] = std::move(step.map);
      derivs[k] = std::move(step.derivatives);
    }

    double sigma = 0.0;
    if (previous && !config.force_first_order) {
      sigma = krotov_A(spec, current.chi - previous->chi, previous->lambda,
                       current.j_t - previous->j_t, config.zeta_a)
                  .sigma;
    }

    std::vector<ControlField> updated = fields;
    std::vector<double> max_update(controls, 0.0);
    std::vector<double> eps(controls);
    new_states[0] = states[0];
    for (int k = 0; k < steps; ++k) {
      const CMatrix& x = new_states[k];
      CMatrix pairing = costate[k + 1];
      if (sigma != 0.0) pairing += 0.5 * sigma * (maps[k] * x - states[k + 1]);
      for (int m = 0; m < controls; ++m) {
        const double g = hs_inner(pairing, derivs[k][m] * x).real() / dt;
        const double delta = fields[m].shape[k] / fields[m].weight * g;
        if (!std::isfinite(delta)) {
          throw NumericError(fmt::format(
              "non-finite update of field '{}' at t = {} us in iteration {} (check units and "
              "zeta_a)",
              fields[m].label, grid.midpoint(k), n));
        }
        eps[m] = fields[m].values[k] + delta;
        updated[m].values[k] = eps[m];
        max_update[m] = std::max(max_update[m], std::abs(delta));
      }
      new_states[k + 1] = prop.step_map(eps, dt) * x;
    }

    Endpoint next;
    next.chi = prop.pair_to_model(new_states[steps]);
    const auto [f, p, c] = describe(next.chi);
    next.j_t = -f;
    const double jd = j_d(updated, fields, grid);
    IterationRecord rec{n, f, jd, -f + jd, max_update, p, c, sigma};
    const double delta_j = std::abs(rec.J - result.records.back().J);
    result.records.push_back(rec);

    previous = std::move(current);
    current = std::move(next);
    fields = std::move(updated);
    std::swap(states, new_states);
    if (config.observer) config.observer(rec, fields);
    if (delta_j < config.delta_j_tol) {
      result.termination = Termination::Converged;
      break;
    }
  }

  result.final_fields = fields;
  result.final_trajectory.basis = basis;
  result.final_trajectory.states.reserve(steps + 1);
  for (const auto& x : states) result.final_trajectory.states.push_back(prop.pair_to_model(x));
  return result;
}

}  // namespace qpctl
