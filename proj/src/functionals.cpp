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

#include "qpctl/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <fmt/format.h>

namespace qpctl {

namespace {

constexpr double kPi = std::numbers::pi;

struct NamedKind {
  FunctionalKind kind;
  std::string_view name;
};

constexpr NamedKind kNames[] = {
    {FunctionalKind::ConvexOverlap, "fc"},    {FunctionalKind::NonconvexOverlap, "fnc"},
    {FunctionalKind::HilbertSchmidt, "fhs"},  {FunctionalKind::Geometric, "fgeo"},
    {FunctionalKind::StateBased, "fstate"},   {FunctionalKind::Purity, "purity"},
    {FunctionalKind::CoherenceL1, "coherence"},
};

void require_same_basis(const ProcessMatrix& a, const ProcessMatrix& b) {
  if (!a.basis().same_as(b.basis())) {
    throw DimensionMismatch("functional arguments are expressed in different bases");
  }
}

double real_overlap(const ProcessMatrix& a, const ProcessMatrix& b) {
  return hs_inner(a.data(), b.data()).real();
}

struct GeoTerms {
  double d11, d22, d12, c, theta;
};

GeoTerms geo_terms(const ProcessMatrix& chi1, const ProcessMatrix& chi2) {
  require_same_basis(chi1, chi2);
  GeoTerms g{};
  g.d11 = hs_norm2(chi1.data()) - 1.0;
  g.d22 = hs_norm2(chi2.data()) - 1.0;
  if (g.d11 <= 1e-12 || g.d22 <= 1e-12) {
    throw DomainError("f_geo: argument has a vanishing Bloch vector");
  }
  g.d12 = real_overlap(chi1, chi2) - 1.0;
  g.c = g.d12 / std::sqrt(g.d11 * g.d22);
  g.theta = std::acos(std::clamp(g.c, -1.0, 1.0));
  return g;
}

double smoothed_abs(Complex z, double eps) { return std::sqrt(std::norm(z) + eps * eps); }

}  // namespace

std::string_view functional_name(FunctionalKind kind) {
  for (const auto& entry : kNames) {
    if (entry.kind == kind) return entry.name;
  }
  return "unknown";
}

FunctionalKind parse_functional_kind(std::string_view name) {
  for (const auto& entry : kNames) {
    if (entry.name == name) return entry.kind;
  }
  throw Error(fmt::format("unknown functional '{}'", name));
}

const std::vector<FunctionalKind>& all_functional_kinds() {
  static const std::vector<FunctionalKind> kinds = [] {
    std::vector<FunctionalKind> out;
    for (const auto& entry : kNames) out.push_back(entry.kind);
    return out;
  }();
  return kinds;
}

FunctionalSpec make_spec(FunctionalKind kind, const CMatrix& gate, const BasisPtr& basis) {
  FunctionalSpec spec;
  spec.kind = kind;
  if (kind != FunctionalKind::Purity && kind != FunctionalKind::CoherenceL1) {
    spec.target = chi_from_unitary(gate, basis);
    spec.target_unitary = gate;
  }
  return spec;
}

void check_spec(const FunctionalSpec& spec) {
  switch (spec.kind) {
    case FunctionalKind::Geometric:
      if (spec.w_angle < 0.0 || spec.w_angle > 1.0 || spec.w_length < 0.0 ||
          spec.w_length > 1.0 || std::abs(spec.w_angle + spec.w_length - 1.0) > 1e-12) {
        throw DomainError("geometric weights must lie in [0, 1] and sum to 1");
      }
      [[fallthrough]];
    case FunctionalKind::ConvexOverlap:
    case FunctionalKind::NonconvexOverlap:
    case FunctionalKind::HilbertSchmidt:
      if (!spec.target) throw DomainError("process fidelity needs a target process");
      break;
    case FunctionalKind::StateBased: {
      if (!spec.target_unitary) throw DomainError("state-based fidelity needs a target gate");
      if (!is_unitary(*spec.target_unitary, 1e-10)) {
        throw DomainError("state-based fidelity target is not unitary");
      }
      if (spec.state_weights.size() != 3) throw DomainError("state-based fidelity needs 3 weights");
      const double sum = std::accumulate(spec.state_weights.begin(), spec.state_weights.end(), 0.0);
      if (std::abs(sum - 1.0) > 1e-12) throw DomainError("state weights must sum to 1");
      break;
    }
    case FunctionalKind::Purity:
      break;
    case FunctionalKind::CoherenceL1:
      if (!(spec.coherence_smoothing > 0.0)) throw DomainError("coherence smoothing must be > 0");
      break;
  }
}

bool is_first_order(FunctionalKind kind) {
  return kind == FunctionalKind::ConvexOverlap || kind == FunctionalKind::StateBased;
}

double f_c(const ProcessMatrix& chi1, const ProcessMatrix& chi2) {
  require_same_basis(chi1, chi2);
  const double n = chi1.dim();
  return real_overlap(chi1, chi2) / (n * n);
}

double f_nc(const ProcessMatrix& chi1, const ProcessMatrix& chi2) {
  require_same_basis(chi1, chi2);
  const double n1 = hs_norm2(chi1.data());
  const double n2 = hs_norm2(chi2.data());
  if (n1 <= 0.0 || n2 <= 0.0) throw DomainError("f_nc: zero-norm argument");
  return real_overlap(chi1, chi2) / std::sqrt(n1 * n2);
}

double f_hs(const ProcessMatrix& chi1, const ProcessMatrix& chi2) {
  require_same_basis(chi1, chi2);
  const double n = chi1.dim();
  return 1.0 - hs_norm2(chi1.data() - chi2.data()) / (2.0 * n * n);
}

GeometricParts geometric_parts(const ProcessMatrix& chi1, const ProcessMatrix& chi2) {
  const GeoTerms g = geo_terms(chi1, chi2);
  const double n = chi1.dim();
  const double root_gap = std::sqrt(g.d11) - std::sqrt(g.d22);
  return {g.theta * g.theta / (kPi * kPi), root_gap * root_gap / (n * n - 1.0)};
}

double f_geo(const ProcessMatrix& chi1, const ProcessMatrix& chi2, double w_angle,
             double w_length) {
  const GeometricParts parts = geometric_parts(chi1, chi2);
  return 1.0 - w_angle * parts.angle - w_length * parts.length;
}

std::vector<CMatrix> probe_states(int dim) {
  if (dim < 2) throw InvalidDimension("probe_states: dim must be >= 2");
  const double n = dim;
  CMatrix rho1 = CMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) rho1(i, i) = 2.0 * (n - i) / (n * (n + 1.0));
  return {rho1, CMatrix::Constant(dim, dim, 1.0 / n), CMatrix::Identity(dim, dim) / n};
}

double f_state(const CMatrix& gate, const std::vector<CMatrix>& initial,
               const std::vector<CMatrix>& final_states, const std::vector<double>& weights) {
  if (!is_unitary(gate, 1e-10)) throw DomainError("f_state: target gate is not unitary");
  if (initial.size() != final_states.size() || initial.size() != weights.size()) {
    throw DimensionMismatch("f_state: states and weights differ in count");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < initial.size(); ++k) {
    const CMatrix ideal = gate * initial[k] * gate.adjoint();
    const double norm = hs_norm2(initial[k]);
    total += weights[k] / norm * (ideal * final_states[k]).trace().real();
  }
  return total;
}

CMatrix state_linear_form(const CMatrix& gate, const BasisPtr& basis,
                          const std::vector<double>& weights) {
  if (!is_unitary(gate, 1e-10)) throw DomainError("f_state: target gate is not unitary");
  const auto probes = probe_states(basis->dim());
  if (weights.size() != probes.size()) throw DimensionMismatch("f_state: expected 3 weights");
  const int n2 = basis->size();
  CMatrix x = CMatrix::Zero(n2, n2);
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const CMatrix ideal = gate * probes[k] * gate.adjoint();
    const double c = weights[k] / hs_norm2(probes[k]);
    std::vector<CMatrix> left(n2);
    std::vector<CMatrix> right(n2);
    for (int l = 0; l < n2; ++l) {
      left[l] = (*basis)[l].adjoint() * ideal;
      right[l] = (*basis)[l] * probes[k];
    }
    for (int l = 0; l < n2; ++l) {
      for (int m = 0; m < n2; ++m) x(l, m) += c * (left[l] * right[m]).trace();
    }
  }
  return x;
}

double coherence_smoothed(const ProcessMatrix& chi, double eps) {
  const CMatrix rho = choi_state(chi);
  double off = 0.0;
  for (Eigen::Index p = 0; p < rho.rows(); ++p) {
    for (Eigen::Index q = 0; q < rho.cols(); ++q) {
      if (p != q) off += smoothed_abs(rho(p, q), eps);
    }
  }
  const double n = chi.dim();
  return off / (n * n - 1.0);
}

double evaluate(const FunctionalSpec& spec, const ProcessMatrix& chi) {
  switch (spec.kind) {
    case FunctionalKind::Purity:
      return purity(chi);
    case FunctionalKind::CoherenceL1:
      return coherence_l1(chi);
    case FunctionalKind::StateBased: {
      if (!spec.target_unitary) throw DomainError("state-based fidelity needs a target gate");
      const CMatrix x = state_linear_form(*spec.target_unitary, chi.basis_ptr(), spec.state_weights);
      return hs_inner(x, chi.data()).real();
    }
    default:
      break;
  }
  if (!spec.target) throw DomainError("process fidelity needs a target process");
  const ProcessMatrix c = chi.in_basis(spec.target->basis_ptr());
  switch (spec.kind) {
    case FunctionalKind::ConvexOverlap:
      return f_c(c, *spec.target);
    case FunctionalKind::NonconvexOverlap:
      return f_nc(c, *spec.target);
    case FunctionalKind::HilbertSchmidt:
      return f_hs(c, *spec.target);
    case FunctionalKind::Geometric:
      return f_geo(c, *spec.target, spec.w_angle, spec.w_length);
    default:
      throw Error("unreachable functional kind");
  }
}

namespace {

CMatrix target_gradient(const FunctionalSpec& spec, const ProcessMatrix& chi) {
  const CMatrix& x = chi.data();
  const CMatrix& xi = spec.target->data();
  const double n = chi.dim();
  const double n2 = n * n;
  switch (spec.kind) {
    case FunctionalKind::ConvexOverlap:
      return xi / (2.0 * n2);
    case FunctionalKind::NonconvexOverlap: {
      const double nx = hs_norm2(x);
      const double nxi = hs_norm2(xi);
      if (nx <= 0.0 || nxi <= 0.0) throw DomainError("f_nc: zero-norm argument");
      const double f = hs_inner(x, xi).real() / std::sqrt(nx * nxi);
      return xi / (2.0 * std::sqrt(nx * nxi)) - f * x / (2.0 * nx);
    }
    case FunctionalKind::HilbertSchmidt:
      return -(x - xi) / (2.0 * n2);
    case FunctionalKind::Geometric: {
      const GeoTerms g = geo_terms(chi, *spec.target);
      const double s11 = std::sqrt(g.d11);
      const CMatrix d_length = (s11 - std::sqrt(g.d22)) / ((n2 - 1.0) * s11) * x;
      CMatrix result = -spec.w_length * d_length;
      // One-sided limit: the clamped arccos contributes no gradient.
      if (std::abs(g.c) < 1.0) {
        const CMatrix d_c = xi / (2.0 * std::sqrt(g.d11 * g.d22)) - g.c * x / (2.0 * g.d11);
        const double sin_theta = std::sin(g.theta);
        const double ratio = g.theta < 1e-8 ? 1.0 : g.theta / sin_theta;
        // d(theta^2)/dc = -2 theta / sin(theta)
        result += spec.w_angle / (kPi * kPi) * 2.0 * ratio * d_c;
      }
      return result;
    }
    default:
      throw Error("unreachable functional kind");
  }
}

}  // namespace

CMatrix gradient(const FunctionalSpec& spec, const ProcessMatrix& chi) {
  const double n = chi.dim();
  switch (spec.kind) {
    case FunctionalKind::Purity:
      return chi.data() / (n * n);
    case FunctionalKind::StateBased: {
      if (!spec.target_unitary) throw DomainError("state-based fidelity needs a target gate");
      return state_linear_form(*spec.target_unitary, chi.basis_ptr(), spec.state_weights) / 2.0;
    }
    case FunctionalKind::CoherenceL1: {
      const auto logical = logical_basis(chi.dim());
      const BasisChange bc = basis_change(chi.basis(), *logical);
      const CMatrix rho = bc.apply(chi.data()) / n;
      const double eps = spec.coherence_smoothing;
      CMatrix g = CMatrix::Zero(rho.rows(), rho.cols());
      for (Eigen::Index p = 0; p < rho.rows(); ++p) {
        for (Eigen::Index q = 0; q < rho.cols(); ++q) {
          if (p != q) g(p, q) = rho(p, q) / (2.0 * smoothed_abs(rho(p, q), eps));
        }
      }
      g /= n * (n * n - 1.0);
      return bc.apply_inverse(g);
    }
    default:
      break;
  }
  if (!spec.target) throw DomainError("process fidelity needs a target process");
  if (chi.basis().same_as(spec.target->basis())) return target_gradient(spec, chi);
  const BasisChange bc = basis_change(chi.basis(), spec.target->basis());
  const ProcessMatrix in_target(spec.target->basis_ptr(), bc.apply(chi.data()));
  return bc.apply_inverse(target_gradient(spec, in_target));
}

KrotovSigma krotov_A(const FunctionalSpec& spec, const CMatrix& delta_chi, const CMatrix& lambda,
                     double delta_j, double zeta) {
  if (is_first_order(spec.kind)) return {};
  const double norm2 = hs_norm2(delta_chi);
  if (std::sqrt(norm2) < 1e-14) return {};
  KrotovSigma out;
  out.a = (delta_j + 2.0 * hs_inner(delta_chi, lambda).real()) / norm2;
  out.sigma = -std::max(zeta, 2.0 * out.a + zeta);
  return out;
}

}  // namespace qpctl
