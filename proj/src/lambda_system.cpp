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

#include "qpctl/lambda_system.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

namespace qpctl {

namespace {

constexpr double kPi = std::numbers::pi;

CMatrix unit(int i, int j) {
  CMatrix m = CMatrix::Zero(3, 3);
  m(i, j) = 1.0;
  return m;
}

double frequency_scale(const LambdaParams& p) { return p.cycles_per_us ? 2.0 * kPi : 1.0; }

}  // namespace

LambdaParams lambda_preset(std::string_view name) {
  if (name == "lambda-rb87-default") return LambdaParams{};
  throw Error(fmt::format("unknown model preset '{}'", name));
}

void check_params(const LambdaParams& p) {
  if (!(p.gamma_1 >= 0.0) || !(p.gamma_3 >= 0.0)) throw DomainError("decay rates must be >= 0");
  if (p.k_p <= 0 || p.l_p <= 0 || p.k_s <= 0 || p.l_s <= 0) {
    throw DomainError("Blackman indices must be positive");
  }
  for (double v : {p.delta_p, p.delta_s, p.e0_p, p.e0_s, p.g}) {
    if (!std::isfinite(v)) throw DomainError("model parameters must be finite");
  }
}

LindbladModel lambda_model(const LambdaParams& params, BasisKind basis) {
  check_params(params);
  const double scale = frequency_scale(params);
  CMatrix drift = CMatrix::Zero(3, 3);
  drift(0, 0) = -scale * params.delta_p;
  drift(2, 2) = -scale * params.delta_s;
  std::vector<Control> controls{
      {-0.5 * (unit(0, 1) + unit(1, 0)), "pump"},
      {-0.5 * (unit(1, 2) + unit(2, 1)), "stokes"},
  };
  std::vector<Jump> jumps{{unit(0, 1), params.gamma_1}, {unit(2, 1), params.gamma_3}};
  return LindbladModel(make_basis(basis, 3), std::move(drift), std::move(controls),
                       std::move(jumps));
}

TargetGate phase_gate(double phi) {
  TargetGate gate{GateKind::Phase, phi, CMatrix::Identity(3, 3)};
  gate.matrix(2, 2) = std::polar(1.0, phi);
  return gate;
}

TargetGate qft_gate() {
  const Complex q = std::polar(1.0, 2.0 * kPi / 3.0);
  CMatrix m(3, 3);
  m << 1.0, 1.0, 1.0, 1.0, q, q * q, 1.0, q * q, q;
  return TargetGate{GateKind::QFT, 0.0, m / std::sqrt(3.0)};
}

TargetGate parse_gate(std::string_view name, double phi) {
  if (name == "phase") return phase_gate(phi);
  if (name == "qft") return qft_gate();
  throw Error(fmt::format("unknown target gate '{}'", name));
}

std::string_view gate_name(GateKind kind) { return kind == GateKind::Phase ? "phase" : "qft"; }

ProcessMatrix target_process(const TargetGate& gate, const BasisPtr& basis) {
  return chi_from_unitary(gate.matrix, basis);
}

std::string_view to_string(GuessFamily family) {
  switch (family) {
    case GuessFamily::Blackman:
      return "blackman";
    case GuessFamily::Gaussian:
      return "gaussian";
    case GuessFamily::Sinusoid:
      return "sinusoid";
  }
  return "unknown";
}

GuessFamily parse_guess_family(std::string_view name) {
  for (auto f : {GuessFamily::Blackman, GuessFamily::Gaussian, GuessFamily::Sinusoid}) {
    if (to_string(f) == name) return f;
  }
  throw Error(fmt::format("unknown guess family '{}'", name));
}

double blackman_shape(double t, double tf, double g, int k, int l) {
  return 0.5 * (1.0 - g - std::cos(k * kPi * t / tf) + g * std::cos(l * kPi * t / tf));
}

double gaussian_shape(double t, double tf) {
  const double x = t / tf - 0.5;
  return std::exp(-32.0 * x * x);
}

double sinusoid_shape(double t, double tf) {
  const double s = std::sin(2.0 * kPi * t / tf);
  return s * s;
}

ControlField guess_field(GuessFamily family, FieldRole role, const LambdaParams& params,
                         const TimeGrid& grid) {
  check_params(params);
  const bool pump = role == FieldRole::Pump;
  const double e0 = frequency_scale(params) * (pump ? params.e0_p : params.e0_s);
  const int k = pump ? params.k_p : params.k_s;
  const int l = pump ? params.l_p : params.l_s;
  const double tf = grid.duration();

  ControlField field{pump ? "pump" : "stokes", {}, {}, 1.0};
  field.values.resize(grid.steps());
  field.shape.resize(grid.steps());
  for (int i = 0; i < grid.steps(); ++i) {
    const double t = grid.midpoint(i) - grid.t0();
    const double blackman = blackman_shape(t, tf, params.g, k, l);
    double f = blackman;
    if (family == GuessFamily::Gaussian) f = gaussian_shape(t, tf);
    if (family == GuessFamily::Sinusoid) f = sinusoid_shape(t, tf);
    field.values[i] = e0 * f;
    field.shape[i] = std::max(blackman, 0.0);
  }
  return field;
}

std::vector<ControlField> guess_fields(GuessFamily family, const LambdaParams& params,
                                       const TimeGrid& grid) {
  return {guess_field(family, FieldRole::Pump, params, grid),
          guess_field(family, FieldRole::Stokes, params, grid)};
}

namespace {

std::vector<double> stretch(const std::vector<double>& src, double from_tf, double to_tf,
                            const TimeGrid& to_grid) {
  const int n = static_cast<int>(src.size());
  const double src_dt = from_tf / n;
  std::vector<double> out(to_grid.steps());
  for (int i = 0; i < to_grid.steps(); ++i) {
    const double t = (to_grid.midpoint(i) - to_grid.t0()) * from_tf / to_tf;
    const double pos = t / src_dt - 0.5;  // fractional index between source midpoints
    if (pos <= 0.0) {
      out[i] = src.front();
    } else if (pos >= n - 1) {
      out[i] = src.back();
    } else {
      const int j = static_cast<int>(pos);
      const double w = pos - j;
      out[i] = (1.0 - w) * src[j] + w * src[j + 1];
    }
  }
  return out;
}

}  // namespace

ControlField rescale_field(const ControlField& field, double from_tf, double to_tf,
                           const TimeGrid& to_grid) {
  if (field.values.empty()) throw DomainError("rescale_field: empty field");
  if (!(from_tf > 0.0) || !(to_tf > 0.0)) throw DomainError("rescale_field: times must be > 0");
  ControlField out{field.label, stretch(field.values, from_tf, to_tf, to_grid), {}, field.weight};
  out.shape = field.shape.size() == field.values.size()
                  ? stretch(field.shape, from_tf, to_tf, to_grid)
                  : std::vector<double>(to_grid.steps(), 1.0);
  return out;
}

}  // namespace qpctl
