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

#include <numbers>
#include <string_view>
#include <vector>

#include "qpctl/lindblad.hpp"

namespace qpctl {

/// Three-level Lambda system: ground states |1>, |3> coupled to the decaying
/// excited state |2> by pump and Stokes fields. Levels map to indices 0, 1, 2.
/// Frequencies in rad/us, rates in 1/us.
struct LambdaParams {
  double delta_p = 0.1;
  double delta_s = 0.1;
  double gamma_1 = 0.1;
  double gamma_3 = 0.1;
  double e0_p = 0.3;
  double e0_s = 1.0;
  double g = 0.16;
  int k_p = 4;
  int l_p = 8;
  int k_s = 2;
  int l_s = 4;
  /// Read detunings and amplitudes as cycles/us and multiply them by 2 pi.
  bool cycles_per_us = false;
};

/// Named presets; "lambda-rb87-default" is the only one. Throws Error otherwise.
LambdaParams lambda_preset(std::string_view name);

/// Throws DomainError for negative rates or nonpositive Blackman indices.
void check_params(const LambdaParams& params);

/// H_0 = diag(-dp, 0, -ds), H_p = -(|1><2| + h.c.)/2, H_s = -(|2><3| + h.c.)/2,
/// jumps |1><2| and |3><2|. Controls are ordered pump, Stokes.
LindbladModel lambda_model(const LambdaParams& params, BasisKind basis = BasisKind::GellMann);

enum class GateKind { Phase, QFT };

struct TargetGate {
  GateKind kind = GateKind::Phase;
  double phi = std::numbers::pi;  // Phase only
  CMatrix matrix;
};

TargetGate phase_gate(double phi = std::numbers::pi);
/// (1/sqrt 3) [[1,1,1],[1,q,q^2],[1,q^2,q]] with q = exp(2 pi i / 3).
TargetGate qft_gate();

/// "phase" or "qft"; throws Error otherwise.
TargetGate parse_gate(std::string_view name, double phi = std::numbers::pi);
std::string_view gate_name(GateKind kind);

ProcessMatrix target_process(const TargetGate& gate, const BasisPtr& basis);

enum class GuessFamily { Blackman, Gaussian, Sinusoid };
enum class FieldRole { Pump, Stokes };

std::string_view to_string(GuessFamily family);
GuessFamily parse_guess_family(std::string_view name);

/// [1 - g - cos(k pi t/tf) + g cos(l pi t/tf)] / 2
double blackman_shape(double t, double tf, double g, int k, int l);
/// exp(-32 (t/tf - 1/2)^2)
double gaussian_shape(double t, double tf);
/// sin^2(2 pi t / tf)
double sinusoid_shape(double t, double tf);

/// E0_m times the family shape, sampled at interval midpoints. The update
/// shape is the Blackman function of the role regardless of family, so every
/// field is pinned at both ends during optimization; weight is 1.
ControlField guess_field(GuessFamily family, FieldRole role, const LambdaParams& params,
                         const TimeGrid& grid);

/// Pump and Stokes guesses in control order.
std::vector<ControlField> guess_fields(GuessFamily family, const LambdaParams& params,
                                       const TimeGrid& grid);

/// eps'(t) = eps(t from_tf / to_tf) on `to_grid`, by linear interpolation between
/// source midpoints (constant beyond the first and last). Values and update
/// shape are stretched alike. Throws DomainError for empty fields or tf <= 0.
ControlField rescale_field(const ControlField& field, double from_tf, double to_tf,
                           const TimeGrid& to_grid);

}  // namespace qpctl
