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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qpctl/csv.hpp"
#include "qpctl/functionals.hpp"
#include "qpctl/krotov.hpp"
#include "qpctl/lambda_system.hpp"

namespace qpctl {

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class ScenarioKind { Propagate, Optimize, CrossEvaluate, EducatedGuess };

std::string_view to_string(ScenarioKind kind);
ScenarioKind parse_scenario(std::string_view name);

struct RunConfig {
  ScenarioKind scenario = ScenarioKind::Optimize;

  // [model]
  std::string preset = "lambda-rb87-default";
  LambdaParams model;
  BasisKind basis = BasisKind::GellMann;

  // [grid]
  double tf = 20.0;
  int steps = 2000;

  // [functional]
  FunctionalKind functional = FunctionalKind::ConvexOverlap;
  std::string gate = "phase";
  double phi = 3.14159265358979323846;
  double w_angle = 0.5;
  double w_length = 0.5;
  double coherence_smoothing = 1e-8;

  // [guess]
  GuessFamily family = GuessFamily::Blackman;
  double weight_pump = 1.0;
  double weight_stokes = 1.0;
  std::optional<std::filesystem::path> seed_fields;

  // [krotov]
  int max_iterations = 500;
  double delta_j_tol = 1e-7;
  double zeta_a = 0.01;
  bool force_first_order = false;

  // [cross_eval]
  std::vector<FunctionalKind> cross_kinds{FunctionalKind::ConvexOverlap,
                                          FunctionalKind::NonconvexOverlap,
                                          FunctionalKind::HilbertSchmidt,
                                          FunctionalKind::Geometric};
  int threads = 0;  // 0: OpenMP default

  // [educated]
  double pre_tf = 5.0;
  int pre_steps = 500;
  int pre_iterations = 200;
  bool baseline = true;

  // [output]
  std::filesystem::path output_dir = "qpctl-out";
  int checkpoint_every = 50;
};

/// Parses the INI-style format documented in the README. Errors carry
/// "<source>:<line>:" prefixes where a line is known. Relative seed paths
/// resolve against `base_dir`. QPCTL_OUTPUT_DIR, when set, replaces the output dir.
RunConfig parse_config(std::istream& in, const std::string& source_name,
                       const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Consistency checks that do not depend on the file layout.
void check_config(const RunConfig& config);

/// The pieces a scenario works with, built from a config.
struct Setup {
  LindbladModel model;
  TimeGrid grid;
  FunctionalSpec spec;
  TargetGate gate;
  std::vector<ControlField> guess;
};
Setup make_setup(const RunConfig& config);

/// F_c, F_nc, F_HS, F_geo, F_S (target gate), purity and coherence of chi.
struct FeatureReport {
  std::vector<std::string> names;
  std::vector<double> values;
};
FeatureReport feature_report(const ProcessMatrix& chi, const TargetGate& gate);

/// Cross-evaluation F_l | F_k: row k holds every functional on the dynamics
/// optimized for kind k.
struct CrossEvalTable {
  std::vector<FunctionalKind> optimized;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> cells;
  std::vector<OptimizationResult> runs;
};
CrossEvalTable cross_evaluate(const RunConfig& config, Execution exec = Execution::Parallel);

/// Runs `config.scenario` and writes its CSV artifacts under config.output_dir.
/// Progress lines go to `log`. Throws ConfigError, NumericError or Error.
void run_scenario(const RunConfig& config, std::ostream& log);

}  // namespace qpctl
