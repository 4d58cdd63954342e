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

#include "qpctl/experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace qpctl {

namespace pt = boost::property_tree;

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Propagate:
      return "propagate";
    case ScenarioKind::Optimize:
      return "optimize";
    case ScenarioKind::CrossEvaluate:
      return "cross-eval";
    case ScenarioKind::EducatedGuess:
      return "educated";
  }
  return "unknown";
}

ScenarioKind parse_scenario(std::string_view name) {
  for (auto k : {ScenarioKind::Propagate, ScenarioKind::Optimize, ScenarioKind::CrossEvaluate,
                 ScenarioKind::EducatedGuess}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError(fmt::format("unknown scenario '{}'", name));
}

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"scenario", {"kind"}},
      {"model",
       {"preset", "basis", "delta_p", "delta_s", "gamma_1", "gamma_3", "e0_p", "e0_s", "g", "k_p",
        "l_p", "k_s", "l_s", "cycles_per_us"}},
      {"grid", {"tf", "steps"}},
      {"functional", {"kind", "target", "phi", "w_angle", "w_length", "coherence_smoothing"}},
      {"guess", {"family", "weight_pump", "weight_stokes", "seed_fields"}},
      {"krotov", {"max_iterations", "delta_j_tol", "zeta_a", "force_first_order"}},
      {"cross_eval", {"kinds", "threads"}},
      {"educated", {"pre_tf", "pre_steps", "pre_iterations", "baseline"}},
      {"output", {"dir", "checkpoint_every"}},
  };
  return keys;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Typed access to the parsed tree with "<source>:<line>:" diagnostics.
class Reader {
 public:
  Reader(const std::string& text, std::string source) : source_(std::move(source)) {
    std::istringstream in(text);
    try {
      pt::read_ini(in, tree_);
    } catch (const pt::ini_parser_error& e) {
      throw ConfigError(fmt::format("{}:{}: {}", source_, e.line(), e.message()));
    }
    index_lines(text);
    for (const auto& [section, body] : tree_) {
      const auto known = schema().find(section);
      if (body.empty() || known == schema().end()) {
        throw ConfigError(fmt::format("{}: unknown section '{}'", where(section, ""), section));
      }
      for (const auto& [key, value] : body) {
        if (!known->second.count(key)) {
          throw ConfigError(fmt::format("{}: unknown key '{}' in [{}]", where(section, key), key,
                                        section));
        }
      }
    }
  }

  std::optional<std::string> text(const std::string& section, const std::string& key) const {
    auto v = tree_.get_optional<std::string>(section + "." + key);
    if (!v) return std::nullopt;
    return trim(*v);
  }

  void read(const std::string& section, const std::string& key, std::string& out) const {
    if (auto v = text(section, key)) out = *v;
  }

  void read(const std::string& section, const std::string& key, double& out) const {
    if (auto v = text(section, key)) {
      try {
        out = parse_double(*v);
      } catch (const Error&) {
        fail(section, key, fmt::format("'{}' is not a number", *v));
      }
    }
  }

  void read(const std::string& section, const std::string& key, int& out) const {
    if (auto v = text(section, key)) {
      std::size_t used = 0;
      try {
        out = std::stoi(*v, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != v->size()) fail(section, key, fmt::format("'{}' is not an integer", *v));
    }
  }

  void read(const std::string& section, const std::string& key, bool& out) const {
    if (auto v = text(section, key)) {
      if (*v == "true" || *v == "yes" || *v == "1") {
        out = true;
      } else if (*v == "false" || *v == "no" || *v == "0") {
        out = false;
      } else {
        fail(section, key, fmt::format("'{}' is not a boolean", *v));
      }
    }
  }

  template <class Fn>
  void parse_with(const std::string& section, const std::string& key, Fn&& fn) const {
    if (auto v = text(section, key)) {
      try {
        fn(*v);
      } catch (const Error& e) {
        fail(section, key, e.what());
      }
    }
  }

  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& message) const {
    throw ConfigError(fmt::format("{}: [{}] {}: {}", where(section, key), section, key, message));
  }

 private:
  void index_lines(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string t = trim(line);
      if (t.empty() || t[0] == ';' || t[0] == '#') continue;
      if (t.front() == '[' && t.back() == ']') {
        section = trim(t.substr(1, t.size() - 2));
        lines_.emplace(section + ".", lineno);
        continue;
      }
      const auto eq = t.find('=');
      if (eq != std::string::npos) lines_.emplace(section + "." + trim(t.substr(0, eq)), lineno);
    }
  }

  std::string where(const std::string& section, const std::string& key) const {
    const auto it = lines_.find(section + "." + key);
    if (it == lines_.end()) return source_;
    return fmt::format("{}:{}", source_, it->second);
  }

  std::string source_;
  pt::ptree tree_;
  std::map<std::string, int> lines_;
};

BasisKind parse_basis_kind(const std::string& name) {
  if (name == "gellmann") return BasisKind::GellMann;
  if (name == "logical") return BasisKind::Logical;
  throw Error(fmt::format("unknown basis '{}'", name));
}

std::vector<FunctionalKind> parse_kind_list(const std::string& text) {
  std::vector<FunctionalKind> kinds;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) kinds.push_back(parse_functional_kind(item));
  }
  if (kinds.empty()) throw Error("empty functional list");
  return kinds;
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& source_name,
                       const std::filesystem::path& base_dir) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const Reader r(buffer.str(), source_name);
  RunConfig c;

  r.parse_with("scenario", "kind", [&](const std::string& v) { c.scenario = parse_scenario(v); });

  r.parse_with("model", "preset", [&](const std::string& v) {
    c.model = lambda_preset(v);
    c.preset = v;
  });
  r.parse_with("model", "basis", [&](const std::string& v) { c.basis = parse_basis_kind(v); });
  r.read("model", "delta_p", c.model.delta_p);
  r.read("model", "delta_s", c.model.delta_s);
  r.read("model", "gamma_1", c.model.gamma_1);
  r.read("model", "gamma_3", c.model.gamma_3);
  r.read("model", "e0_p", c.model.e0_p);
  r.read("model", "e0_s", c.model.e0_s);
  r.read("model", "g", c.model.g);
  r.read("model", "k_p", c.model.k_p);
  r.read("model", "l_p", c.model.l_p);
  r.read("model", "k_s", c.model.k_s);
  r.read("model", "l_s", c.model.l_s);
  r.read("model", "cycles_per_us", c.model.cycles_per_us);

  r.read("grid", "tf", c.tf);
  r.read("grid", "steps", c.steps);

  r.parse_with("functional", "kind",
               [&](const std::string& v) { c.functional = parse_functional_kind(v); });
  r.parse_with("functional", "target", [&](const std::string& v) {
    parse_gate(v);
    c.gate = v;
  });
  r.read("functional", "phi", c.phi);
  r.read("functional", "w_angle", c.w_angle);
  r.read("functional", "w_length", c.w_length);
  r.read("functional", "coherence_smoothing", c.coherence_smoothing);

  r.parse_with("guess", "family", [&](const std::string& v) { c.family = parse_guess_family(v); });
  r.read("guess", "weight_pump", c.weight_pump);
  r.read("guess", "weight_stokes", c.weight_stokes);
  r.parse_with("guess", "seed_fields", [&](const std::string& v) {
    std::filesystem::path p(v);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    if (!std::filesystem::exists(p)) throw Error(fmt::format("file '{}' does not exist", p.string()));
    c.seed_fields = p;
  });

  r.read("krotov", "max_iterations", c.max_iterations);
  r.read("krotov", "delta_j_tol", c.delta_j_tol);
  r.read("krotov", "zeta_a", c.zeta_a);
  r.read("krotov", "force_first_order", c.force_first_order);

  r.parse_with("cross_eval", "kinds", [&](const std::string& v) { c.cross_kinds = parse_kind_list(v); });
  r.read("cross_eval", "threads", c.threads);

  r.read("educated", "pre_tf", c.pre_tf);
  r.read("educated", "pre_steps", c.pre_steps);
  r.read("educated", "pre_iterations", c.pre_iterations);
  r.read("educated", "baseline", c.baseline);

  std::string dir;
  r.read("output", "dir", dir);
  if (!dir.empty()) c.output_dir = dir;
  r.read("output", "checkpoint_every", c.checkpoint_every);

  if (const char* env = std::getenv("QPCTL_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    c.output_dir = env;
  }
  try {
    check_config(c);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", source_name, e.what()));
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("{}: cannot open config file", path.string()));
  return parse_config(in, path.string(), path.parent_path());
}

void check_config(const RunConfig& c) {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
  };
  try {
    check_params(c.model);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  require(c.tf > 0.0, "grid tf must be > 0");
  require(c.steps > 0, "grid steps must be > 0");
  require(c.weight_pump > 0.0 && c.weight_stokes > 0.0, "update weights must be > 0");
  require(c.w_angle >= 0.0 && c.w_length >= 0.0 && std::abs(c.w_angle + c.w_length - 1.0) < 1e-12,
          "w_angle and w_length must be nonnegative and sum to 1");
  require(c.coherence_smoothing > 0.0, "coherence_smoothing must be > 0");
  require(c.max_iterations >= 0, "max_iterations must be >= 0");
  require(c.delta_j_tol > 0.0, "delta_j_tol must be > 0");
  require(c.zeta_a >= 0.0, "zeta_a must be >= 0");
  require(c.threads >= 0, "threads must be >= 0");
  require(!c.cross_kinds.empty(), "cross_eval kinds must not be empty");
  require(c.pre_tf > 0.0 && c.pre_steps > 0 && c.pre_iterations >= 0,
          "educated pre_tf, pre_steps must be > 0 and pre_iterations >= 0");
  require(c.checkpoint_every >= 0, "checkpoint_every must be >= 0");
  require(!c.seed_fields || std::filesystem::exists(*c.seed_fields), "seed_fields file is missing");
}

namespace {

FunctionalSpec spec_for(const RunConfig& c, FunctionalKind kind, const TargetGate& gate,
                        const BasisPtr& basis) {
  FunctionalSpec spec = make_spec(kind, gate.matrix, basis);
  spec.w_angle = c.w_angle;
  spec.w_length = c.w_length;
  spec.coherence_smoothing = c.coherence_smoothing;
  return spec;
}

std::vector<ControlField> weighted_guess(const RunConfig& c, const TimeGrid& grid) {
  auto fields = guess_fields(c.family, c.model, grid);
  fields[0].weight = c.weight_pump;
  fields[1].weight = c.weight_stokes;
  return fields;
}

KrotovConfig krotov_config(const RunConfig& c) {
  KrotovConfig k;
  k.max_iterations = c.max_iterations;
  k.delta_j_tol = c.delta_j_tol;
  k.zeta_a = c.zeta_a;
  k.force_first_order = c.force_first_order;
  return k;
}

void require_valid(const ProcessMatrix& chi, const std::string& what) {
  const ValidationTolerances tol{1e-9, 1e-8, -1e-7, 1e-8};
  const auto report = validate(chi, tol);
  if (!report.ok) throw NumericError(fmt::format("{}: {}", what, report.failure));
}

void write_process_file(const std::filesystem::path& path, const ProcessMatrix& chi) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(fmt::format("{}: cannot open for writing", path.string()));
  write_process(out, chi);
}

}  // namespace

Setup make_setup(const RunConfig& c) {
  check_config(c);
  LindbladModel model = lambda_model(c.model, c.basis);
  TimeGrid grid(c.tf, c.steps);
  TargetGate gate = parse_gate(c.gate, c.phi);
  FunctionalSpec spec = spec_for(c, c.functional, gate, model.basis());
  std::vector<ControlField> guess = weighted_guess(c, grid);
  if (c.seed_fields) {
    try {
      guess = fields_from_table(read_csv(*c.seed_fields), guess);
    } catch (const Error& e) {
      throw ConfigError(fmt::format("{}: {}", c.seed_fields->string(), e.what()));
    }
  }
  return Setup{std::move(model), grid, std::move(spec), std::move(gate), std::move(guess)};
}

FeatureReport feature_report(const ProcessMatrix& chi, const TargetGate& gate) {
  FeatureReport report;
  for (auto kind : all_functional_kinds()) {
    report.names.emplace_back(functional_name(kind));
    report.values.push_back(evaluate(make_spec(kind, gate.matrix, chi.basis_ptr()), chi));
  }
  return report;
}

CrossEvalTable cross_evaluate(const RunConfig& c, Execution exec) {
  const Setup setup = make_setup(c);
  CrossEvalTable table;
  table.optimized = c.cross_kinds;
  for (auto kind : all_functional_kinds()) table.columns.emplace_back(functional_name(kind));
  const int rows = static_cast<int>(c.cross_kinds.size());
  table.runs.resize(rows);
  table.cells.resize(rows);
  const KrotovConfig kc = krotov_config(c);
  parallel_for(
      rows, exec,
      [&](int i) {
        const FunctionalSpec spec = spec_for(c, c.cross_kinds[i], setup.gate, setup.model.basis());
        table.runs[i] = run(setup.model, setup.grid, spec, setup.guess, kc);
        const ProcessMatrix chi = table.runs[i].final_trajectory.final_state();
        for (auto kind : all_functional_kinds()) {
          table.cells[i].push_back(evaluate(spec_for(c, kind, setup.gate, chi.basis_ptr()), chi));
        }
      },
      c.threads);
  return table;
}

namespace {

void run_propagate(const RunConfig& c, std::ostream& log) {
  const Setup s = make_setup(c);
  const Trajectory traj = propagate_forward(s.model, s.guess, s.grid);
  const FunctionalSpec fc = make_spec(FunctionalKind::ConvexOverlap, s.gate.matrix, s.model.basis());
  CsvTable trajectory;
  trajectory.header = {"t_us", "purity", "coherence", "fc", "trace_error", "min_eigenvalue"};
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const ProcessMatrix chi = traj.at(k);
    const double t = s.grid.time(static_cast<int>(k));
    const auto report = validate(chi, {1e-9, 1e-8, -1e-7, 1e-8});
    if (!report.ok) throw NumericError(fmt::format("state at t = {} us: {}", t, report.failure));
    trajectory.add_row({t, purity(chi), coherence_l1(chi), evaluate(fc, chi), report.trace_error,
                        report.min_eigenvalue});
  }
  const ProcessMatrix final_chi = traj.final_state();
  const FeatureReport features = feature_report(final_chi, s.gate);
  CsvTable report;
  report.header = {"t_us"};
  report.header.insert(report.header.end(), features.names.begin(), features.names.end());
  std::vector<double> row{s.grid.tf()};
  row.insert(row.end(), features.values.begin(), features.values.end());
  report.add_row(row);
  write_csv(c.output_dir / "report.csv", report);
  write_csv(c.output_dir / "trajectory.csv", trajectory);
  write_process_file(c.output_dir / "process.txt", final_chi);
  for (std::size_t i = 0; i < features.names.size(); ++i) {
    log << fmt::format("{:>10} = {:.6f}\n", features.names[i], features.values[i]);
  }
}

OptimizationResult optimize_logged(const RunConfig& c, const Setup& s, const FunctionalSpec& spec,
                                   const TimeGrid& grid, const std::vector<ControlField>& guess,
                                   int max_iterations, const std::filesystem::path& checkpoint_dir,
                                   std::ostream& log, const std::string& tag) {
  KrotovConfig kc = krotov_config(c);
  kc.max_iterations = max_iterations;
  kc.observer = [&](const IterationRecord& r, std::span<const ControlField> fields) {
    if (!std::isfinite(r.F) || !std::isfinite(r.J)) {
      throw NumericError(fmt::format("{} iteration {}: non-finite functional", tag, r.n));
    }
    if (c.checkpoint_every > 0 && r.n > 0 && r.n % c.checkpoint_every == 0) {
      const std::vector<ControlField> copy(fields.begin(), fields.end());
      write_csv(checkpoint_dir / fmt::format("fields_iter_{:06d}.csv", r.n),
                fields_table(copy, grid));
      log << fmt::format("[{}] n={} F={:.8f} J={:.8f}\n", tag, r.n, r.F, r.J);
    }
  };
  OptimizationResult result = run(s.model, grid, spec, guess, kc);
  require_valid(result.final_trajectory.final_state(), tag + " final process");
  const auto& last = result.records.back();
  log << fmt::format("[{}] {} after {} iterations: F = {:.8f}\n", tag, to_string(result.termination),
                     last.n, last.F);
  return result;
}

void write_run(const std::filesystem::path& dir, const std::string& prefix,
               const OptimizationResult& result, const TimeGrid& grid) {
  write_csv(dir / (prefix + "iterations.csv"), iterations_table(result.records, result.final_fields));
  write_csv(dir / (prefix + "fields.csv"), fields_table(result.final_fields, grid));
  write_process_file(dir / (prefix + "process.txt"), result.final_trajectory.final_state());
}

void run_optimize(const RunConfig& c, std::ostream& log) {
  const Setup s = make_setup(c);
  std::filesystem::create_directories(c.output_dir);
  const auto result = optimize_logged(c, s, s.spec, s.grid, s.guess, c.max_iterations,
                                      c.output_dir / "checkpoints", log,
                                      std::string(functional_name(s.spec.kind)));
  write_run(c.output_dir, "", result, s.grid);
}

void run_cross_eval(const RunConfig& c, std::ostream& log) {
  const CrossEvalTable table = cross_evaluate(c);
  const TimeGrid grid(c.tf, c.steps);
  CsvTable out;
  out.header = {"optimized"};
  out.header.insert(out.header.end(), table.columns.begin(), table.columns.end());
  for (std::size_t i = 0; i < table.optimized.size(); ++i) {
    std::vector<std::string> row{std::string(functional_name(table.optimized[i]))};
    for (double v : table.cells[i]) row.push_back(format_double(v));
    out.rows.push_back(std::move(row));
    const std::string name(functional_name(table.optimized[i]));
    write_run(c.output_dir, name + "_", table.runs[i], grid);
    log << fmt::format("[{}] {} after {} iterations: F = {:.8f}\n", name,
                       to_string(table.runs[i].termination), table.runs[i].records.back().n,
                       table.runs[i].records.back().F);
  }
  write_csv(c.output_dir / "cross_eval.csv", out);
}

void run_educated(const RunConfig& c, std::ostream& log) {
  const Setup s = make_setup(c);
  std::filesystem::create_directories(c.output_dir);
  const TimeGrid pre_grid(c.pre_tf, c.pre_steps);
  const auto pre_guess = weighted_guess(c, pre_grid);
  const auto pre = optimize_logged(c, s, s.spec, pre_grid, pre_guess, c.pre_iterations,
                                   c.output_dir / "checkpoints" / "pre", log, "pre");
  write_run(c.output_dir, "pre_", pre, pre_grid);

  std::vector<ControlField> educated;
  for (std::size_t m = 0; m < pre.final_fields.size(); ++m) {
    ControlField f = rescale_field(pre.final_fields[m], c.pre_tf, c.tf, s.grid);
    f.shape = s.guess[m].shape;
    f.weight = s.guess[m].weight;
    educated.push_back(std::move(f));
  }
  write_csv(c.output_dir / "educated_guess.csv", fields_table(educated, s.grid));
  const auto main = optimize_logged(c, s, s.spec, s.grid, educated, c.max_iterations,
                                    c.output_dir / "checkpoints" / "educated", log, "educated");
  write_run(c.output_dir, "", main, s.grid);

  CsvTable summary;
  summary.header = {"stage", "F_initial", "F_final", "iterations"};
  auto add = [&](const std::string& stage, const OptimizationResult& r) {
    summary.rows.push_back({stage, format_double(r.records.front().F),
                            format_double(r.records.back().F),
                            std::to_string(r.records.back().n)});
  };
  add("pre", pre);
  add("educated", main);
  if (c.baseline) {
    const auto base = optimize_logged(c, s, s.spec, s.grid, s.guess, c.max_iterations,
                                      c.output_dir / "checkpoints" / "baseline", log, "baseline");
    write_run(c.output_dir, "baseline_", base, s.grid);
    add("baseline", base);
    const double gain = main.records.back().F / base.records.back().F - 1.0;
    log << fmt::format("educated vs baseline: {:+.1f}%\n", 100.0 * gain);
  }
  write_csv(c.output_dir / "summary.csv", summary);
}

}  // namespace

void run_scenario(const RunConfig& config, std::ostream& log) {
  switch (config.scenario) {
    case ScenarioKind::Propagate:
      run_propagate(config, log);
      break;
    case ScenarioKind::Optimize:
      run_optimize(config, log);
      break;
    case ScenarioKind::CrossEvaluate:
      run_cross_eval(config, log);
      break;
    case ScenarioKind::EducatedGuess:
      run_educated(config, log);
      break;
  }
}

}  // namespace qpctl
