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

// qpctl command-line runner.
//
// Exit codes: 0 ok, 1 configuration or I/O error, 2 numeric invariant violation.

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qpctl/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;

struct Options {
  std::string config;
  std::string seed_fields;
};

void add_common(CLI::App* cmd, Options& opts) {
  cmd->add_option("-c,--config", opts.config, "Run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed-fields", opts.seed_fields,
                  "CSV with t_us, eps_pump, eps_stokes used as guess fields")
      ->check(CLI::ExistingFile);
}

qpctl::RunConfig load(const Options& opts, qpctl::ScenarioKind scenario) {
  qpctl::RunConfig config = qpctl::load_config(opts.config);
  config.scenario = scenario;
  if (!opts.seed_fields.empty()) config.seed_fields = opts.seed_fields;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal control of open-system quantum processes"};
  app.require_subcommand(1);
  Options opts;

  struct Verb {
    const char* name;
    const char* help;
    qpctl::ScenarioKind scenario;
  };
  const Verb verbs[] = {
      {"propagate", "Propagate the guess fields and report final-time features",
       qpctl::ScenarioKind::Propagate},
      {"optimize", "Run the Krotov optimization", qpctl::ScenarioKind::Optimize},
      {"cross-eval", "Optimize each configured functional and cross-evaluate",
       qpctl::ScenarioKind::CrossEvaluate},
      {"educated", "Pre-optimize at a shorter time, rescale and re-optimize",
       qpctl::ScenarioKind::EducatedGuess},
  };
  for (const auto& v : verbs) add_common(app.add_subcommand(v.name, v.help), opts);
  auto* validate = app.add_subcommand("validate-config", "Parse and check a configuration");
  add_common(validate, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (validate->parsed()) {
      qpctl::RunConfig config = load(opts, qpctl::ScenarioKind::Optimize);
      const qpctl::Setup setup = qpctl::make_setup(config);
      std::cout << fmt::format("{}: ok (tf = {} us, steps = {}, functional = {}, output = {})\n",
                               opts.config, setup.grid.tf(), setup.grid.steps(),
                               qpctl::functional_name(setup.spec.kind),
                               config.output_dir.string());
      return kExitOk;
    }
    for (const auto& v : verbs) {
      if (app.got_subcommand(v.name)) {
        qpctl::run_scenario(load(opts, v.scenario), std::cout);
      }
    }
  } catch (const qpctl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qpctl::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const qpctl::DomainError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
