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

// Timing comparison of the propagation kernels:
//   dense N^4 x N^4 reference vs factorized step maps,
//   serial vs OpenMP batch propagation, oracle reconstruction and cross-evaluation.

#include <chrono>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <omp.h>

#include "qpctl/experiment.hpp"

namespace {

template <class Fn>
double seconds(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void row(const std::string& name, double serial, double other, double diff) {
  std::cout << fmt::format("{:<28} {:>10.4f} {:>10.4f} {:>8.2f}x {:>10.2e}\n", name, serial, other,
                           serial / other, diff);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qpctl kernel benchmark"};
  int steps = 2000;
  int batch = 8;
  int iterations = 5;
  int threads = 0;
  app.add_option("--steps", steps, "Time steps at tf = 20 us")->check(CLI::PositiveNumber);
  app.add_option("--batch", batch, "Field sets in the batch benchmark")->check(CLI::PositiveNumber);
  app.add_option("--iterations", iterations, "Krotov iterations per cross-eval row")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--threads", threads, "OpenMP threads (0: default)")->check(CLI::NonNegativeNumber);
  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  using namespace qpctl;
  const LambdaParams params;
  const LindbladModel model = lambda_model(params);
  const TimeGrid grid(20.0, steps);
  const auto fields = guess_fields(GuessFamily::Blackman, params, grid);

  std::cout << fmt::format("threads available: {}\n", omp_get_max_threads());
  std::cout << fmt::format("{:<28} {:>10} {:>10} {:>9} {:>10}\n", "kernel", "base [s]", "fast [s]",
                           "speedup", "max diff");

  Trajectory dense, fast;
  const double t_dense = seconds([&] { dense = propagate_forward_reference(model, fields, grid); });
  const double t_fast = seconds([&] { fast = propagate_forward(model, fields, grid); });
  const double dense_diff = max_abs(dense.final_state().data() - fast.final_state().data());
  row("dense vs factorized", t_dense, t_fast, dense_diff);

  std::vector<std::vector<ControlField>> sets;
  for (int b = 0; b < batch; ++b) {
    auto f = fields;
    for (auto& field : f) {
      for (auto& v : field.values) v *= 1.0 + 0.05 * b;
    }
    sets.push_back(f);
  }
  std::vector<Trajectory> serial, parallel;
  const double t_bs = seconds([&] { serial = propagate_forward_batch(model, sets, grid, Execution::Serial); });
  const double t_bp = seconds([&] { parallel = propagate_forward_batch(model, sets, grid, Execution::Parallel); });
  double batch_diff = 0.0;
  for (int b = 0; b < batch; ++b) {
    batch_diff = std::max(batch_diff, max_abs(serial[b].final_state().data() -
                                              parallel[b].final_state().data()));
  }
  row("batch serial vs parallel", t_bs, t_bp, batch_diff);

  CMatrix oracle_s, oracle_p;
  const double t_os = seconds([&] {
    oracle_s = reconstruct_process_from_oracle(model, fields, grid, Execution::Serial).data();
  });
  const double t_op = seconds([&] {
    oracle_p = reconstruct_process_from_oracle(model, fields, grid, Execution::Parallel).data();
  });
  row("oracle serial vs parallel", t_os, t_op, max_abs(oracle_s - oracle_p));

  RunConfig config;
  config.tf = 20.0;
  config.steps = steps;
  config.max_iterations = iterations;
  config.threads = threads;
  CrossEvalTable ces, cep;
  const double t_cs = seconds([&] { ces = cross_evaluate(config, Execution::Serial); });
  const double t_cp = seconds([&] { cep = cross_evaluate(config, Execution::Parallel); });
  double cross_diff = 0.0;
  for (std::size_t i = 0; i < ces.cells.size(); ++i) {
    for (std::size_t j = 0; j < ces.cells[i].size(); ++j) {
      cross_diff = std::max(cross_diff, std::abs(ces.cells[i][j] - cep.cells[i][j]));
    }
  }
  row("cross-eval serial vs parallel", t_cs, t_cp, cross_diff);

  // parallel paths must reproduce the serial ones exactly
  const bool ok = dense_diff < 1e-10 && batch_diff == 0.0 && max_abs(oracle_s - oracle_p) == 0.0 &&
                  cross_diff == 0.0;
  if (!ok) std::cerr << "benchmark paths disagree\n";
  return ok ? 0 : 1;
}
