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


#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "qpctl/csv.hpp"
#include "qpctl/experiment.hpp"

using namespace qpctl;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(QPCTL_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.ini");
}

std::string config_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int line_count(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) ++n;
  return n;
}

RunConfig small(ScenarioKind kind, const fs::path& out) {
  RunConfig c;
  c.scenario = kind;
  c.steps = 200;
  c.max_iterations = 3;
  c.weight_pump = c.weight_stokes = 0.1;
  c.output_dir = out;
  c.checkpoint_every = 2;
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QPCTL_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("csv numbers round-trip bit-exactly") {
  const fs::path dir = scratch("csv");
  CsvTable t;
  t.header = {"a", "b"};
  const double values[] = {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, 1e-17};
  for (double v : values) t.add_row({v, -v});
  write_csv(dir / "t.csv", t);
  const CsvTable back = read_csv(dir / "t.csv");
  CHECK(back.header == t.header);
  for (std::size_t i = 0; i < std::size(values); ++i) {
    CHECK(back.number(i, "a") == values[i]);
    CHECK(back.number(i, "b") == -values[i]);
  }
  CHECK(slurp(dir / "t.csv").find('\r') == std::string::npos);
  CHECK_THROWS_AS(back.column("c"), Error);
  CHECK_THROWS_AS(write_csv(dir / "empty.csv", CsvTable{{"a"}, {}}), Error);
  CHECK_THROWS_AS(read_csv(dir / "missing.csv"), Error);
  {
    std::ofstream bad(dir / "bad.csv");
    bad << "a,b\n1,2\n3\n";
  }
  try {
    read_csv(dir / "bad.csv");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("bad.csv:3") != std::string::npos);
  }
}

TEST_CASE("iteration and field tables") {
  const fs::path dir = scratch("tables");
  IterationRecord rec{0, 0.2, 0.0, -0.2, {0.0, 0.0}, 0.3, 0.25, 0.0};
  const TimeGrid grid(20.0, 4);
  const auto fields = guess_fields(GuessFamily::Blackman, LambdaParams{}, grid);
  write_csv(dir / "it.csv", iterations_table({rec}, fields));
  CHECK(line_count(dir / "it.csv") == 2);
  const CsvTable it = read_csv(dir / "it.csv");
  CHECK(it.header == std::vector<std::string>{"n", "F", "J_d", "J", "purity", "coherence", "sigma",
                                              "max_update_pump", "max_update_stokes"});
  write_csv(dir / "f.csv", fields_table(fields, grid));
  const CsvTable f = read_csv(dir / "f.csv");
  CHECK(f.header == std::vector<std::string>{"t_us", "eps_pump", "eps_stokes"});
  CHECK(f.number(0, "t_us") == 2.5);
  const auto back = fields_from_table(f, fields);
  CHECK(back[1].values == fields[1].values);
  CHECK_THROWS_AS(fields_from_table(f, guess_fields(GuessFamily::Blackman, LambdaParams{},
                                                    TimeGrid(20.0, 5))),
                  Error);
}

TEST_CASE("config parsing") {
  const RunConfig c = parse(
      "; comment\n"
      "[scenario]\nkind = cross-eval\n"
      "[model]\npreset = lambda-rb87-default\ngamma_1 = 0.2\nbasis = logical\n"
      "[grid]\ntf = 5\nsteps = 100\n"
      "[functional]\nkind = fgeo\ntarget = qft\nw_angle = 0.25\nw_length = 0.75\n"
      "[guess]\nfamily = gaussian\nweight_pump = 0.5\n"
      "[krotov]\nmax_iterations = 7\nforce_first_order = yes\n"
      "[cross_eval]\nkinds = fc, fhs\n"
      "[output]\ndir = elsewhere\n");
  CHECK(c.scenario == ScenarioKind::CrossEvaluate);
  CHECK(c.model.gamma_1 == 0.2);
  CHECK(c.model.gamma_3 == 0.1);
  CHECK(c.basis == BasisKind::Logical);
  CHECK(c.tf == 5.0);
  CHECK(c.steps == 100);
  CHECK(c.functional == FunctionalKind::Geometric);
  CHECK(c.gate == "qft");
  CHECK(c.w_angle == 0.25);
  CHECK(c.family == GuessFamily::Gaussian);
  CHECK(c.weight_pump == 0.5);
  CHECK(c.weight_stokes == 1.0);
  CHECK(c.max_iterations == 7);
  CHECK(c.force_first_order);
  CHECK(c.cross_kinds == std::vector<FunctionalKind>{FunctionalKind::ConvexOverlap,
                                                     FunctionalKind::HilbertSchmidt});
  CHECK(c.output_dir == fs::path("elsewhere"));

  const RunConfig d = parse("");
  CHECK(d.steps == 2000);
  CHECK(d.output_dir == fs::path("qpctl-out"));
  CHECK(to_string(ScenarioKind::EducatedGuess) == "educated");
  CHECK(parse_scenario("propagate") == ScenarioKind::Propagate);
}

TEST_CASE("config errors name the line") {
  CHECK(config_error("[grid]\ntf = 20\nstep = 10\n").find("test.ini:3: unknown key 'step'") !=
        std::string::npos);
  CHECK(config_error("[grid]\n\ntf = twenty\n").find("test.ini:3:") != std::string::npos);
  CHECK(config_error("[grid]\nsteps = 10.5\n").find("test.ini:2:") != std::string::npos);
  CHECK(config_error("[solver]\nx = 1\n").find("test.ini:1: unknown section") != std::string::npos);
  CHECK(config_error("[functional]\nkind = fbest\n").find("test.ini:2:") != std::string::npos);
  CHECK(config_error("[krotov]\nforce_first_order = maybe\n").find("test.ini:2:") !=
        std::string::npos);
  CHECK(config_error("[grid\n").find("test.ini:1:") != std::string::npos);
  CHECK(config_error("[grid]\nsteps = 0\n").find("steps") != std::string::npos);
  CHECK(config_error("[guess]\nseed_fields = /nonexistent/fields.csv\n").find("test.ini:2:") !=
        std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/run.ini"), ConfigError);
}

TEST_CASE("output directory can be overridden from the environment") {
  ::setenv("QPCTL_OUTPUT_DIR", "/tmp/override", 1);
  const RunConfig c = parse("[output]\ndir = mine\n");
  ::unsetenv("QPCTL_OUTPUT_DIR");
  CHECK(c.output_dir == fs::path("/tmp/override"));
  CHECK(parse("[output]\ndir = mine\n").output_dir == fs::path("mine"));
}

TEST_CASE("propagate scenario writes the report") {
  const fs::path dir = scratch("propagate");
  RunConfig c = small(ScenarioKind::Propagate, dir);
  c.gate = "qft";
  c.steps = 2000;
  std::ostringstream log;
  run_scenario(c, log);
  const CsvTable report = read_csv(dir / "report.csv");
  REQUIRE(report.rows.size() == 1);
  CHECK(report.number(0, "fc") == doctest::Approx(0.196623697150).epsilon(1e-8));
  CHECK(report.number(0, "purity") == doctest::Approx(0.277964955015).epsilon(1e-8));
  CHECK(report.number(0, "coherence") == doctest::Approx(0.248421821965).epsilon(1e-8));
  CHECK(report.number(0, "fstate") == doctest::Approx(0.830645423986).epsilon(1e-8));
  const CsvTable traj = read_csv(dir / "trajectory.csv");
  CHECK(traj.rows.size() == 2001);
  for (std::size_t k = 0; k < traj.rows.size(); ++k) {
    CHECK(traj.number(k, "trace_error") < 1e-8);
    CHECK(traj.number(k, "min_eigenvalue") > -1e-7);
    CHECK(traj.number(k, "purity") <= 1.0 + 1e-8);
  }
  std::ifstream p(dir / "process.txt");
  CHECK(read_process(p).dim() == 3);
}

TEST_CASE("zero iterations reproduce the propagation report") {
  const fs::path a = scratch("zero_opt");
  const fs::path b = scratch("zero_prop");
  std::ostringstream log;
  RunConfig opt = small(ScenarioKind::Optimize, a);
  opt.max_iterations = 0;
  run_scenario(opt, log);
  RunConfig prop = small(ScenarioKind::Propagate, b);
  run_scenario(prop, log);
  const CsvTable it = read_csv(a / "iterations.csv");
  REQUIRE(it.rows.size() == 1);
  CHECK(it.number(0, "n") == 0.0);
  CHECK(it.number(0, "J") == -it.number(0, "F"));
  const CsvTable report = read_csv(b / "report.csv");
  CHECK(it.number(0, "F") == doctest::Approx(report.number(0, "fc")).epsilon(1e-12));
  CHECK(it.number(0, "purity") == doctest::Approx(report.number(0, "purity")).epsilon(1e-12));
}

TEST_CASE("optimize scenario output is reproducible and resumable") {
  const fs::path a = scratch("opt_a");
  const fs::path b = scratch("opt_b");
  std::ostringstream log;
  run_scenario(small(ScenarioKind::Optimize, a), log);
  run_scenario(small(ScenarioKind::Optimize, b), log);
  for (const char* name : {"iterations.csv", "fields.csv", "process.txt"}) {
    CHECK(slurp(a / name) == slurp(b / name));
  }
  CHECK(fs::exists(a / "checkpoints" / "fields_iter_000002.csv"));
  const CsvTable it = read_csv(a / "iterations.csv");
  CHECK(it.rows.size() == 4);
  for (std::size_t n = 1; n < it.rows.size(); ++n) {
    CHECK(it.number(n, "J") <= it.number(n - 1, "J") + 1e-10);
  }

  // seeding from the written fields resumes where the run stopped
  RunConfig seeded = small(ScenarioKind::Optimize, scratch("opt_seeded"));
  seeded.seed_fields = a / "fields.csv";
  seeded.max_iterations = 0;
  run_scenario(seeded, log);
  const CsvTable resumed = read_csv(seeded.output_dir / "iterations.csv");
  CHECK(resumed.number(0, "F") == doctest::Approx(it.number(3, "F")).epsilon(1e-12));

  RunConfig broken = seeded;
  broken.steps = 100;
  CHECK_THROWS_AS(make_setup(broken), ConfigError);
}

TEST_CASE("cross evaluation diagonal equals each run's final value") {
  RunConfig c = small(ScenarioKind::CrossEvaluate, scratch("cross"));
  c.gate = "qft";
  c.cross_kinds = {FunctionalKind::ConvexOverlap, FunctionalKind::Geometric};
  const CrossEvalTable serial = cross_evaluate(c, Execution::Serial);
  const CrossEvalTable parallel = cross_evaluate(c, Execution::Parallel);
  REQUIRE(serial.cells.size() == 2);
  CHECK(serial.columns.size() == 7);
  CHECK(serial.cells[0][0] == serial.runs[0].records.back().F);
  CHECK(serial.cells[1][3] == serial.runs[1].records.back().F);
  CHECK(serial.cells == parallel.cells);

  std::ostringstream log;
  run_scenario(c, log);
  const CsvTable out = read_csv(c.output_dir / "cross_eval.csv");
  CHECK(out.header.front() == "optimized");
  CHECK(out.rows[1][0] == "fgeo");
  CHECK(out.number(1, "fgeo") == serial.cells[1][3]);
  CHECK(fs::exists(c.output_dir / "fc_iterations.csv"));
}

TEST_CASE("educated-guess scenario writes every stage") {
  RunConfig c = small(ScenarioKind::EducatedGuess, scratch("educated"));
  c.functional = FunctionalKind::Purity;
  c.pre_tf = 2.0;
  c.pre_steps = 100;
  c.pre_iterations = 3;
  c.max_iterations = 2;
  std::ostringstream log;
  run_scenario(c, log);
  const CsvTable summary = read_csv(c.output_dir / "summary.csv");
  REQUIRE(summary.rows.size() == 3);
  CHECK(summary.rows[0][0] == "pre");
  CHECK(summary.rows[1][0] == "educated");
  CHECK(summary.rows[2][0] == "baseline");
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(summary.number(i, "F_final") >= summary.number(i, "F_initial"));
  }
  CHECK(read_csv(c.output_dir / "educated_guess.csv").rows.size() == 200);
  CHECK(fs::exists(c.output_dir / "pre_fields.csv"));
  CHECK(fs::exists(c.output_dir / "baseline_iterations.csv"));
}

TEST_CASE("command-line exit codes") {
  const fs::path dir = scratch("cli");
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  const std::string good = write("good.ini", "[grid]\nsteps = 100\n[output]\ndir = " +
                                                 (dir / "out").string() + "\n");
  CHECK(run_cli("validate-config -c " + good) == 0);
  CHECK(run_cli("propagate -c " + good) == 0);
  CHECK(fs::exists(dir / "out" / "report.csv"));
  CHECK(run_cli("propagate -c " + write("bad.ini", "[grid]\nstep = 10\n")) == 1);
  CHECK(run_cli("propagate -c " + (dir / "absent.ini").string()) == 1);
  CHECK(run_cli("frobnicate") == 1);
  const std::string blowup =
      write("blowup.ini", "[model]\ne0_s = 1e300\n[grid]\nsteps = 100\n[output]\ndir = " +
                              (dir / "out2").string() + "\n");
  CHECK(run_cli("propagate -c " + blowup) == 2);
}

}  // TEST_SUITE
