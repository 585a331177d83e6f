// Copyright 2026 The opalg Authors
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

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "opalg/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical workbench for finite-dimensional operator algebras"};
  std::string command, problem_path, out_path;
  opalg::RunOptions opts;
  std::uint64_t seed = 0;
  double tol = 0.0;
  int iter_cap = 0, levels = 0;
  bool exhaustive = false, greedy = false;

  app.add_option("command", command, "Command to run")->required()->check(CLI::IsMember(opalg::command_names()));
  app.add_option("problem", problem_path, "Problem file (JSON)")->required();
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides the file)");
  auto* tol_opt = app.add_option("--tol", tol, "Certification tolerance cert_tol")->check(CLI::PositiveNumber);
  auto* cap_opt = app.add_option("--iter-cap", iter_cap, "Feasibility solver iteration cap")->check(CLI::PositiveNumber);
  auto* ex_flag = app.add_flag("--exhaustive", exhaustive, "Exhaustive Shilov ideal search (default up to 12 blocks)");
  auto* gr_flag = app.add_flag("--greedy", greedy, "Greedy Shilov ideal search");
  ex_flag->excludes(gr_flag);
  auto* lv_opt = app.add_option("--levels", levels, "Deepest amplification level for falsifiers")
                     ->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "Write the machine-readable report here");
  app.add_flag("--embed", opts.embed, "Embed witnesses, feasible objects and bases in the report");
  app.add_flag("--timing", opts.timing, "Record wall time in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  if (*seed_opt) opts.seed = seed;
  if (*tol_opt) opts.cert_tol = tol;
  if (*cap_opt) opts.iter_cap = iter_cap;
  if (*lv_opt) opts.levels = levels;
  if (exhaustive) opts.greedy = false;
  if (greedy) opts.greedy = true;

  try {
    opalg::ProblemFile problem = opalg::load_problem(problem_path);
    opalg::RunResult r = opalg::run(command, problem, opts);
    std::cout << r.text;
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "error: cannot write report to '" << out_path << "'\n";
        return 1;
      }
      out << r.report.dump(2) << "\n";
    }
    return r.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
