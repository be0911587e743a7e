// Copyright 2026 The Contfact Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// contfact: run continual-release experiments and write CSV.
//
//   contfact --task count --T 16384 --trials 50 --out runs/count
//   contfact --task bounds --T-list 256,1024,4096
//
// Without --out the summary (or bounds table) goes to stdout.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "contfact/bench.h"

namespace {

std::string Choices(std::initializer_list<const char*> names) {
  std::string s;
  for (const char* n : names) {
    if (!s.empty()) s += ", ";
    s += n;
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private continual counting experiments"};
  app.option_defaults()->always_capture_default();

  contfact::ExperimentConfig cfg;
  std::string task = "count";
  std::string mechanism = "factorization";
  std::string mode = "horizon";
  std::string average_sensitivity = "mean";
  std::string out_dir;

  app.add_option("--task", task,
                 "Task: " + Choices({"count", "average", "histogram",
                                     "graph-cut", "graph-fn", "substring",
                                     "episode", "ldp-median", "bounds"}));
  app.add_option("--mechanism", mechanism, "factorization or binary-tree");
  app.add_option("--T", cfg.T, "Stream length");
  app.add_option("--epsilon", cfg.epsilon, "Privacy epsilon in (0, 1)");
  app.add_option("--delta", cfg.delta, "Privacy delta in (0, 1)");
  app.add_option("--seed", cfg.seed, "Base seed; trial k uses seed + k")
      ->envname("CONTFACT_SEED");
  app.add_option("--trials", cfg.trials, "Independent trials");
  app.add_option("--mode", mode,
                 "Noise scale: horizon (fixed ||R_T||) or per-step (||R_t||)");
  app.add_flag("--sigma-zero", cfg.sigma_zero, "Disable noise (dry run)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--threads", cfg.threads, "Trials run concurrently");
  app.add_option("--average-sensitivity", average_sensitivity,
                 "Average noise calibration: mean (1/t) or column (1)");
  app.add_option("--universe", cfg.universe, "Histogram universe size");
  app.add_option("--vertices", cfg.vertices, "Graph vertex count");
  app.add_option("--ell", cfg.ell, "Maximum substring or episode length");
  app.add_option("--alphabet", cfg.alphabet, "Letters, one per UTF-8 symbol");
  app.add_option("--clients", cfg.clients, "LDP client count");
  app.add_option("--theta-points", cfg.theta_points, "LDP theta grid size");
  app.add_option("--T-list", cfg.T_list, "Horizons for the bounds table")
      ->delimiter(',');
  app.add_option("--input", cfg.input, "Optional data file for the task");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    cfg.task = contfact::ParseTask(task);
    cfg.mechanism = contfact::ParseMechanism(mechanism);
    cfg.mode = contfact::ParseNoiseMode(mode);
    cfg.average_calibration =
        contfact::ParseAverageCalibration(average_sensitivity);
    cfg.Validate();

    if (!out_dir.empty()) {
      for (const std::string& path : contfact::RunAndWrite(cfg, out_dir)) {
        std::cerr << "wrote " << path << '\n';
      }
      return 0;
    }
    if (cfg.task == contfact::Task::kBounds) {
      const std::vector<int64_t> list =
          cfg.T_list.empty() ? contfact::DefaultBoundsTList() : cfg.T_list;
      contfact::WriteBoundsCsv(std::cout, cfg, contfact::BoundsTable(list));
    } else {
      contfact::WriteSummaryCsv(std::cout, cfg, contfact::RunExperiment(cfg));
    }
  } catch (const std::exception& e) {
    std::cerr << "contfact: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
