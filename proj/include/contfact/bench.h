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

// Experiment harness: runs repeated trials of one task, records per-step
// error traces against the closed-form bounds, and writes CSV.
//
// Trial k uses seed config.seed + k. Every number written depends only on
// the config, so equal configs produce byte-identical files regardless of
// the thread count.

#ifndef CONTFACT_BENCH_H_
#define CONTFACT_BENCH_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "contfact/factor.h"
#include "contfact/privacy.h"

namespace contfact {

enum class Task {
  kCount,
  kAverage,
  kHistogram,
  kGraphCut,
  kGraphFn,
  kSubstring,
  kEpisode,
  kLdpMedian,
  kBounds,
};

enum class MechanismKind { kFactorization, kBinaryTree };

Task ParseTask(std::string_view name);
std::string_view TaskName(Task task);
MechanismKind ParseMechanism(std::string_view name);
std::string_view MechanismName(MechanismKind kind);

struct ExperimentConfig {
  Task task = Task::kCount;
  MechanismKind mechanism = MechanismKind::kFactorization;
  int64_t T = int64_t{1} << 14;
  double epsilon = 0.8;
  double delta = 1e-10;
  uint64_t seed = 0;
  int trials = 1;
  NoiseMode mode = NoiseMode::kFixedHorizon;
  bool sigma_zero = false;
  int threads = 1;

  // Task parameters.
  AverageCalibration average_calibration = AverageCalibration::kMean;
  int64_t universe = 8;       // histogram
  int64_t vertices = 8;       // graph tasks
  int ell = 2;                // substring, episode
  std::string alphabet = "ab";
  int64_t clients = 10000;    // ldp-median
  int64_t theta_points = 101; // ldp-median
  std::vector<int64_t> T_list;  // bounds; empty means 2^8, 2^10, ..., 2^24
  // Optional data file: one number per line (count, average, ldp-median),
  // `t,u,v,weight` lines (graph tasks), UTF-8 text (substring, episode) or
  // `coord[,sign]` lines (histogram).
  std::string input;

  // Throws std::invalid_argument (or UnsupportedRegimeError) with a
  // message naming the offending field.
  void Validate() const;
  PrivacyBudget Budget() const { return PrivacyBudget(epsilon, delta); }
  // Ordered key/value pairs echoed into every CSV header.
  std::vector<std::pair<std::string, std::string>> Describe() const;
};

struct TraceRow {
  int64_t t = 0;
  double true_value = 0.0;
  double released = 0.0;
  double abs_error = 0.0;
  double bound_exact = 0.0;
  double bound_analytic = 0.0;
};
using ErrorTrace = std::vector<TraceRow>;

// One point of the local median learner's risk curve.
struct LdpRow {
  double theta = 0.0;
  double g = 0.0;
  double f = 0.0;
  double median = 0.0;  // E|theta - d|
  double abs_error = 0.0;
  double bound = 0.0;
};

struct TrialOutput {
  ErrorTrace trace;
  std::vector<LdpRow> ldp;  // kLdpMedian only
};

// One trial of a trace task (everything except kBounds). Vector-valued
// tasks report, per step, the coordinate (bin, cut, query word) with the
// largest absolute error. For kLdpMedian the trace has one row per theta,
// t = 1..theta_points, true_value = E|theta - d| (population loss for the
// built-in uniform data, empirical loss for an input file) and released =
// f(x_hat, theta).
TrialOutput RunTrial(const ExperimentConfig& config, int trial);

struct SummaryRow {
  int64_t t = 0;
  double mean_abs_error = 0.0;
  double max_abs_error = 0.0;
  double bound_exact = 0.0;
  double bound_analytic = 0.0;
};

struct ExperimentSummary {
  int trials = 0;
  std::vector<SummaryRow> rows;
  // Fraction of trials whose error stays within the bound at every row.
  double fraction_within_exact = 0.0;
  double fraction_within_analytic = 0.0;
};

// Called once per trial, in trial order.
using TraceSink = std::function<void(int trial, const TrialOutput& output)>;

ExperimentSummary RunExperiment(const ExperimentConfig& config,
                                const TraceSink& sink = {});

// Mathias bound table for config.T_list.
std::vector<BoundReport> BoundsTable(std::span<const int64_t> T_list);
std::vector<int64_t> DefaultBoundsTList();

// Round-tripping text for a double: 17 significant digits.
std::string FormatDouble(double value);

void WriteTraceCsv(std::ostream& out, const ExperimentConfig& config,
                   const ErrorTrace& trace);
void WriteSummaryCsv(std::ostream& out, const ExperimentConfig& config,
                     const ExperimentSummary& summary);
void WriteLdpCsv(std::ostream& out, const ExperimentConfig& config,
                 std::span<const LdpRow> rows);
void WriteBoundsCsv(std::ostream& out, const ExperimentConfig& config,
                    std::span<const BoundReport> table);

// Parses a trace CSV, skipping `#` lines. Throws std::invalid_argument on
// a header or field mismatch.
ErrorTrace ParseTraceCsv(std::istream& in);

// Runs the configured task and writes its files into `out_dir` (created if
// needed): trial_NNNN.csv per trial (risk-curve schema for kLdpMedian)
// plus summary.csv, or bounds.csv for kBounds. Returns the paths written.
std::vector<std::string> RunAndWrite(const ExperimentConfig& config,
                                     const std::string& out_dir);

}  // namespace contfact

#endif  // CONTFACT_BENCH_H_
