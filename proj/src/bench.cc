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

#include "contfact/bench.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "contfact/graph.h"
#include "contfact/local_ldp.h"
#include "contfact/mechanisms.h"
#include "contfact/sequences.h"

namespace contfact {

namespace {

constexpr const char* kTraceHeader =
    "t,true,released,abs_error,bound_exact,bound_analytic";
constexpr const char* kSummaryHeader =
    "t,mean_abs_error,max_abs_error,bound_exact,bound_analytic";
constexpr const char* kLdpHeader = "theta,g,f,median,abs_error,bound";
constexpr const char* kBoundsHeader =
    "T,ours_upper,gamma_hat,mathias_lower,mathias_upper,gap_upper,gap_lower";

// Fixed seed for synthetic letter streams, so every trial sees the same
// text and only the noise varies.
constexpr uint64_t kTextSeed = 0x7465787473656564ULL;

struct TaskInfo {
  Task task;
  std::string_view name;
};

constexpr TaskInfo kTasks[] = {
    {Task::kCount, "count"},         {Task::kAverage, "average"},
    {Task::kHistogram, "histogram"}, {Task::kGraphCut, "graph-cut"},
    {Task::kGraphFn, "graph-fn"},    {Task::kSubstring, "substring"},
    {Task::kEpisode, "episode"},     {Task::kLdpMedian, "ldp-median"},
    {Task::kBounds, "bounds"},
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::vector<std::string> NonEmptyLines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> SplitCommas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  return out;
}

double ParseNumber(const std::string& s) {
  size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

int64_t ParseInteger(const std::string& s) {
  int64_t v = 0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("not an integer: '" + s + "'");
  }
  return v;
}

std::vector<double> NumberStream(const ExperimentConfig& c, int64_t n) {
  if (c.input.empty()) return std::vector<double>(n, 1.0);
  std::vector<double> out;
  for (const std::string& line : NonEmptyLines(ReadFile(c.input))) {
    out.push_back(ParseNumber(line));
  }
  if (static_cast<int64_t>(out.size()) < n) {
    throw std::invalid_argument("input holds " + std::to_string(out.size()) +
                                " values, need " + std::to_string(n));
  }
  out.resize(n);
  return out;
}

struct HistUpdate {
  int64_t coord;
  int sign;
};

std::vector<HistUpdate> HistogramStream(const ExperimentConfig& c) {
  std::vector<HistUpdate> out;
  if (c.input.empty()) {
    for (int64_t t = 0; t < c.T; ++t) out.push_back({t % c.universe, +1});
    return out;
  }
  for (const std::string& line : NonEmptyLines(ReadFile(c.input))) {
    const std::vector<std::string> f = SplitCommas(line);
    if (f.empty() || f.size() > 2) {
      throw std::invalid_argument("histogram line must be coord[,sign]");
    }
    const int sign = f.size() == 2 ? static_cast<int>(ParseInteger(f[1])) : 1;
    out.push_back({ParseInteger(f[0]), sign});
  }
  if (static_cast<int64_t>(out.size()) < c.T) {
    throw std::invalid_argument("histogram input shorter than T");
  }
  out.resize(c.T);
  return out;
}

std::vector<std::vector<EdgeUpdate>> GraphStream(const ExperimentConfig& c) {
  std::vector<std::vector<EdgeUpdate>> steps(c.T);
  const int64_t m = EdgeCount(c.vertices);
  if (c.input.empty()) {
    for (int64_t t = 0; t < c.T; ++t) {
      const auto [u, v] = EdgeEndpoints(c.vertices, t % m);
      steps[t].push_back({u, v, 1.0});
    }
    return steps;
  }
  for (const std::string& line : NonEmptyLines(ReadFile(c.input))) {
    const std::vector<std::string> f = SplitCommas(line);
    if (f.size() != 4) throw std::invalid_argument("graph line must be t,u,v,weight");
    const int64_t t = ParseInteger(f[0]);
    if (t < 1 || t > c.T) throw std::invalid_argument("graph update step outside [1, T]");
    steps[t - 1].push_back(
        {ParseInteger(f[1]), ParseInteger(f[2]), ParseNumber(f[3])});
  }
  return steps;
}

std::vector<int> LetterStream(const ExperimentConfig& c,
                              const Alphabet& alphabet) {
  if (!c.input.empty()) {
    std::string text = ReadFile(c.input);
    text.erase(std::remove(text.begin(), text.end(), '\n'), text.end());
    text.erase(std::remove(text.begin(), text.end(), '\r'), text.end());
    std::vector<int> letters = alphabet.Encode(text);
    if (static_cast<int64_t>(letters.size()) < c.T) {
      throw std::invalid_argument("letter input shorter than T");
    }
    letters.resize(c.T);
    return letters;
  }
  std::mt19937_64 gen(kTextSeed);
  std::vector<int> letters(c.T);
  for (int& l : letters) l = static_cast<int>(gen() % alphabet.size());
  return letters;
}

double SqrtLog6(double x) { return std::sqrt(std::log(6.0 * x)); }

double LogOverPi(double x) { return std::log(x) / std::numbers::pi; }

// Shared, read-only state built once per experiment.
struct Context {
  ExperimentConfig config;
  PrivacyBudget budget;
  double c_const;
  std::shared_ptr<const FactorCoeffs> coeffs;
  std::shared_ptr<const LowerTriFactor> avg_factor;
  std::vector<double> numbers;
  std::vector<HistUpdate> hist;
  std::vector<std::vector<EdgeUpdate>> graph;
  std::vector<int> letters;
  std::vector<double> ldp_data;  // from an input file; empty means uniform

  explicit Context(const ExperimentConfig& c)
      : config(c), budget(c.Budget()), c_const(GaussianConstant(budget)) {
    c.Validate();
    switch (c.task) {
      case Task::kCount:
      case Task::kAverage:
        numbers = NumberStream(c, c.T);
        break;
      case Task::kHistogram:
        hist = HistogramStream(c);
        break;
      case Task::kGraphCut:
      case Task::kGraphFn:
        graph = GraphStream(c);
        break;
      case Task::kSubstring:
      case Task::kEpisode:
        letters = LetterStream(c, Alphabet(c.alphabet));
        break;
      case Task::kLdpMedian:
        if (!c.input.empty()) {
          for (const std::string& line : NonEmptyLines(ReadFile(c.input))) {
            ldp_data.push_back(ParseNumber(line));
          }
          if (ldp_data.empty()) throw std::invalid_argument("empty LDP input");
        }
        break;
      case Task::kBounds:
        break;
    }
    if (c.task == Task::kAverage) {
      avg_factor = std::make_shared<const LowerTriFactor>(AveragingFactor(c.T));
    } else if (c.task != Task::kBounds && c.task != Task::kLdpMedian) {
      coeffs = std::make_shared<const FactorCoeffs>(FactorCoeffs::Build(c.T));
    }
  }

  NoisePlan Plan(int trial) const {
    return NoisePlan{.budget = budget,
                     .mode = config.mode,
                     .horizon = config.T,
                     .seed = config.seed + static_cast<uint64_t>(trial),
                     .dry_run = config.sigma_zero};
  }
};

void Push(ErrorTrace& trace, int64_t t, double truth, double released,
          double bound_exact, double bound_analytic) {
  trace.push_back({t, truth, released, std::abs(released - truth),
                   bound_exact, bound_analytic});
}

ErrorTrace CountTrace(const Context& ctx, int trial) {
  const ExperimentConfig& c = ctx.config;
  NoisePlan plan = ctx.Plan(trial);
  ErrorTrace trace;
  trace.reserve(c.T);
  if (c.mechanism == MechanismKind::kBinaryTree) {
    BinaryTreeCounter tree(plan, 0, InputDomain::kUnitInterval);
    const double scale = ctx.c_const * std::sqrt(tree.height()) *
                         SqrtLog6(static_cast<double>(c.T));
    for (int64_t t = 1; t <= c.T; ++t) {
      const double a = tree.Step(ctx.numbers[t - 1]);
      const double b =
          scale * std::sqrt(std::popcount(static_cast<uint64_t>(t)));
      Push(trace, t, tree.true_sum(), a, b, b);
    }
    return trace;
  }
  FactorizationCounter counter(plan, ctx.coeffs, 0, InputDomain::kUnitInterval);
  const CountingErrorBounds bounds(ctx.coeffs, ctx.budget, 1.0);
  for (int64_t t = 1; t <= c.T; ++t) {
    const double a = counter.Step(ctx.numbers[t - 1]);
    Push(trace, t, counter.true_sum(), a, bounds.Exact(t), bounds.Analytic(t));
  }
  return trace;
}

ErrorTrace AverageTrace(const Context& ctx, int trial) {
  const ExperimentConfig& c = ctx.config;
  NoisePlan plan = ctx.Plan(trial);
  plan.sensitivity = Sensitivity::Average(c.average_calibration);
  RunningAverage avg(plan, ctx.avg_factor, 0, InputDomain::kUnitInterval);
  const AverageErrorBounds bounds(ctx.avg_factor, ctx.budget,
                                  c.average_calibration);
  ErrorTrace trace;
  trace.reserve(c.T);
  for (int64_t t = 1; t <= c.T; ++t) {
    const double a = avg.Step(ctx.numbers[t - 1]);
    Push(trace, t, avg.true_mean(), a, bounds.Exact(t), bounds.Analytic(t));
  }
  return trace;
}

ErrorTrace HistogramTrace(const Context& ctx, int trial) {
  const ExperimentConfig& c = ctx.config;
  NoisePlan plan = ctx.Plan(trial);
  plan.sensitivity = Sensitivity::Histogram();
  ContinualHistogram hist(c.universe, plan, ctx.coeffs);
  const double log_term = SqrtLog6(static_cast<double>(c.T));
  ErrorTrace trace;
  trace.reserve(c.T);
  for (int64_t t = 1; t <= c.T; ++t) {
    const HistUpdate& up = ctx.hist[t - 1];
    const std::vector<double> out = hist.Step(up.coord, up.sign);
    int64_t worst = 0;
    double worst_err = -1.0;
    for (int64_t j = 0; j < c.universe; ++j) {
      const double err =
          std::abs(out[j] - static_cast<double>(hist.true_counts()[j]));
      if (err > worst_err) {
        worst_err = err;
        worst = j;
      }
    }
    const double exact = ctx.c_const * ctx.coeffs->SquaredRowNorm(t) * log_term;
    const double analytic =
        t == 1 ? ctx.c_const * log_term
               : ctx.c_const * (1.0 + LogOverPi(static_cast<double>(t - 1))) *
                     log_term;
    Push(trace, t, static_cast<double>(hist.true_counts()[worst]), out[worst],
         exact, analytic);
  }
  return trace;
}

double VertexCut(const SyntheticGraph& g, int64_t v) {
  double total = 0.0;
  for (int64_t u = 0; u < g.n(); ++u) {
    if (u != v) total += g.Weight(u, v);
  }
  return total;
}

ErrorTrace GraphCutTrace(const Context& ctx, int trial) {
  const ExperimentConfig& c = ctx.config;
  SyntheticGraphMechanism mech(c.vertices, ctx.Plan(trial), ctx.coeffs);
  ErrorTrace trace;
  trace.reserve(c.T);
  for (int64_t t = 1; t <= c.T; ++t) {
    const SyntheticGraph released = mech.Step(ctx.graph[t - 1]);
    double worst_err = -1.0;
    double truth = 0.0;
    double value = 0.0;
    for (int64_t v = 0; v < c.vertices; ++v) {
      const double r = VertexCut(released, v);
      const double x = VertexCut(mech.true_graph(), v);
      if (std::abs(r - x) > worst_err) {
        worst_err = std::abs(r - x);
        truth = x;
        value = r;
      }
    }
    const double b = CutErrorBound(t, c.T, ctx.budget, 1, c.vertices - 1);
    Push(trace, t, truth, value, b, b);
  }
  return trace;
}

ErrorTrace GraphFnTrace(const Context& ctx, int trial) {
  const ExperimentConfig& c = ctx.config;
  GraphFunctionEstimator est(c.vertices, ctx.Plan(trial),
                             std::make_shared<EdgeCountFunction>(), ctx.coeffs);
  const double b = GraphFunctionErrorBound(c.T, ctx.budget, 1.0);
  ErrorTrace trace;
  trace.reserve(c.T);
  for (int64_t t = 1; t <= c.T; ++t) {
    const double a = est.Step(ctx.graph[t - 1]);
    Push(trace, t, est.true_value(), a, b, b);
  }
  return trace;
}

template <typename Counter>
ErrorTrace SequenceTrace(const Context& ctx, Counter& counter,
                         double sensitivity, double analytic_scale) {
  const ExperimentConfig& c = ctx.config;
  const double dim = static_cast<double>(counter.index().dim());
  const double exact_scale = ctx.c_const * sensitivity *
                             SqrtLog6(static_cast<double>(c.T) * dim);
  ErrorTrace trace;
  trace.reserve(c.T);
  for (int64_t t = 1; t <= c.T; ++t) {
    const std::vector<double> out = counter.Step(ctx.letters[t - 1]);
    const auto truth = counter.true_counts();
    size_t worst = 0;
    double worst_err = -1.0;
    for (size_t q = 0; q < out.size(); ++q) {
      const double err = std::abs(out[q] - static_cast<double>(truth[q]));
      if (err > worst_err) {
        worst_err = err;
        worst = q;
      }
    }
    Push(trace, t, static_cast<double>(truth[worst]), out[worst],
         exact_scale * ctx.coeffs->SquaredRowNorm(t), analytic_scale);
  }
  return trace;
}

ErrorTrace SubstringTrace(const Context& ctx, int trial) {
  const ExperimentConfig& c = ctx.config;
  const Alphabet alphabet(c.alphabet);
  SubstringCounter counter(alphabet, c.ell, ctx.Plan(trial), kDefaultQueryCap,
                           ctx.coeffs);
  const double k = alphabet.size();
  const double ell = c.ell;
  const double T = static_cast<double>(c.T);
  const double analytic = ctx.c_const * (1.0 + LogOverPi(T)) * ell *
                          SqrtLog6(T * std::pow(k, ell));
  return SequenceTrace(ctx, counter, Sensitivity::Substring(c.ell).At(1),
                       analytic);
}

ErrorTrace EpisodeTrace(const Context& ctx, int trial) {
  const ExperimentConfig& c = ctx.config;
  const Alphabet alphabet(c.alphabet);
  EpisodeCounter counter(alphabet, c.ell, ctx.Plan(trial), kDefaultQueryCap,
                         ctx.coeffs);
  const double k = alphabet.size();
  const double ell = c.ell;
  const double T = static_cast<double>(c.T);
  const double analytic =
      2.0 * ctx.c_const * (1.0 + LogOverPi(T)) * ell *
      std::sqrt(std::pow(k, ell - 1.0) * ell *
                std::log(6.0 * T * std::pow(k, ell)));
  return SequenceTrace(
      ctx, counter, Sensitivity::Episode(alphabet.size(), c.ell).At(1),
      analytic);
}

TrialOutput LdpTrial(const Context& ctx, int trial) {
  const ExperimentConfig& c = ctx.config;
  const bool uniform = ctx.ldp_data.empty();
  std::vector<double> data = ctx.ldp_data;
  if (uniform) {
    // Data draws use their own generator, independent of client noise.
    std::mt19937_64 gen(c.seed + static_cast<uint64_t>(trial));
    data.resize(c.clients);
    for (double& d : data) d = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  }
  const int64_t n = static_cast<int64_t>(data.size());
  ClientConfig cc{Grid(n, c.epsilon), ctx.budget,
                  c.seed + static_cast<uint64_t>(trial), c.sigma_zero};
  const auto coeffs =
      std::make_shared<const FactorCoeffs>(FactorCoeffs::Build(cc.grid.w()));
  std::vector<ClientMessage> messages;
  messages.reserve(n);
  for (int64_t i = 0; i < n; ++i) {
    messages.push_back(
        ClientEncode(data[i], cc, static_cast<uint64_t>(i), coeffs));
  }
  const AggregateEstimate est = ServerAggregate(messages, cc.grid);
  const double bound = LocalLearningBound(n, ctx.budget);

  TrialOutput out;
  for (int64_t p = 0; p < c.theta_points; ++p) {
    const double theta =
        static_cast<double>(p) / static_cast<double>(c.theta_points - 1);
    const RiskPoint r = RiskCurve(est, theta);
    const double median =
        uniform ? UniformMedianLoss(theta) : EmpiricalMedianLoss(data, theta);
    const double err = std::abs(r.f - median);
    out.ldp.push_back({theta, r.g, r.f, median, err, bound});
    out.trace.push_back({p + 1, median, r.f, err, bound, bound});
  }
  return out;
}

TrialOutput RunTrialWith(const Context& ctx, int trial) {
  TrialOutput out;
  switch (ctx.config.task) {
    case Task::kCount:
      out.trace = CountTrace(ctx, trial);
      break;
    case Task::kAverage:
      out.trace = AverageTrace(ctx, trial);
      break;
    case Task::kHistogram:
      out.trace = HistogramTrace(ctx, trial);
      break;
    case Task::kGraphCut:
      out.trace = GraphCutTrace(ctx, trial);
      break;
    case Task::kGraphFn:
      out.trace = GraphFnTrace(ctx, trial);
      break;
    case Task::kSubstring:
      out.trace = SubstringTrace(ctx, trial);
      break;
    case Task::kEpisode:
      out.trace = EpisodeTrace(ctx, trial);
      break;
    case Task::kLdpMedian:
      out = LdpTrial(ctx, trial);
      break;
    case Task::kBounds:
      throw std::invalid_argument("the bounds task has no trials");
  }
  return out;
}

void WriteComments(std::ostream& out, const ExperimentConfig& config) {
  for (const auto& [key, value] : config.Describe()) {
    out << "# " << key << '=' << value << '\n';
  }
}

std::string JoinTList(std::span<const int64_t> list) {
  std::string s;
  for (size_t i = 0; i < list.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(list[i]);
  }
  return s;
}

}  // namespace

Task ParseTask(std::string_view name) {
  for (const TaskInfo& info : kTasks) {
    if (info.name == name) return info.task;
  }
  throw std::invalid_argument("unknown task '" + std::string(name) + "'");
}

std::string_view TaskName(Task task) {
  for (const TaskInfo& info : kTasks) {
    if (info.task == task) return info.name;
  }
  return "?";
}

MechanismKind ParseMechanism(std::string_view name) {
  if (name == "factorization") return MechanismKind::kFactorization;
  if (name == "binary-tree") return MechanismKind::kBinaryTree;
  throw std::invalid_argument("unknown mechanism '" + std::string(name) +
                              "' (expected factorization or binary-tree)");
}

std::string_view MechanismName(MechanismKind kind) {
  return kind == MechanismKind::kFactorization ? "factorization"
                                               : "binary-tree";
}

void ExperimentConfig::Validate() const {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("invalid config: " + msg);
  };
  if (T < 1) fail("T must be >= 1");
  if (trials < 1) fail("trials must be >= 1");
  if (threads < 1) fail("threads must be >= 1");
  Budget();
  if (mechanism == MechanismKind::kBinaryTree && task != Task::kCount) {
    fail("the binary-tree mechanism is only available for the count task");
  }
  switch (task) {
    case Task::kHistogram:
      if (universe < 1) fail("universe must be >= 1");
      break;
    case Task::kGraphCut:
    case Task::kGraphFn:
      if (vertices < 2) fail("vertices must be >= 2");
      break;
    case Task::kSubstring:
    case Task::kEpisode: {
      if (ell < 1) fail("ell must be >= 1");
      const Alphabet a(alphabet);
      QueryIndex(a.size(), ell);
      break;
    }
    case Task::kLdpMedian:
      if (clients < 1) fail("clients must be >= 1");
      if (theta_points < 2) fail("theta points must be >= 2");
      break;
    case Task::kBounds:
      for (int64_t v : T_list) {
        if (v < 2) fail("every T in the bounds list must be >= 2");
      }
      break;
    default:
      break;
  }
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::Describe()
    const {
  std::vector<std::pair<std::string, std::string>> kv = {
      {"task", std::string(TaskName(task))},
      {"mechanism", std::string(MechanismName(mechanism))},
      {"T", std::to_string(T)},
      {"epsilon", FormatDouble(epsilon)},
      {"delta", FormatDouble(delta)},
      {"seed", std::to_string(seed)},
      {"trials", std::to_string(trials)},
      {"mode", std::string(NoiseModeName(mode))},
      {"sigma_zero", sigma_zero ? "true" : "false"},
  };
  switch (task) {
    case Task::kAverage:
      kv.emplace_back("average_sensitivity",
                      std::string(AverageCalibrationName(average_calibration)));
      break;
    case Task::kHistogram:
      kv.emplace_back("universe", std::to_string(universe));
      break;
    case Task::kGraphCut:
    case Task::kGraphFn:
      kv.emplace_back("vertices", std::to_string(vertices));
      break;
    case Task::kSubstring:
    case Task::kEpisode:
      kv.emplace_back("ell", std::to_string(ell));
      kv.emplace_back("alphabet", alphabet);
      break;
    case Task::kLdpMedian:
      kv.emplace_back("clients", std::to_string(clients));
      kv.emplace_back("theta_points", std::to_string(theta_points));
      break;
    case Task::kBounds:
      kv.emplace_back("T_list", JoinTList(T_list.empty() ? DefaultBoundsTList()
                                                          : T_list));
      break;
    default:
      break;
  }
  if (!input.empty()) kv.emplace_back("input", input);
  return kv;
}

TrialOutput RunTrial(const ExperimentConfig& config, int trial) {
  const Context ctx(config);
  return RunTrialWith(ctx, trial);
}

ExperimentSummary RunExperiment(const ExperimentConfig& config,
                                const TraceSink& sink) {
  const Context ctx(config);
  ExperimentSummary summary;
  summary.trials = config.trials;
  int within_exact = 0;
  int within_analytic = 0;
  // Batches of `threads` trials run concurrently; folding happens in trial
  // order so the floating-point sums do not depend on scheduling.
  for (int first = 0; first < config.trials; first += config.threads) {
    const int count = std::min(config.threads, config.trials - first);
    std::vector<TrialOutput> batch(count);
    std::vector<std::exception_ptr> errors(count);
    {
      std::vector<std::jthread> workers;
      for (int k = 1; k < count; ++k) {
        workers.emplace_back([&, k] {
          try {
            batch[k] = RunTrialWith(ctx, first + k);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        });
      }
      try {
        batch[0] = RunTrialWith(ctx, first);
      } catch (...) {
        errors[0] = std::current_exception();
      }
    }
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (int k = 0; k < count; ++k) {
      const ErrorTrace& trace = batch[k].trace;
      if (summary.rows.empty()) {
        summary.rows.resize(trace.size());
        for (size_t i = 0; i < trace.size(); ++i) {
          summary.rows[i].t = trace[i].t;
          summary.rows[i].bound_exact = trace[i].bound_exact;
          summary.rows[i].bound_analytic = trace[i].bound_analytic;
        }
      }
      bool ok_exact = true;
      bool ok_analytic = true;
      for (size_t i = 0; i < trace.size(); ++i) {
        SummaryRow& row = summary.rows[i];
        row.mean_abs_error += trace[i].abs_error;
        row.max_abs_error = std::max(row.max_abs_error, trace[i].abs_error);
        ok_exact = ok_exact && trace[i].abs_error <= trace[i].bound_exact;
        ok_analytic =
            ok_analytic && trace[i].abs_error <= trace[i].bound_analytic;
      }
      within_exact += ok_exact;
      within_analytic += ok_analytic;
      if (sink) sink(first + k, batch[k]);
    }
  }
  for (SummaryRow& row : summary.rows) row.mean_abs_error /= config.trials;
  summary.fraction_within_exact =
      static_cast<double>(within_exact) / config.trials;
  summary.fraction_within_analytic =
      static_cast<double>(within_analytic) / config.trials;
  return summary;
}

std::vector<int64_t> DefaultBoundsTList() {
  std::vector<int64_t> out;
  for (int e = 8; e <= 24; e += 2) out.push_back(int64_t{1} << e);
  return out;
}

std::vector<BoundReport> BoundsTable(std::span<const int64_t> T_list) {
  std::vector<BoundReport> out;
  out.reserve(T_list.size());
  for (int64_t T : T_list) out.push_back(MathiasBounds(T));
  return out;
}

std::string FormatDouble(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void WriteTraceCsv(std::ostream& out, const ExperimentConfig& config,
                   const ErrorTrace& trace) {
  WriteComments(out, config);
  out << kTraceHeader << '\n';
  for (const TraceRow& r : trace) {
    out << r.t << ',' << FormatDouble(r.true_value) << ','
        << FormatDouble(r.released) << ',' << FormatDouble(r.abs_error) << ','
        << FormatDouble(r.bound_exact) << ',' << FormatDouble(r.bound_analytic)
        << '\n';
  }
}

void WriteSummaryCsv(std::ostream& out, const ExperimentConfig& config,
                     const ExperimentSummary& summary) {
  WriteComments(out, config);
  out << "# fraction_within_exact="
      << FormatDouble(summary.fraction_within_exact) << '\n';
  out << "# fraction_within_analytic="
      << FormatDouble(summary.fraction_within_analytic) << '\n';
  out << kSummaryHeader << '\n';
  for (const SummaryRow& r : summary.rows) {
    out << r.t << ',' << FormatDouble(r.mean_abs_error) << ','
        << FormatDouble(r.max_abs_error) << ',' << FormatDouble(r.bound_exact)
        << ',' << FormatDouble(r.bound_analytic) << '\n';
  }
}

void WriteLdpCsv(std::ostream& out, const ExperimentConfig& config,
                 std::span<const LdpRow> rows) {
  WriteComments(out, config);
  out << kLdpHeader << '\n';
  for (const LdpRow& r : rows) {
    out << FormatDouble(r.theta) << ',' << FormatDouble(r.g) << ','
        << FormatDouble(r.f) << ',' << FormatDouble(r.median) << ','
        << FormatDouble(r.abs_error) << ',' << FormatDouble(r.bound) << '\n';
  }
}

void WriteBoundsCsv(std::ostream& out, const ExperimentConfig& config,
                    std::span<const BoundReport> table) {
  WriteComments(out, config);
  out << kBoundsHeader << '\n';
  for (const BoundReport& r : table) {
    out << r.T << ',' << FormatDouble(r.ours_upper) << ','
        << FormatDouble(r.gamma_hat) << ',' << FormatDouble(r.mathias_lower)
        << ',' << FormatDouble(r.mathias_upper) << ','
        << FormatDouble(r.ours_upper - r.mathias_upper) << ','
        << FormatDouble(r.ours_upper - r.mathias_lower) << '\n';
  }
}

ErrorTrace ParseTraceCsv(std::istream& in) {
  ErrorTrace trace;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != kTraceHeader) {
        throw std::invalid_argument("unexpected trace header: " + line);
      }
      header = true;
      continue;
    }
    const std::vector<std::string> f = SplitCommas(line);
    if (f.size() != 6) {
      throw std::invalid_argument("trace row needs 6 fields: " + line);
    }
    trace.push_back({ParseInteger(f[0]), ParseNumber(f[1]), ParseNumber(f[2]),
                     ParseNumber(f[3]), ParseNumber(f[4]), ParseNumber(f[5])});
  }
  if (!header) throw std::invalid_argument("trace header missing");
  return trace;
}

std::vector<std::string> RunAndWrite(const ExperimentConfig& config,
                                     const std::string& out_dir) {
  config.Validate();
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;
  auto open = [&](const std::string& name) {
    const std::string path = (fs::path(out_dir) / name).string();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    written.push_back(path);
    return out;
  };
  if (config.task == Task::kBounds) {
    const std::vector<int64_t> list =
        config.T_list.empty() ? DefaultBoundsTList() : config.T_list;
    std::ofstream out = open("bounds.csv");
    WriteBoundsCsv(out, config, BoundsTable(list));
    return written;
  }
  const ExperimentSummary summary =
      RunExperiment(config, [&](int trial, const TrialOutput& output) {
        char name[32];
        std::snprintf(name, sizeof(name), "trial_%04d.csv", trial);
        std::ofstream out = open(name);
        if (config.task == Task::kLdpMedian) {
          WriteLdpCsv(out, config, output.ldp);
        } else {
          WriteTraceCsv(out, config, output.trace);
        }
      });
  std::ofstream out = open("summary.csv");
  WriteSummaryCsv(out, config, summary);
  return written;
}

}  // namespace contfact
