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

// Graph applications: a synthetic graph that tracks all cuts of an
// edge-weighted graph stream, and continual estimation of graph functions
// through their difference sequence.
//
// Vertices are 0-based. Edges are indexed lexicographically over pairs
// (u, v) with u < v: (0,1), (0,2), ..., (0,n-1), (1,2), ...

#ifndef CONTFACT_GRAPH_H_
#define CONTFACT_GRAPH_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "contfact/mechanisms.h"
#include "contfact/privacy.h"

namespace contfact {

// n (n - 1) / 2.
int64_t EdgeCount(int64_t n);
// Lexicographic index of {u, v}; order of u and v does not matter.
int64_t EdgeIndex(int64_t n, int64_t u, int64_t v);
std::pair<int64_t, int64_t> EdgeEndpoints(int64_t n, int64_t index);

struct EdgeUpdate {
  int64_t u;
  int64_t v;
  double weight;
};

// Weighted graph on n vertices given by its edge-weight vector. Released
// graphs may carry negative weights.
class SyntheticGraph {
 public:
  explicit SyntheticGraph(int64_t n);
  SyntheticGraph(int64_t n, std::vector<double> weights);

  int64_t n() const { return n_; }
  std::span<const double> weights() const { return weights_; }
  double Weight(int64_t u, int64_t v) const;
  void AddWeight(int64_t u, int64_t v, double w);

  // Laplacian K = D - W.
  Eigen::MatrixXd Laplacian() const;

  // sum_{u in S, v in P} w(u, v). S and P must be nonempty, disjoint and
  // hold valid, distinct vertices; std::invalid_argument otherwise.
  double CutValue(std::span<const int64_t> s, std::span<const int64_t> p) const;
  // chi_S^T K chi_S, which equals CutValue(S, V \ S).
  double CutValueQuadratic(std::span<const int64_t> s) const;

  // Copy with negative weights set to zero, for presentation.
  SyntheticGraph Clamped() const;

 private:
  int64_t n_;
  std::vector<double> weights_;
};

// V \ S, sorted.
std::vector<int64_t> Complement(int64_t n, std::span<const int64_t> s);

// Releases L_t (R(t) x(t) + z) for the edge-update stream. The workload
// M_count (x) I_{C(n,2)} decouples into one scalar counter per edge; edge e
// uses noise stream e, so each channel is bit-identical to a stand-alone
// FactorizationCounter fed that edge's updates.
class SyntheticGraphMechanism {
 public:
  SyntheticGraphMechanism(int64_t n, const NoisePlan& plan,
                          std::shared_ptr<const FactorCoeffs> coeffs = nullptr);

  // One time step. Updates for the same edge are summed; each edge's total
  // must lie in [0, 1]. Edges without an update receive 0.
  SyntheticGraph Step(std::span<const EdgeUpdate> updates);

  int64_t n() const { return truth_.n(); }
  int64_t t() const { return channels_.front().t(); }
  const SyntheticGraph& true_graph() const { return truth_; }

 private:
  std::vector<FactorizationCounter> channels_;
  SyntheticGraph truth_;
  std::vector<double> step_;
};

// 3 C |S| (1 + ln(t)/pi) sqrt((|S|+|P|) ln(|S|+|P|) ln(6T)).
double CutErrorBound(int64_t t, int64_t T, const PrivacyBudget& budget,
                     int64_t s_size, int64_t p_size);

// A graph function whose difference sequence has declared l2 sensitivity.
class GraphFunction {
 public:
  virtual ~GraphFunction() = default;
  virtual double Evaluate(const SyntheticGraph& graph) const = 0;
  virtual double sensitivity() const = 0;
  virtual std::string name() const = 0;
};

// Number of edges with positive weight.
class EdgeCountFunction : public GraphFunction {
 public:
  double Evaluate(const SyntheticGraph& graph) const override;
  double sensitivity() const override { return 1.0; }
  std::string name() const override { return "edge-count"; }
};

// Number of positive-weight edges at a fixed vertex.
class VertexDegreeFunction : public GraphFunction {
 public:
  explicit VertexDegreeFunction(int64_t vertex) : vertex_(vertex) {}
  double Evaluate(const SyntheticGraph& graph) const override;
  double sensitivity() const override { return 1.0; }
  std::string name() const override { return "degree"; }

 private:
  int64_t vertex_;
};

// Feeds f_t - f_{t-1} into a factorization counter calibrated to the
// function's declared sensitivity.
class GraphFunctionEstimator {
 public:
  GraphFunctionEstimator(int64_t n, const NoisePlan& plan,
                         std::shared_ptr<const GraphFunction> function,
                         std::shared_ptr<const FactorCoeffs> coeffs = nullptr);

  double Step(std::span<const EdgeUpdate> updates);

  int64_t t() const { return counter_.t(); }
  double true_value() const { return previous_; }
  const SyntheticGraph& graph() const { return graph_; }

 private:
  static NoisePlan WithSensitivity(NoisePlan plan, const GraphFunction* f);

  std::shared_ptr<const GraphFunction> function_;
  SyntheticGraph graph_;
  FactorizationCounter counter_;
  double initial_;
  double previous_;
};

// C (1 + ln(T)/pi) Gamma sqrt(ln T).
double GraphFunctionErrorBound(int64_t T, const PrivacyBudget& budget,
                               double gamma);

}  // namespace contfact

#endif  // CONTFACT_GRAPH_H_
