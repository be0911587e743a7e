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

#include "contfact/graph.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace contfact {

namespace {

void CheckVertex(int64_t n, int64_t v) {
  if (v < 0 || v >= n) {
    throw std::invalid_argument("vertex " + std::to_string(v) +
                                " outside [0, " + std::to_string(n) + ")");
  }
}

std::vector<char> Membership(int64_t n, std::span<const int64_t> set,
                             const char* name) {
  if (set.empty()) {
    throw std::invalid_argument(std::string(name) + " must be nonempty");
  }
  std::vector<char> in(n, 0);
  for (int64_t v : set) {
    CheckVertex(n, v);
    if (in[v]) {
      throw std::invalid_argument(std::string(name) + " repeats vertex " +
                                  std::to_string(v));
    }
    in[v] = 1;
  }
  return in;
}

}  // namespace

int64_t EdgeCount(int64_t n) { return n * (n - 1) / 2; }

int64_t EdgeIndex(int64_t n, int64_t u, int64_t v) {
  CheckVertex(n, u);
  CheckVertex(n, v);
  if (u == v) throw std::invalid_argument("self loops are not edges");
  if (u > v) std::swap(u, v);
  return u * (2 * n - u - 1) / 2 + (v - u - 1);
}

std::pair<int64_t, int64_t> EdgeEndpoints(int64_t n, int64_t index) {
  if (index < 0 || index >= EdgeCount(n)) {
    throw std::out_of_range("edge index out of range");
  }
  int64_t u = 0;
  int64_t row = n - 1;
  while (index >= row) {
    index -= row;
    ++u;
    --row;
  }
  return {u, u + 1 + index};
}

SyntheticGraph::SyntheticGraph(int64_t n)
    : n_(n), weights_(n >= 2 ? EdgeCount(n) : 0, 0.0) {
  if (n < 2) throw std::invalid_argument("graph needs at least 2 vertices");
}

SyntheticGraph::SyntheticGraph(int64_t n, std::vector<double> weights)
    : n_(n), weights_(std::move(weights)) {
  if (n < 2) throw std::invalid_argument("graph needs at least 2 vertices");
  if (static_cast<int64_t>(weights_.size()) != EdgeCount(n)) {
    throw std::invalid_argument("edge weight vector has wrong length");
  }
}

double SyntheticGraph::Weight(int64_t u, int64_t v) const {
  return weights_[EdgeIndex(n_, u, v)];
}

void SyntheticGraph::AddWeight(int64_t u, int64_t v, double w) {
  weights_[EdgeIndex(n_, u, v)] += w;
}

Eigen::MatrixXd SyntheticGraph::Laplacian() const {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n_, n_);
  int64_t e = 0;
  for (int64_t u = 0; u < n_; ++u) {
    for (int64_t v = u + 1; v < n_; ++v, ++e) {
      const double w = weights_[e];
      k(u, v) -= w;
      k(v, u) -= w;
      k(u, u) += w;
      k(v, v) += w;
    }
  }
  return k;
}

double SyntheticGraph::CutValue(std::span<const int64_t> s,
                                std::span<const int64_t> p) const {
  const std::vector<char> in_s = Membership(n_, s, "S");
  const std::vector<char> in_p = Membership(n_, p, "P");
  for (int64_t v = 0; v < n_; ++v) {
    if (in_s[v] && in_p[v]) {
      throw std::invalid_argument("S and P overlap at vertex " +
                                  std::to_string(v));
    }
  }
  double total = 0.0;
  for (int64_t u : s) {
    for (int64_t v : p) total += weights_[EdgeIndex(n_, u, v)];
  }
  return total;
}

double SyntheticGraph::CutValueQuadratic(std::span<const int64_t> s) const {
  const std::vector<char> in_s = Membership(n_, s, "S");
  Eigen::VectorXd chi(n_);
  for (int64_t v = 0; v < n_; ++v) chi(v) = in_s[v] ? 1.0 : 0.0;
  return chi.dot(Laplacian() * chi);
}

SyntheticGraph SyntheticGraph::Clamped() const {
  std::vector<double> w = weights_;
  for (double& x : w) x = std::max(x, 0.0);
  return SyntheticGraph(n_, std::move(w));
}

std::vector<int64_t> Complement(int64_t n, std::span<const int64_t> s) {
  std::vector<char> in(n, 0);
  for (int64_t v : s) {
    CheckVertex(n, v);
    in[v] = 1;
  }
  std::vector<int64_t> out;
  for (int64_t v = 0; v < n; ++v) {
    if (!in[v]) out.push_back(v);
  }
  return out;
}

SyntheticGraphMechanism::SyntheticGraphMechanism(
    int64_t n, const NoisePlan& plan,
    std::shared_ptr<const FactorCoeffs> coeffs)
    : truth_(n), step_(EdgeCount(n), 0.0) {
  NoisePlan edge_plan = plan;
  edge_plan.sensitivity = Sensitivity::Cut();
  if (!coeffs) {
    coeffs = std::make_shared<const FactorCoeffs>(
        FactorCoeffs::Build(plan.horizon));
  }
  const int64_t m = EdgeCount(n);
  channels_.reserve(m);
  for (int64_t e = 0; e < m; ++e) {
    channels_.emplace_back(edge_plan, coeffs, static_cast<uint64_t>(e),
                           InputDomain::kUnitInterval);
  }
}

SyntheticGraph SyntheticGraphMechanism::Step(
    std::span<const EdgeUpdate> updates) {
  if (t() >= channels_.front().horizon()) {
    throw std::out_of_range("graph stream horizon exceeded");
  }
  std::fill(step_.begin(), step_.end(), 0.0);
  for (const EdgeUpdate& up : updates) {
    if (!(up.weight >= 0.0 && up.weight <= 1.0)) {
      throw std::invalid_argument("edge update weight must be in [0, 1]");
    }
    step_[EdgeIndex(n(), up.u, up.v)] += up.weight;
  }
  for (double w : step_) {
    if (w > 1.0) {
      throw std::invalid_argument("combined update for one edge exceeds 1");
    }
  }
  std::vector<double> released(step_.size());
  for (size_t e = 0; e < step_.size(); ++e) {
    released[e] = channels_[e].Step(step_[e]);
  }
  int64_t e = 0;
  for (int64_t u = 0; u < n(); ++u) {
    for (int64_t v = u + 1; v < n(); ++v, ++e) truth_.AddWeight(u, v, step_[e]);
  }
  return SyntheticGraph(n(), std::move(released));
}

double CutErrorBound(int64_t t, int64_t T, const PrivacyBudget& budget,
                     int64_t s_size, int64_t p_size) {
  if (t < 1 || t > T) throw std::out_of_range("step outside horizon");
  const double k = static_cast<double>(s_size + p_size);
  return 3.0 * GaussianConstant(budget) * static_cast<double>(s_size) *
         (1.0 + std::log(static_cast<double>(t)) / std::numbers::pi) *
         std::sqrt(k * std::log(k) * std::log(6.0 * static_cast<double>(T)));
}

double EdgeCountFunction::Evaluate(const SyntheticGraph& graph) const {
  double count = 0.0;
  for (double w : graph.weights()) count += w > 0.0 ? 1.0 : 0.0;
  return count;
}

double VertexDegreeFunction::Evaluate(const SyntheticGraph& graph) const {
  CheckVertex(graph.n(), vertex_);
  double degree = 0.0;
  for (int64_t v = 0; v < graph.n(); ++v) {
    if (v != vertex_ && graph.Weight(vertex_, v) > 0.0) degree += 1.0;
  }
  return degree;
}

NoisePlan GraphFunctionEstimator::WithSensitivity(NoisePlan plan,
                                                  const GraphFunction* f) {
  if (f == nullptr) throw std::invalid_argument("graph function is null");
  plan.sensitivity = Sensitivity::Custom(f->sensitivity());
  return plan;
}

GraphFunctionEstimator::GraphFunctionEstimator(
    int64_t n, const NoisePlan& plan,
    std::shared_ptr<const GraphFunction> function,
    std::shared_ptr<const FactorCoeffs> coeffs)
    : function_(std::move(function)),
      graph_(n),
      counter_(WithSensitivity(plan, function_.get()), std::move(coeffs), 0,
               InputDomain::kReal),
      initial_(function_->Evaluate(graph_)),
      previous_(initial_) {}

double GraphFunctionEstimator::Step(std::span<const EdgeUpdate> updates) {
  for (const EdgeUpdate& up : updates) {
    if (!(up.weight >= 0.0 && up.weight <= 1.0)) {
      throw std::invalid_argument("edge update weight must be in [0, 1]");
    }
    EdgeIndex(graph_.n(), up.u, up.v);
  }
  if (counter_.t() >= counter_.horizon()) {
    throw std::out_of_range("graph stream horizon exceeded");
  }
  for (const EdgeUpdate& up : updates) graph_.AddWeight(up.u, up.v, up.weight);
  const double value = function_->Evaluate(graph_);
  const double diff = value - previous_;
  previous_ = value;
  return initial_ + counter_.Step(diff);
}

double GraphFunctionErrorBound(int64_t T, const PrivacyBudget& budget,
                               double gamma) {
  if (T < 1) throw std::invalid_argument("horizon must be >= 1");
  const double t = static_cast<double>(T);
  return GaussianConstant(budget) * (1.0 + std::log(t) / std::numbers::pi) *
         gamma * std::sqrt(std::log(t));
}

}  // namespace contfact
