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

#include "contfact/local_ldp.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "contfact/mechanisms.h"

namespace contfact {

namespace {

// Slack so that exact products such as 0.5 * 100 do not round up to 51.
constexpr double kCeilSlack = 1e-9;

double ScaledRoot(int64_t clients, double epsilon) {
  return epsilon * std::sqrt(static_cast<double>(clients));
}

}  // namespace

Grid::Grid(int64_t clients, double epsilon) {
  if (clients < 1) throw std::invalid_argument("need at least one client");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  const double cells = std::ceil(ScaledRoot(clients, epsilon) - kCeilSlack);
  w_ = std::max<int64_t>(1, static_cast<int64_t>(cells));
}

Grid::Grid(int64_t intervals) : w_(intervals) {
  if (intervals < 1) throw std::invalid_argument("grid needs w >= 1");
}

int64_t Grid::Interval(double d) const {
  if (!(d >= 0.0 && d <= 1.0)) {
    throw std::invalid_argument("client value " + std::to_string(d) +
                                " outside [0, 1]");
  }
  const auto j = static_cast<int64_t>(std::floor(d * static_cast<double>(w_)));
  return std::min(j + 1, w_);
}

ClientMessage ClientEncode(double d, const ClientConfig& config,
                           uint64_t client,
                           std::shared_ptr<const FactorCoeffs> coeffs) {
  const int64_t w = config.grid.w();
  const int64_t j = config.grid.Interval(d);
  const NoisePlan plan{.budget = config.budget.Split(2),
                       .mode = NoiseMode::kFixedHorizon,
                       .horizon = w,
                       .seed = config.seed,
                       .dry_run = config.dry_run};
  if (!coeffs) {
    coeffs = std::make_shared<const FactorCoeffs>(FactorCoeffs::Build(w));
  }
  FactorizationCounter forward(plan, coeffs, 2 * client);
  FactorizationCounter backward(plan, coeffs, 2 * client + 1);
  ClientMessage msg;
  msg.y.resize(w);
  msg.z.resize(w);
  for (int64_t t = 1; t <= w; ++t) {
    msg.y[t - 1] = forward.Step(t == j ? 1.0 : 0.0);
    msg.z[t - 1] = backward.Step(t == w - j + 1 ? 1.0 : 0.0);
  }
  return msg;
}

PrivacyBudget ClientBudget(const ClientConfig& config) {
  const PrivacyBudget half = config.budget.Split(2);
  return PrivacyBudget(2.0 * half.epsilon(), 2.0 * half.delta());
}

AggregateEstimate ServerAggregate(std::span<const ClientMessage> messages,
                                  const Grid& grid) {
  if (messages.empty()) throw std::invalid_argument("no client messages");
  const int64_t w = grid.w();
  std::vector<double> y_sum(w, 0.0);
  std::vector<double> z_sum(w, 0.0);
  for (const ClientMessage& m : messages) {
    if (static_cast<int64_t>(m.y.size()) != w ||
        static_cast<int64_t>(m.z.size()) != w) {
      throw std::invalid_argument("client message does not match grid w = " +
                                  std::to_string(w));
    }
    for (int64_t t = 0; t < w; ++t) {
      y_sum[t] += m.y[t];
      z_sum[t] += m.z[t];
    }
  }
  const double n = static_cast<double>(messages.size());
  AggregateEstimate est;
  est.w = w;
  est.a.assign(w + 1, 0.0);
  if (w == 1) {
    est.a[0] = -1.0;
    est.a[1] = 1.0;
    return est;
  }
  for (int64_t t = 1; t <= w - 1; ++t) {
    est.a[t] = (y_sum[t - 1] - z_sum[w - t - 1]) / n;
  }
  est.a[0] = est.a[1];
  est.a[w] = est.a[w - 1];
  return est;
}

RiskPoint RiskCurve(const AggregateEstimate& estimate, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("theta must be in [0, 1]");
  }
  const int64_t w = estimate.w;
  if (w < 1 || static_cast<int64_t>(estimate.a.size()) != w + 1) {
    throw std::invalid_argument("malformed aggregate estimate");
  }
  const double wd = static_cast<double>(w);
  // Nearest breakpoint, ties to the smaller one.
  int64_t k = static_cast<int64_t>(std::ceil(theta * wd - 0.5));
  k = std::clamp<int64_t>(k, 0, w);

  // g equals a[j] on the cell [(j - 1/2)/w, (j + 1/2)/w] clipped to [0, 1].
  double f = 0.0;
  for (int64_t j = 0; j <= w; ++j) {
    const double lo = std::max(0.0, (static_cast<double>(j) - 0.5) / wd);
    const double hi = std::min(theta, (static_cast<double>(j) + 0.5) / wd);
    if (hi <= lo) break;
    f += estimate.a[j] * (hi - lo);
  }
  return {estimate.a[k], f};
}

double BetaBound(int64_t clients, const PrivacyBudget& budget) {
  if (clients < 1) throw std::invalid_argument("need at least one client");
  const double root = ScaledRoot(clients, budget.epsilon());
  const double n = static_cast<double>(clients);
  return GaussianConstant(budget.Split(2)) *
         std::sqrt(std::log(6.0 * (root + 1.0)) / (2.0 * n)) *
         (1.0 + std::log(root + 1.0) / std::numbers::pi);
}

double LocalLearningBound(int64_t clients, const PrivacyBudget& budget) {
  return 2.0 * BetaBound(clients, budget) +
         2.0 / ScaledRoot(clients, budget.epsilon());
}

double EmpiricalMedianLoss(std::span<const double> data, double theta) {
  if (data.empty()) throw std::invalid_argument("empty data");
  double total = 0.0;
  for (double d : data) total += std::abs(theta - d);
  return total / static_cast<double>(data.size());
}

double UniformMedianLoss(double theta) {
  return 0.5 * (theta * theta + (1.0 - theta) * (1.0 - theta));
}

}  // namespace contfact
