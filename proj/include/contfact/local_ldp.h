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

// Non-interactive local-DP median learner. Each client one-hot encodes its
// point twice (forward and reversed interval order), privatizes both prefix
// sums with a factorization counter, and sends them once. The server folds
// the messages into a step vector over the breakpoints j/w and integrates
// it into an estimate of theta -> E|theta - d|.

#ifndef CONTFACT_LOCAL_LDP_H_
#define CONTFACT_LOCAL_LDP_H_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "contfact/factor.h"
#include "contfact/privacy.h"

namespace contfact {

// w = ceil(epsilon sqrt(n)) equal intervals of [0, 1], at least one.
class Grid {
 public:
  Grid(int64_t clients, double epsilon);
  explicit Grid(int64_t intervals);

  int64_t w() const { return w_; }
  // 1-based interval holding d; interior boundaries go right, d = 1 goes
  // to I_w. Throws std::invalid_argument outside [0, 1].
  int64_t Interval(double d) const;
  double Breakpoint(int64_t j) const { return static_cast<double>(j) / w_; }

 private:
  int64_t w_;
};

// Prefix sums of u (one-hot at j) and of v (one-hot at w - j + 1), both
// 1-based and of length w.
struct ClientMessage {
  std::vector<double> y;
  std::vector<double> z;
};

// Per-vector budget and counter configuration used by every client.
struct ClientConfig {
  Grid grid;
  PrivacyBudget budget;  // total; each vector gets budget.Split(2)
  uint64_t seed = 0;
  bool dry_run = false;
};

// Encodes client `client` (its noise lives on streams 2 client and
// 2 client + 1 under config.seed). `coeffs` may be shared and must cover w.
ClientMessage ClientEncode(double d, const ClientConfig& config,
                           uint64_t client,
                           std::shared_ptr<const FactorCoeffs> coeffs = nullptr);

// Budget consumed by one client: the two halves composed.
PrivacyBudget ClientBudget(const ClientConfig& config);

// Step values a[0..w] at the breakpoints j/w.
struct AggregateEstimate {
  int64_t w = 0;
  std::vector<double> a;  // length w + 1
};

// a[t] = (sum_i y_i[t] - sum_i z_i[w - t]) / n for 1 <= t <= w - 1, with
// a[0] = a[1] and a[w] = a[w - 1]. For w = 1 no interior entry exists and
// the same formula with empty prefix sums gives a[0] = -1, a[1] = 1.
AggregateEstimate ServerAggregate(std::span<const ClientMessage> messages,
                                  const Grid& grid);

struct RiskPoint {
  double g;
  double f;
};

// g(a, theta) = a[k] for the breakpoint k/w nearest theta (ties to the
// smaller breakpoint); f(a, theta) = integral_0^theta g(a, s) ds in closed
// form. theta in [0, 1].
RiskPoint RiskCurve(const AggregateEstimate& estimate, double theta);

// beta = C_{eps/2, delta/2} sqrt(ln(6 (eps sqrt n + 1)) / (2n))
//        (1 + ln(eps sqrt n + 1) / pi).
double BetaBound(int64_t clients, const PrivacyBudget& budget);
// 2 beta + 2 / (eps sqrt n).
double LocalLearningBound(int64_t clients, const PrivacyBudget& budget);

// (1/n) sum_i |theta - d_i|.
double EmpiricalMedianLoss(std::span<const double> data, double theta);
// E|theta - d| for d ~ Uniform[0, 1].
double UniformMedianLoss(double theta);

}  // namespace contfact

#endif  // CONTFACT_LOCAL_LDP_H_
