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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

namespace contfact {
namespace {

ClientConfig Config(int64_t w, bool dry, uint64_t seed = 1) {
  return ClientConfig{.grid = Grid(w),
                      .budget = PrivacyBudget(0.5, 1e-6),
                      .seed = seed,
                      .dry_run = dry};
}

AggregateEstimate Aggregate(const std::vector<double>& data,
                            const ClientConfig& config) {
  std::vector<ClientMessage> msgs;
  for (size_t i = 0; i < data.size(); ++i) {
    msgs.push_back(ClientEncode(data[i], config, i));
  }
  return ServerAggregate(msgs, config.grid);
}

TEST(GridTest, WidthAndIntervals) {
  EXPECT_EQ(Grid(10000, 0.5).w(), 50);
  EXPECT_EQ(Grid(10001, 0.5).w(), 51);
  EXPECT_EQ(Grid(4, 1e-3).w(), 1);
  const Grid g(4);
  EXPECT_EQ(g.Interval(0.0), 1);
  EXPECT_EQ(g.Interval(0.25), 2);
  EXPECT_EQ(g.Interval(0.3), 2);
  EXPECT_EQ(g.Interval(1.0), 4);
  EXPECT_THROW(g.Interval(1.5), std::invalid_argument);
  EXPECT_THROW(Grid(0), std::invalid_argument);
  EXPECT_THROW(Grid(0, 0.5), std::invalid_argument);
}

TEST(ClientEncodeTest, DryRunPrefixVectors) {
  const ClientMessage m = ClientEncode(0.3, Config(4, true), 0);
  EXPECT_EQ(m.y, (std::vector<double>{0, 1, 1, 1}));
  EXPECT_EQ(m.z, (std::vector<double>{0, 0, 1, 1}));
}

TEST(ClientEncodeTest, DeterministicPerClient) {
  const ClientConfig c = Config(8, false, 42);
  const ClientMessage a = ClientEncode(0.6, c, 3);
  const ClientMessage b = ClientEncode(0.6, c, 3);
  const ClientMessage other = ClientEncode(0.6, c, 4);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(a.z, b.z);
  EXPECT_NE(a.y, other.y);
  EXPECT_NE(a.y, a.z);
}

TEST(ClientEncodeTest, BudgetComposesToTotal) {
  const PrivacyBudget b = ClientBudget(Config(8, false));
  EXPECT_DOUBLE_EQ(b.epsilon(), 0.5);
  EXPECT_DOUBLE_EQ(b.delta(), 1e-6);
}

TEST(ServerAggregateTest, HandExamples) {
  const AggregateEstimate two = Aggregate({0.1, 0.9}, Config(2, true));
  EXPECT_DOUBLE_EQ(two.a[1], 0.0);
  const AggregateEstimate low = Aggregate({0.0, 0.05, 0.1}, Config(5, true));
  for (int64_t t = 1; t <= 4; ++t) EXPECT_DOUBLE_EQ(low.a[t], 1.0);
}

TEST(ServerAggregateTest, DryRunIsLossSlope) {
  // Noiseless a[t] = P(d < t/w) - P(d >= t/w), the slope of E|theta - d|.
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> data(300);
  for (double& d : data) d = unif(gen);
  const int64_t w = 7;
  const AggregateEstimate est = Aggregate(data, Config(w, true));
  for (int64_t t = 1; t < w; ++t) {
    double below = 0.0;
    for (double d : data) below += d < static_cast<double>(t) / w;
    const double n = static_cast<double>(data.size());
    EXPECT_NEAR(est.a[t], (below - (n - below)) / n, 1e-12);
  }
  EXPECT_EQ(est.a[0], est.a[1]);
  EXPECT_EQ(est.a[w], est.a[w - 1]);
}

TEST(ServerAggregateTest, SingleIntervalGrid) {
  const ClientConfig c{.grid = Grid(3, 0.01),
                       .budget = PrivacyBudget(0.01, 1e-6),
                       .seed = 0,
                       .dry_run = false};
  ASSERT_EQ(c.grid.w(), 1);
  const AggregateEstimate est = Aggregate({0.2, 0.7, 0.4}, c);
  EXPECT_EQ(est.a, (std::vector<double>{-1.0, 1.0}));
  EXPECT_NO_THROW(RiskCurve(est, 0.5));
}

TEST(ServerAggregateTest, RejectsMismatchedMessages) {
  std::vector<ClientMessage> msgs = {ClientEncode(0.2, Config(3, true), 0)};
  EXPECT_THROW(ServerAggregate(msgs, Grid(4)), std::invalid_argument);
  EXPECT_THROW(ServerAggregate({}, Grid(4)), std::invalid_argument);
}

TEST(ServerAggregateTest, NoisyEstimateIsUnbiased) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> data(10000);
  for (double& d : data) d = unif(gen);
  const ClientConfig dry{.grid = Grid(10000, 0.5),
                         .budget = PrivacyBudget(0.5, 1e-6),
                         .seed = 0,
                         .dry_run = true};
  const AggregateEstimate truth = Aggregate(data, dry);
  const int trials = 12;
  const int64_t w = dry.grid.w();
  std::vector<double> sum(w + 1, 0.0), sum2(w + 1, 0.0);
  for (int k = 0; k < trials; ++k) {
    ClientConfig c = dry;
    c.dry_run = false;
    c.seed = 100 + k;
    const AggregateEstimate est = Aggregate(data, c);
    for (int64_t t = 1; t < w; ++t) {
      const double e = est.a[t] - truth.a[t];
      sum[t] += e;
      sum2[t] += e * e;
    }
  }
  for (int64_t t : {1, 10, 25, 49}) {
    const double mean = sum[t] / trials;
    const double sd = std::sqrt((sum2[t] - trials * mean * mean) / (trials - 1));
    EXPECT_LE(std::abs(mean), 5.0 * sd / std::sqrt(trials)) << t;
  }
}

TEST(RiskCurveTest, ConstantVector) {
  const AggregateEstimate est{.w = 4, .a = std::vector<double>(5, 0.7)};
  for (double theta : {0.0, 0.13, 0.5, 0.99, 1.0}) {
    const RiskPoint p = RiskCurve(est, theta);
    EXPECT_DOUBLE_EQ(p.g, 0.7);
    EXPECT_NEAR(p.f, 0.7 * theta, 1e-15);
  }
}

TEST(RiskCurveTest, TieGoesToSmallerBreakpoint) {
  const AggregateEstimate est{.w = 2, .a = {0.0, 10.0, 20.0}};
  EXPECT_EQ(RiskCurve(est, 0.25).g, 0.0);
  EXPECT_EQ(RiskCurve(est, 0.75).g, 10.0);
  EXPECT_EQ(RiskCurve(est, 0.26).g, 10.0);
  EXPECT_EQ(RiskCurve(est, 1.0).g, 20.0);
  EXPECT_THROW(RiskCurve(est, -0.1), std::invalid_argument);
}

TEST(RiskCurveTest, IntegralMatchesQuadrature) {
  const AggregateEstimate est{.w = 2, .a = {-1.0, 0.3, 1.0}};
  // Midpoint rule on 10^7 cells; each jump of g costs at most 2e-7.
  const int64_t cells = 10'000'000;
  const int64_t checks = 10'000;
  const double h = 1.0 / cells;
  double integral = 0.0;
  int64_t next = 1;
  for (int64_t i = 0; i < cells; ++i) {
    integral += RiskCurve(est, (i + 0.5) * h).g * h;
    if ((i + 1) * checks == next * cells) {
      const double theta = static_cast<double>(next) / checks;
      ASSERT_NEAR(RiskCurve(est, theta).f, integral, 1e-6) << theta;
      ++next;
    }
  }
}

TEST(RiskCurveTest, NoiselessCurveIsConvexAndTracksLoss) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> data(2000);
  for (double& d : data) d = unif(gen);
  const int64_t w = 40;
  const AggregateEstimate est = Aggregate(data, Config(w, true));
  const double offset = EmpiricalMedianLoss(data, 0.0);
  double prev_slope = -2.0;
  for (int i = 1; i <= 100; ++i) {
    const double lo = (i - 1) / 100.0, hi = i / 100.0;
    const double slope =
        (RiskCurve(est, hi).f - RiskCurve(est, lo).f) / (hi - lo);
    EXPECT_GE(slope, prev_slope - 1e-12);
    prev_slope = slope;
    // Each step of the staircase is off by at most one cell of mass.
    EXPECT_NEAR(RiskCurve(est, hi).f + offset, EmpiricalMedianLoss(data, hi),
                2.0 / w + 0.05);
  }
}

TEST(BoundTest, BetaAndLearningBound) {
  const PrivacyBudget b(0.5, 1e-6);
  EXPECT_GT(BetaBound(1000, b), BetaBound(10000, b));
  EXPECT_GT(BetaBound(10000, b), BetaBound(100000, b));
  const double beta = BetaBound(10000, b);
  const double c = GaussianConstant(b.Split(2));
  EXPECT_NEAR(beta,
              c * std::sqrt(std::log(6.0 * 51.0) / 20000.0) *
                  (1.0 + std::log(51.0) / std::numbers::pi),
              1e-12);
  EXPECT_NEAR(LocalLearningBound(10000, b), 2.0 * beta + 2.0 / 50.0, 1e-12);
}

TEST(LossTest, UniformClosedFormMatchesEmpirical) {
  std::vector<double> grid(100001);
  for (size_t i = 0; i < grid.size(); ++i) grid[i] = i / 100000.0;
  for (double theta : {0.0, 0.3, 0.5, 0.9}) {
    EXPECT_NEAR(EmpiricalMedianLoss(grid, theta), UniformMedianLoss(theta), 1e-5);
  }
}

}  // namespace
}  // namespace contfact
