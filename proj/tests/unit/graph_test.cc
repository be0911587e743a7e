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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

namespace contfact {
namespace {

NoisePlan Plan(int64_t T, bool dry = false, uint64_t seed = 3) {
  return NoisePlan{.budget = PrivacyBudget(0.8, 1e-10),
                   .horizon = T,
                   .seed = seed,
                   .dry_run = dry};
}

SyntheticGraph Triangle() {
  SyntheticGraph g(3);
  g.AddWeight(0, 1, 1.0);
  g.AddWeight(0, 2, 1.0);
  g.AddWeight(1, 2, 1.0);
  return g;
}

TEST(EdgeIndexTest, RoundTripsAndIsSymmetric) {
  for (int64_t n = 2; n <= 9; ++n) {
    int64_t expected = 0;
    for (int64_t u = 0; u < n; ++u) {
      for (int64_t v = u + 1; v < n; ++v, ++expected) {
        EXPECT_EQ(EdgeIndex(n, u, v), expected);
        EXPECT_EQ(EdgeIndex(n, v, u), expected);
        EXPECT_EQ(EdgeEndpoints(n, expected), std::make_pair(u, v));
      }
    }
    EXPECT_EQ(expected, EdgeCount(n));
  }
  EXPECT_THROW(EdgeIndex(4, 2, 2), std::invalid_argument);
  EXPECT_THROW(EdgeIndex(4, 0, 4), std::invalid_argument);
}

TEST(SyntheticGraphTest, TriangleCuts) {
  const SyntheticGraph g = Triangle();
  const std::vector<int64_t> s = {0}, p = {1, 2}, p1 = {1};
  EXPECT_EQ(g.CutValue(s, p), 2.0);
  EXPECT_EQ(g.CutValue(s, p1), 1.0);
  EXPECT_EQ(g.CutValueQuadratic(s), 2.0);
}

TEST(SyntheticGraphTest, CutValidation) {
  const SyntheticGraph g = Triangle();
  const std::vector<int64_t> a = {0, 1}, b = {1}, empty, bad = {5}, dup = {2, 2};
  EXPECT_THROW(g.CutValue(a, b), std::invalid_argument);
  EXPECT_THROW(g.CutValue(empty, b), std::invalid_argument);
  EXPECT_THROW(g.CutValue(bad, b), std::invalid_argument);
  EXPECT_THROW(g.CutValue(dup, b), std::invalid_argument);
}

TEST(SyntheticGraphTest, QuadraticFormMatchesDirectSum) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> unif(-1.0, 2.0);
  SyntheticGraph g(6);
  for (int64_t u = 0; u < 6; ++u) {
    for (int64_t v = u + 1; v < 6; ++v) g.AddWeight(u, v, unif(gen));
  }
  for (int mask = 1; mask < (1 << 6) - 1; ++mask) {
    std::vector<int64_t> s;
    for (int v = 0; v < 6; ++v) {
      if (mask >> v & 1) s.push_back(v);
    }
    const std::vector<int64_t> rest = Complement(6, s);
    double direct = 0.0;
    for (int64_t u : s) {
      for (int64_t v : rest) direct += g.Weight(u, v);
    }
    EXPECT_NEAR(g.CutValue(s, rest), direct, 1e-12);
    EXPECT_NEAR(g.CutValueQuadratic(s), direct, 1e-10);
  }
}

TEST(SyntheticGraphTest, LaplacianRowsSumToZero) {
  const Eigen::MatrixXd k = Triangle().Laplacian();
  EXPECT_NEAR(k.rowwise().sum().cwiseAbs().maxCoeff(), 0.0, 1e-15);
  EXPECT_EQ(k(0, 0), 2.0);
  EXPECT_EQ(k(0, 1), -1.0);
}

TEST(SyntheticGraphMechanismTest, DryRunSingleInsert) {
  SyntheticGraphMechanism mech(3, Plan(4, true));
  const std::vector<EdgeUpdate> up = {{0, 1, 1.0}};
  const SyntheticGraph g = mech.Step(up);
  ASSERT_EQ(g.weights().size(), 3u);
  EXPECT_EQ(g.weights()[0], 1.0);
  EXPECT_EQ(g.weights()[1], 0.0);
  EXPECT_EQ(g.weights()[2], 0.0);
}

TEST(SyntheticGraphMechanismTest, DryRunEqualsCumulativeUpdates) {
  const int64_t n = 5, T = 40;
  SyntheticGraphMechanism mech(n, Plan(T, true));
  std::vector<double> cumulative(EdgeCount(n), 0.0);
  std::mt19937_64 gen(2);
  for (int64_t t = 1; t <= T; ++t) {
    std::vector<EdgeUpdate> ups;
    for (int k = 0; k < 3; ++k) {
      const int64_t e = static_cast<int64_t>(gen() % EdgeCount(n));
      const auto [u, v] = EdgeEndpoints(n, e);
      ups.push_back({u, v, 0.25});
      cumulative[e] += 0.25;
    }
    const SyntheticGraph g = mech.Step(ups);
    for (int64_t e = 0; e < EdgeCount(n); ++e) {
      EXPECT_NEAR(g.weights()[e], cumulative[e], 1e-9);
    }
  }
}

TEST(SyntheticGraphMechanismTest, EdgeChannelEqualsScalarCounter) {
  const NoisePlan plan = Plan(16);
  SyntheticGraphMechanism mech(4, plan);
  const int64_t e = EdgeIndex(4, 1, 3);
  FactorizationCounter ref(plan, nullptr, static_cast<uint64_t>(e),
                           InputDomain::kUnitInterval);
  for (int t = 1; t <= 16; ++t) {
    const double w = t % 3 == 0 ? 1.0 : 0.0;
    const std::vector<EdgeUpdate> ups = {{3, 1, w}};
    EXPECT_EQ(mech.Step(ups).weights()[e], ref.Step(w));
  }
}

TEST(SyntheticGraphMechanismTest, RejectsBadUpdates) {
  SyntheticGraphMechanism mech(3, Plan(2));
  const std::vector<EdgeUpdate> heavy = {{0, 1, 1.5}};
  const std::vector<EdgeUpdate> twice = {{0, 1, 0.6}, {1, 0, 0.6}};
  const std::vector<EdgeUpdate> loop = {{1, 1, 0.5}};
  EXPECT_THROW(mech.Step(heavy), std::invalid_argument);
  EXPECT_THROW(mech.Step(twice), std::invalid_argument);
  EXPECT_THROW(mech.Step(loop), std::invalid_argument);
  EXPECT_EQ(mech.t(), 0);
  mech.Step({});
  mech.Step({});
  EXPECT_THROW(mech.Step({}), std::out_of_range);
}

TEST(GraphFunctionEstimatorTest, EdgeCountDryRun) {
  GraphFunctionEstimator est(4, Plan(5, true),
                             std::make_shared<EdgeCountFunction>());
  const EdgeUpdate ups[] = {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {2, 3, 1}};
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(est.Step(std::span(&ups[i], 1)), i + 1.0, 1e-12);
  }
}

TEST(GraphFunctionEstimatorTest, StarDegreeDryRun) {
  GraphFunctionEstimator est(6, Plan(5, true),
                             std::make_shared<VertexDegreeFunction>(0));
  for (int64_t leaf = 1; leaf <= 5; ++leaf) {
    const EdgeUpdate up{0, leaf, 1.0};
    EXPECT_NEAR(est.Step(std::span(&up, 1)), static_cast<double>(leaf), 1e-12);
  }
}

class ZeroSensitivity : public EdgeCountFunction {
 public:
  double sensitivity() const override { return 0.0; }
};

TEST(GraphFunctionEstimatorTest, RejectsMissingSensitivity) {
  EXPECT_ANY_THROW(GraphFunctionEstimator(
      4, Plan(5), std::make_shared<ZeroSensitivity>()));
  EXPECT_THROW(GraphFunctionEstimator(4, Plan(5), nullptr),
               std::invalid_argument);
}

TEST(GraphFunctionEstimatorTest, NoiseScalesWithSensitivity) {
  // With Gamma = 1 the estimator is a scalar counter on the difference
  // sequence, so its noise equals the counter's.
  const NoisePlan plan = Plan(8);
  GraphFunctionEstimator est(3, plan, std::make_shared<EdgeCountFunction>());
  FactorizationCounter ref(plan, nullptr, 0, InputDomain::kReal);
  const EdgeUpdate up{0, 1, 1.0};
  EXPECT_NEAR(est.Step(std::span(&up, 1)), ref.Step(1.0), 1e-12);
  for (int t = 2; t <= 8; ++t) EXPECT_NEAR(est.Step({}), ref.Step(0.0), 1e-12);
}

TEST(CutErrorBoundTest, ClosedForm) {
  const PrivacyBudget b(0.8, 1e-10);
  const double c = GaussianConstant(b);
  EXPECT_NEAR(CutErrorBound(1, 64, b, 1, 7),
              3.0 * c * std::sqrt(8.0 * std::log(8.0) * std::log(384.0)), 1e-9);
  EXPECT_GT(CutErrorBound(10, 64, b, 2, 6), CutErrorBound(9, 64, b, 2, 6));
  EXPECT_THROW(CutErrorBound(65, 64, b, 1, 7), std::out_of_range);
}

}  // namespace
}  // namespace contfact
