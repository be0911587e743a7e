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

#include "contfact/privacy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "contfact/factor.h"
#include "contfact/rng.h"

namespace contfact {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(PrivacyBudgetTest, Validation) {
  EXPECT_NO_THROW(PrivacyBudget(0.5, 1e-6));
  EXPECT_THROW(PrivacyBudget(1.0, 1e-6), UnsupportedRegimeError);
  EXPECT_THROW(PrivacyBudget(3.0, 1e-6), UnsupportedRegimeError);
  EXPECT_THROW(PrivacyBudget(0.0, 1e-6), std::invalid_argument);
  EXPECT_THROW(PrivacyBudget(-0.1, 1e-6), std::invalid_argument);
  EXPECT_THROW(PrivacyBudget(std::nan(""), 1e-6), std::invalid_argument);
  EXPECT_THROW(PrivacyBudget(0.5, 0.0), std::invalid_argument);
  EXPECT_THROW(PrivacyBudget(0.5, 1.0), std::invalid_argument);
  const PrivacyBudget half = PrivacyBudget(0.5, 1e-6).Split(2);
  EXPECT_DOUBLE_EQ(half.epsilon(), 0.25);
  EXPECT_DOUBLE_EQ(half.delta(), 5e-7);
}

TEST(GaussianConstantTest, ReferenceValues) {
  // (1/0.8) sqrt(8/9 + 2 ln(sqrt(2/pi) 1e10)).
  EXPECT_NEAR(GaussianConstant(PrivacyBudget(0.8, 1e-10)), 8.522856, 5e-7);
  // ln(sqrt(2/pi)/delta) = 4/9 leaves sqrt(16/9) / epsilon.
  const double delta = std::sqrt(2.0 / kPi) * std::exp(-4.0 / 9.0);
  EXPECT_NEAR(GaussianConstant(PrivacyBudget(1.0 - 1e-12, delta)), 4.0 / 3.0,
              1e-9);
}

TEST(GaussianConstantTest, MonotoneInBudget) {
  EXPECT_GT(GaussianConstant(PrivacyBudget(0.4, 1e-6)),
            GaussianConstant(PrivacyBudget(0.8, 1e-6)));
  EXPECT_GT(GaussianConstant(PrivacyBudget(0.5, 1e-9)),
            GaussianConstant(PrivacyBudget(0.5, 1e-6)));
}

TEST(NoiseModeTest, ParseRoundTrip) {
  EXPECT_EQ(ParseNoiseMode("horizon"), NoiseMode::kFixedHorizon);
  EXPECT_EQ(ParseNoiseMode("per-step"), NoiseMode::kPerStep);
  EXPECT_EQ(NoiseModeName(NoiseMode::kPerStep), "per-step");
  EXPECT_THROW(ParseNoiseMode("fast"), std::invalid_argument);
  EXPECT_EQ(ParseAverageCalibration("column"), AverageCalibration::kColumn);
  EXPECT_THROW(ParseAverageCalibration("x"), std::invalid_argument);
}

TEST(SensitivityTest, RoleValues) {
  EXPECT_EQ(Sensitivity::Count().At(7), 1.0);
  EXPECT_EQ(Sensitivity::Average().At(4), 0.25);
  EXPECT_EQ(Sensitivity::Average(AverageCalibration::kColumn).At(4), 1.0);
  EXPECT_NEAR(Sensitivity::Substring(1).At(1), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(Sensitivity::Substring(2).At(1), std::sqrt(6.0), 1e-15);
  EXPECT_NEAR(Sensitivity::Episode(2, 3).At(1), 4.0 * std::sqrt(3.0), 1e-14);
  EXPECT_EQ(Sensitivity::Custom(2.5).At(3), 2.5);
  EXPECT_THROW(Sensitivity::Custom(0.0), std::invalid_argument);
  EXPECT_THROW(Sensitivity::Custom(std::numeric_limits<double>::infinity()),
               std::invalid_argument);
  EXPECT_THROW(Sensitivity::Substring(0), std::invalid_argument);
}

TEST(NoiseScaleTest, ModesAndDryRun) {
  NoisePlan plan{.budget = PrivacyBudget(0.8, 1e-10), .horizon = 10};
  const double c = GaussianConstant(plan.budget);
  EXPECT_DOUBLE_EQ(NoiseScale(plan, 3, 2.0, 5.0), c * 5.0);
  plan.mode = NoiseMode::kPerStep;
  EXPECT_DOUBLE_EQ(NoiseScale(plan, 3, 2.0, 5.0), c * 2.0);
  plan.sensitivity = Sensitivity::Average();
  EXPECT_DOUBLE_EQ(NoiseScale(plan, 4, 2.0, 5.0), c * 0.5);
  plan.dry_run = true;
  EXPECT_EQ(NoiseScale(plan, 3, 2.0, 5.0), 0.0);
  EXPECT_THROW(NoiseScale(plan, 11, 1.0, 1.0), std::out_of_range);
  plan.horizon = 0;
  EXPECT_THROW(plan.Validate(), std::invalid_argument);
}

TEST(GaussianSourceTest, DeterministicAndStreamsDiffer) {
  const GaussianSource a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  for (uint64_t i = 0; i < 100; ++i) EXPECT_EQ(a(i), b(i));
  int same_c = 0, same_d = 0;
  for (uint64_t i = 0; i < 100; ++i) {
    same_c += a(i) == c(i);
    same_d += a(i) == d(i);
  }
  EXPECT_EQ(same_c, 0);
  EXPECT_EQ(same_d, 0);
  NoisePlan plan{.budget = PrivacyBudget(0.5, 1e-6), .seed = 42};
  const std::vector<double> s = SampleNoise(plan, 10, 5, 0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(s[i], a(5 + i));
}

TEST(GaussianSourceTest, StandardNormalMoments) {
  const GaussianSource g(7, 3);
  const int n = 400000;
  double m1 = 0, m2 = 0, m4 = 0;
  int below = 0;  // P(Z < 1) = 0.841345
  for (int i = 0; i < n; ++i) {
    const double x = g(i);
    m1 += x;
    m2 += x * x;
    m4 += x * x * x * x;
    below += x < 1.0;
  }
  m1 /= n;
  m2 /= n;
  m4 /= n;
  // Five standard errors.
  EXPECT_NEAR(m1, 0.0, 5 / std::sqrt(n));
  EXPECT_NEAR(m2, 1.0, 5 * std::sqrt(2.0 / n));
  EXPECT_NEAR(m4, 3.0, 5 * std::sqrt(96.0 / n));
  EXPECT_NEAR(static_cast<double>(below) / n, 0.841345,
              5 * std::sqrt(0.841345 * 0.158655 / n));
}

TEST(ErrorBoundTest, CountingForms) {
  const PrivacyBudget b(0.8, 1e-10);
  const double c = GaussianConstant(b);
  EXPECT_NEAR(ErrorBoundCounting(1, 1, b, BoundVariant::kExact),
              c * std::sqrt(std::log(6.0)), 1e-12);
  EXPECT_NEAR(ErrorBoundCounting(2, 64, b, BoundVariant::kExact),
              c * 1.25 * std::sqrt(std::log(384.0)), 1e-12);
  EXPECT_NEAR(ErrorBoundCounting(100, 1000, b, BoundVariant::kAnalytic),
              c * (1 + std::log(100.0) / kPi) * std::sqrt(std::log(6000.0)),
              1e-12);
  EXPECT_THROW(ErrorBoundCounting(5, 4, b), std::out_of_range);
  EXPECT_THROW(ErrorBoundCounting(0, 4, b), std::out_of_range);

  const auto coeffs = std::make_shared<const FactorCoeffs>(FactorCoeffs::Build(300));
  const CountingErrorBounds bounds(coeffs, b, 1.0);
  for (int64_t t : {1, 17, 300}) {
    EXPECT_NEAR(bounds.Exact(t), ErrorBoundCounting(t, 300, b, BoundVariant::kExact),
                1e-10);
    EXPECT_NEAR(bounds.Analytic(t),
                ErrorBoundCounting(t, 300, b, BoundVariant::kAnalytic), 1e-10);
  }
}

TEST(ErrorBoundTest, AverageForms) {
  const PrivacyBudget b(0.8, 1e-10);
  const double c = GaussianConstant(b);
  EXPECT_NEAR(ErrorBoundAverage(1, 10, b),
              c * (4 * kPi * kPi / 27) * std::sqrt(std::log(60.0)), 1e-12);
  const auto factor = std::make_shared<const LowerTriFactor>(AveragingFactor(200));
  const AverageErrorBounds mean(factor, b, AverageCalibration::kMean);
  const AverageErrorBounds column(factor, b, AverageCalibration::kColumn);
  for (int64_t t = 1; t <= 200; ++t) {
    // The exact norm product never exceeds its closed-form bound.
    ASSERT_LE(mean.Exact(t), mean.Analytic(t) * (1 + 1e-12)) << t;
    ASSERT_LE(column.Exact(t), column.Analytic(t) * (1 + 1e-12)) << t;
    ASSERT_NEAR(column.Exact(t), t * mean.Exact(t), 1e-9 * column.Exact(t));
  }
}

}  // namespace
}  // namespace contfact
