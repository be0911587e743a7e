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

#include <cmath>
#include <numbers>

#include "contfact/rng.h"

namespace contfact {

namespace {

void CheckStep(int64_t t, int64_t T) {
  if (T < 1 || t < 1 || t > T) {
    throw std::out_of_range("step " + std::to_string(t) + " outside [1, " +
                            std::to_string(T) + "]");
  }
}

double LogTerm(int64_t T) {
  return std::sqrt(std::log(6.0 * static_cast<double>(T)));
}

}  // namespace

PrivacyBudget::PrivacyBudget(double epsilon, double delta)
    : epsilon_(epsilon), delta_(delta) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be in (0, 1), got " +
                                std::to_string(epsilon));
  }
  if (epsilon >= 1.0) {
    throw UnsupportedRegimeError(
        "epsilon >= 1 is not supported: the Gaussian constant used here is "
        "only valid for epsilon < 1 (use an analytic Gaussian mechanism "
        "calibration for larger budgets)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must be in (0, 1), got " +
                                std::to_string(delta));
  }
}

PrivacyBudget PrivacyBudget::Split(int parts) const {
  if (parts < 1) throw std::invalid_argument("parts must be >= 1");
  return PrivacyBudget(epsilon_ / parts, delta_ / parts);
}

double GaussianConstant(const PrivacyBudget& budget) {
  const double log_term =
      std::log(std::sqrt(2.0 / std::numbers::pi) / budget.delta());
  return std::sqrt(8.0 / 9.0 + 2.0 * log_term) / budget.epsilon();
}

NoiseMode ParseNoiseMode(std::string_view name) {
  if (name == "horizon") return NoiseMode::kFixedHorizon;
  if (name == "per-step") return NoiseMode::kPerStep;
  throw std::invalid_argument("unknown noise mode '" + std::string(name) +
                              "' (expected horizon or per-step)");
}

std::string_view NoiseModeName(NoiseMode mode) {
  return mode == NoiseMode::kFixedHorizon ? "horizon" : "per-step";
}

AverageCalibration ParseAverageCalibration(std::string_view name) {
  if (name == "mean") return AverageCalibration::kMean;
  if (name == "column") return AverageCalibration::kColumn;
  throw std::invalid_argument("unknown average calibration '" +
                              std::string(name) + "' (expected mean or column)");
}

std::string_view AverageCalibrationName(AverageCalibration calibration) {
  return calibration == AverageCalibration::kMean ? "mean" : "column";
}

Sensitivity Sensitivity::Average(AverageCalibration calibration) {
  Sensitivity s(Role::kAverage, 1.0);
  s.calibration_ = calibration;
  return s;
}

Sensitivity Sensitivity::Substring(int ell) {
  if (ell < 1) throw std::invalid_argument("substring length must be >= 1");
  const double l = ell;
  return Sensitivity(Role::kSubstring, std::sqrt(l * (l + 1.0)));
}

Sensitivity Sensitivity::Episode(int alphabet_size, int ell) {
  if (ell < 1 || alphabet_size < 1) {
    throw std::invalid_argument("episode sensitivity needs |U| >= 1, l >= 1");
  }
  return Sensitivity(Role::kEpisode,
                     2.0 * std::sqrt(std::pow(alphabet_size, ell - 1) * ell));
}

Sensitivity Sensitivity::Custom(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("declared sensitivity must be finite and > 0");
  }
  return Sensitivity(Role::kCustom, gamma);
}

double Sensitivity::At(int64_t t) const {
  if (role_ == Role::kAverage && calibration_ == AverageCalibration::kMean) {
    return 1.0 / static_cast<double>(t);
  }
  return value_;
}

void NoisePlan::Validate() const {
  if (horizon < 1) {
    throw std::invalid_argument("horizon must be >= 1, got " +
                                std::to_string(horizon));
  }
}

double NoiseScale(const NoisePlan& plan, int64_t t, double r_norm_t,
                  double r_norm_horizon) {
  plan.Validate();
  CheckStep(t, plan.horizon);
  if (plan.dry_run) return 0.0;
  const double r_norm =
      plan.mode == NoiseMode::kPerStep ? r_norm_t : r_norm_horizon;
  return GaussianConstant(plan.budget) * plan.sensitivity.At(t) * r_norm;
}

std::vector<double> SampleNoise(const NoisePlan& plan, int64_t n,
                                uint64_t offset, uint64_t stream) {
  if (n < 0) throw std::invalid_argument("sample count must be >= 0");
  const GaussianSource source(plan.seed, stream);
  std::vector<double> out(n);
  for (int64_t i = 0; i < n; ++i) out[i] = source(offset + i);
  return out;
}

double ErrorBoundCounting(int64_t t, int64_t T, const PrivacyBudget& budget,
                          BoundVariant variant) {
  CheckStep(t, T);
  double norm_product;
  if (variant == BoundVariant::kAnalytic) {
    norm_product = 1.0 + std::log(static_cast<double>(t)) / std::numbers::pi;
  } else {
    norm_product = FactorCoeffs::Build(t).SquaredRowNorm(t);
  }
  return GaussianConstant(budget) * norm_product * LogTerm(T);
}

double ErrorBoundAverage(int64_t t, int64_t T, const PrivacyBudget& budget) {
  CheckStep(t, T);
  const double s = static_cast<double>(t);
  const double d = 2.0 * s + 1.0;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return GaussianConstant(budget) * (2.0 * pi2 * (s + 1.0) / (3.0 * d * d)) *
         LogTerm(T);
}

CountingErrorBounds::CountingErrorBounds(
    std::shared_ptr<const FactorCoeffs> coeffs, const PrivacyBudget& budget,
    double sensitivity)
    : coeffs_(std::move(coeffs)),
      scale_(GaussianConstant(budget) * sensitivity *
             LogTerm(coeffs_->dim())) {}

double CountingErrorBounds::Exact(int64_t t) const {
  CheckStep(t, horizon());
  return scale_ * coeffs_->SquaredRowNorm(t);
}

double CountingErrorBounds::Analytic(int64_t t) const {
  CheckStep(t, horizon());
  return scale_ * (1.0 + std::log(static_cast<double>(t)) / std::numbers::pi);
}

AverageErrorBounds::AverageErrorBounds(
    std::shared_ptr<const LowerTriFactor> factor, const PrivacyBudget& budget,
    AverageCalibration calibration)
    : factor_(std::move(factor)),
      budget_(budget),
      calibration_(calibration),
      scale_(GaussianConstant(budget) * LogTerm(factor_->dim())) {}

double AverageErrorBounds::Exact(int64_t t) const {
  CheckStep(t, horizon());
  const double delta = calibration_ == AverageCalibration::kMean
                           ? 1.0 / static_cast<double>(t)
                           : 1.0;
  return scale_ * delta * factor_->MaxColNorm(t) *
         std::sqrt(factor_->SquaredRowNorm(t));
}

double AverageErrorBounds::Analytic(int64_t t) const {
  if (calibration_ == AverageCalibration::kMean) {
    return ErrorBoundAverage(t, horizon(), budget_);
  }
  CheckStep(t, horizon());
  return scale_ * AveragingNormBound(t);
}

}  // namespace contfact
