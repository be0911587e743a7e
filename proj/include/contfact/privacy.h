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

// Privacy budgets, Gaussian noise calibration and the additive-error bounds
// of the factorization mechanisms.

#ifndef CONTFACT_PRIVACY_H_
#define CONTFACT_PRIVACY_H_

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "contfact/factor.h"

namespace contfact {

// The Gaussian constant below is only valid for epsilon < 1. Larger budgets
// need the analytic Gaussian calibration, which this library does not ship.
class UnsupportedRegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class PrivacyBudget {
 public:
  // epsilon in (0, 1), delta in (0, 1). Throws UnsupportedRegimeError for
  // epsilon >= 1 and std::invalid_argument for anything else out of range.
  PrivacyBudget(double epsilon, double delta);

  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }

  // (epsilon/parts, delta/parts), for basic composition across `parts`
  // mechanisms.
  PrivacyBudget Split(int parts) const;

 private:
  double epsilon_;
  double delta_;
};

// C_{eps,delta} = (1/eps) sqrt(8/9 + 2 ln((1/delta) sqrt(2/pi))).
double GaussianConstant(const PrivacyBudget& budget);

enum class NoiseMode {
  // One noise vector for the whole horizon, calibrated with ||R_T||_{1->2};
  // one coordinate is drawn per step.
  kFixedHorizon,
  // Per-step calibration with ||R_t||_{1->2} and fresh noise at every step.
  kPerStep,
};

NoiseMode ParseNoiseMode(std::string_view name);  // "horizon" | "per-step"
std::string_view NoiseModeName(NoiseMode mode);

// How the running-average mechanism scales its noise.
enum class AverageCalibration {
  // Delta = 1/t, the l2 sensitivity of the running mean at step t.
  kMean,
  // Delta = 1, so that sigma covers the largest column of the factor, which
  // is the l2 sensitivity of R_t x_t itself.
  kColumn,
};

AverageCalibration ParseAverageCalibration(std::string_view name);
std::string_view AverageCalibrationName(AverageCalibration calibration);

// l2 sensitivity of the quantity a mechanism feeds into the factorization,
// possibly depending on the step t.
class Sensitivity {
 public:
  enum class Role { kCount, kAverage, kHistogram, kCut, kSubstring, kEpisode,
                    kCustom };

  static Sensitivity Count() { return Sensitivity(Role::kCount, 1.0); }
  static Sensitivity Histogram() { return Sensitivity(Role::kHistogram, 1.0); }
  static Sensitivity Cut() { return Sensitivity(Role::kCut, 1.0); }
  static Sensitivity Average(AverageCalibration calibration =
                                 AverageCalibration::kMean);
  // Changing one letter changes two entries of the suffix indicator for every
  // (suffix start, length) pair that covers it: sqrt(l (l + 1)).
  static Sensitivity Substring(int ell);
  // 2 sqrt(|U|^(l-1) l).
  static Sensitivity Episode(int alphabet_size, int ell);
  // Caller-declared value; must be finite and > 0.
  static Sensitivity Custom(double gamma);

  Role role() const { return role_; }
  AverageCalibration average_calibration() const { return calibration_; }
  // Sensitivity at step t (1-based).
  double At(int64_t t) const;

 private:
  Sensitivity(Role role, double value) : role_(role), value_(value) {}

  Role role_;
  double value_;
  AverageCalibration calibration_ = AverageCalibration::kMean;
};

struct NoisePlan {
  PrivacyBudget budget;
  NoiseMode mode = NoiseMode::kFixedHorizon;
  int64_t horizon = 1;
  uint64_t seed = 0;
  Sensitivity sensitivity = Sensitivity::Count();
  // Forces sigma = 0. Used to check plumbing against exact statistics.
  bool dry_run = false;

  // Throws std::invalid_argument if horizon < 1.
  void Validate() const;
};

// Standard deviation of the noise added at step t.
//   kPerStep:      C * Delta(t) * r_norm_t
//   kFixedHorizon: C * Delta(t) * r_norm_horizon
// r_norm_* are the exact ||R_t||_{1->2} and ||R_T||_{1->2}.
double NoiseScale(const NoisePlan& plan, int64_t t, double r_norm_t,
                  double r_norm_horizon);

// n unit-variance Gaussian draws starting at `offset` within `stream`.
// Identical (seed, stream, offset, n) give identical output.
std::vector<double> SampleNoise(const NoisePlan& plan, int64_t n,
                                uint64_t offset, uint64_t stream = 0);

enum class BoundVariant {
  kExact,     // uses the computed norms of the factor
  kAnalytic,  // uses the closed-form norm bound
};

// C * N_t * sqrt(ln 6T), with N_t = ||R_t||_{1->2} ||L_t||_{2->inf}
// (kExact) or 1 + ln(t)/pi (kAnalytic). 1 <= t <= T. O(t) for kExact.
double ErrorBoundCounting(int64_t t, int64_t T, const PrivacyBudget& budget,
                          BoundVariant variant = BoundVariant::kExact);

// Analytic running-average bound C * 2 pi^2 (t+1) / (3 (2t+1)^2) * sqrt(ln 6T).
double ErrorBoundAverage(int64_t t, int64_t T, const PrivacyBudget& budget);

// Per-step bounds over a whole horizon for the counting mechanism.
class CountingErrorBounds {
 public:
  CountingErrorBounds(std::shared_ptr<const FactorCoeffs> coeffs,
                      const PrivacyBudget& budget, double sensitivity = 1.0);

  int64_t horizon() const { return coeffs_->dim(); }
  double Exact(int64_t t) const;
  double Analytic(int64_t t) const;

 private:
  std::shared_ptr<const FactorCoeffs> coeffs_;
  double scale_;  // C * sensitivity * sqrt(ln 6T)
};

// Per-step bounds for the running-average mechanism. The exact variant is
// C * Delta(t) * ||R_t||_{1->2} * ||row t of L|| * sqrt(ln 6T).
class AverageErrorBounds {
 public:
  AverageErrorBounds(std::shared_ptr<const LowerTriFactor> factor,
                     const PrivacyBudget& budget,
                     AverageCalibration calibration = AverageCalibration::kMean);

  int64_t horizon() const { return factor_->dim(); }
  double Exact(int64_t t) const;
  double Analytic(int64_t t) const;

 private:
  std::shared_ptr<const LowerTriFactor> factor_;
  PrivacyBudget budget_;
  AverageCalibration calibration_;
  double scale_;  // C * sqrt(ln 6T)
};

}  // namespace contfact

#endif  // CONTFACT_PRIVACY_H_
