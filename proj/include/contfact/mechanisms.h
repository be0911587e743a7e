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

// Streaming mechanisms under continual release: the factorization counter,
// the running average, the continual histogram and the binary-tree baseline.
//
// Every mechanism is a single-owner state machine; call Step() once per
// arriving item, at most `horizon` times.

#ifndef CONTFACT_MECHANISMS_H_
#define CONTFACT_MECHANISMS_H_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "contfact/factor.h"
#include "contfact/privacy.h"
#include "contfact/rng.h"

namespace contfact {

// Values a mechanism accepts per step. The sensitivity argument is the same
// for all of them as long as a neighbouring stream changes one item by at
// most one.
enum class InputDomain {
  kBinary,       // {0, 1}
  kUnitInterval, // [0, 1]
  kSignedUnit,   // [-1, 1]
  kReal,         // any finite value; caller owns the sensitivity claim
};

// Continual counting with the Toeplitz factorization L = R = f(i - j).
//
// The state keeps y_i = (R x)_i + noise_i for every elapsed step. Because L
// and R are lower triangular, y_i never changes once written, and the
// release at step t is a_t = sum_i f(t - i) y_i: O(t) per step.
//
// In kPerStep mode the fresh noise vector z_t only enters the release at
// step t, through (L_t z_t)_t ~ N(0, sigma_t^2 ||row t of L||^2); that single
// scalar is drawn directly.
class FactorizationCounter {
 public:
  // `coeffs` may be shared between counters; it is built when null and must
  // otherwise cover plan.horizon steps. `stream` selects an independent
  // noise stream under plan.seed.
  explicit FactorizationCounter(
      const NoisePlan& plan,
      std::shared_ptr<const FactorCoeffs> coeffs = nullptr,
      uint64_t stream = 0, InputDomain domain = InputDomain::kBinary);

  // Consumes x_t and returns a_t. Throws std::out_of_range past the horizon
  // and std::invalid_argument for inputs outside the domain.
  double Step(double x);

  int64_t t() const { return t_; }
  int64_t horizon() const { return plan_.horizon; }
  const NoisePlan& plan() const { return plan_; }
  double true_sum() const { return true_sum_; }
  // y_i for 1 <= i <= t().
  double y(int64_t i) const { return y_rev_[plan_.horizon - i]; }
  // Noise standard deviation used at step t.
  double Sigma(int64_t t) const;

 private:
  NoisePlan plan_;
  std::shared_ptr<const FactorCoeffs> coeffs_;
  GaussianSource noise_;
  InputDomain domain_;
  double r_norm_horizon_;
  int64_t t_ = 0;
  double true_sum_ = 0.0;
  // Inputs and y stored back to front: step i lives at index horizon - i,
  // which makes every convolution a forward dot product.
  std::vector<double> x_rev_;
  std::vector<double> y_rev_;
};

// Running average (1/t) sum x_i through the square-root factor of
// M_average. Noise scaling follows plan.sensitivity (Sensitivity::Average).
class RunningAverage {
 public:
  // With a null `factor` the mechanism owns one: fully solved up front in
  // kFixedHorizon mode (sigma needs ||R_T||), grown one row per step in
  // kPerStep mode.
  explicit RunningAverage(const NoisePlan& plan,
                          std::shared_ptr<const LowerTriFactor> factor = nullptr,
                          uint64_t stream = 0,
                          InputDomain domain = InputDomain::kBinary);

  double Step(double x);

  int64_t t() const { return t_; }
  double true_mean() const {
    return t_ == 0 ? 0.0 : true_sum_ / static_cast<double>(t_);
  }
  const LowerTriFactor& factor() const;
  double Sigma(int64_t t) const;

 private:
  NoisePlan plan_;
  std::shared_ptr<const LowerTriFactor> shared_;
  std::unique_ptr<LowerTriFactor> owned_;
  GaussianSource noise_;
  InputDomain domain_;
  double r_norm_horizon_ = 0.0;
  int64_t t_ = 0;
  double true_sum_ = 0.0;
  std::vector<double> x_;
  std::vector<double> y_;
};

// u counting channels, one per universe element, each fed +-1 at its own
// coordinate and 0 elsewhere. Channel j draws its noise from stream j, so a
// one-element universe reproduces FactorizationCounter exactly.
class ContinualHistogram {
 public:
  ContinualHistogram(int64_t universe, const NoisePlan& plan,
                     std::shared_ptr<const FactorCoeffs> coeffs = nullptr);

  // sign is +1 (insert) or -1 (delete). A delete that would take the true
  // count below zero is rejected before any state changes.
  std::vector<double> Step(int64_t coord, int sign = +1);

  int64_t universe() const { return static_cast<int64_t>(channels_.size()); }
  int64_t t() const { return channels_.front().t(); }
  std::span<const int64_t> true_counts() const { return counts_; }

 private:
  std::vector<FactorizationCounter> channels_;
  std::vector<int64_t> counts_;
};

// Classic dyadic-interval (binary tree) counter with Gaussian node noise.
// Each item sits in H = ceil(log2 T) + 1 nodes, so sigma_node = C sqrt(H)
// gives the same (epsilon, delta) as the factorization counter.
class BinaryTreeCounter {
 public:
  explicit BinaryTreeCounter(const NoisePlan& plan, uint64_t stream = 0,
                             InputDomain domain = InputDomain::kBinary);

  double Step(double x);

  int64_t t() const { return t_; }
  int height() const { return height_; }
  double node_sigma() const { return node_sigma_; }
  double true_sum() const { return true_sum_; }

  static int TreeHeight(int64_t horizon);

 private:
  NoisePlan plan_;
  GaussianSource noise_;
  InputDomain domain_;
  int height_;
  double node_sigma_;
  int64_t t_ = 0;
  double true_sum_ = 0.0;
  std::vector<double> exact_;  // per level: exact sum of the open node
  std::vector<double> noisy_;  // per level: noisy value of the latest node
};

// Shared input check used by all mechanisms.
void CheckInput(double x, InputDomain domain);

}  // namespace contfact

#endif  // CONTFACT_MECHANISMS_H_
