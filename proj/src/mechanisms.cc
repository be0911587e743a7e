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

#include "contfact/mechanisms.h"

#include <bit>
#include <cmath>
#include <string>

namespace contfact {

namespace {

using ConstVec = Eigen::Map<const Eigen::VectorXd>;

double Dot(const double* a, const double* b, int64_t n) {
  return ConstVec(a, n).dot(ConstVec(b, n));
}

void CheckStepAvailable(int64_t t, int64_t horizon) {
  if (t >= horizon) {
    throw std::out_of_range("stream horizon " + std::to_string(horizon) +
                            " exceeded");
  }
}

}  // namespace

void CheckInput(double x, InputDomain domain) {
  bool ok = std::isfinite(x);
  switch (domain) {
    case InputDomain::kBinary:
      ok = ok && (x == 0.0 || x == 1.0);
      break;
    case InputDomain::kUnitInterval:
      ok = ok && x >= 0.0 && x <= 1.0;
      break;
    case InputDomain::kSignedUnit:
      ok = ok && x >= -1.0 && x <= 1.0;
      break;
    case InputDomain::kReal:
      break;
  }
  if (!ok) {
    throw std::invalid_argument("input " + std::to_string(x) +
                                " outside the accepted domain");
  }
}

FactorizationCounter::FactorizationCounter(
    const NoisePlan& plan, std::shared_ptr<const FactorCoeffs> coeffs,
    uint64_t stream, InputDomain domain)
    : plan_(plan),
      coeffs_(std::move(coeffs)),
      noise_(plan.seed, stream),
      domain_(domain) {
  plan_.Validate();
  if (!coeffs_) {
    coeffs_ = std::make_shared<const FactorCoeffs>(
        FactorCoeffs::Build(plan_.horizon));
  } else if (coeffs_->dim() < plan_.horizon) {
    throw std::invalid_argument("factor coefficients shorter than horizon");
  }
  r_norm_horizon_ = std::sqrt(coeffs_->SquaredRowNorm(plan_.horizon));
  x_rev_.assign(plan_.horizon, 0.0);
  y_rev_.assign(plan_.horizon, 0.0);
}

double FactorizationCounter::Sigma(int64_t t) const {
  return NoiseScale(plan_, t, std::sqrt(coeffs_->SquaredRowNorm(t)),
                    r_norm_horizon_);
}

double FactorizationCounter::Step(double x) {
  CheckStepAvailable(t_, plan_.horizon);
  CheckInput(x, domain_);
  const int64_t t = ++t_;
  const int64_t pos = plan_.horizon - t;
  const double* f = coeffs_->coeffs().data();
  x_rev_[pos] = x;
  true_sum_ += x;

  const double sigma = Sigma(t);
  const double rx = Dot(f, x_rev_.data() + pos, t);
  const double g = sigma == 0.0 ? 0.0 : noise_(static_cast<uint64_t>(t - 1));
  const bool fixed = plan_.mode == NoiseMode::kFixedHorizon;
  y_rev_[pos] = fixed ? rx + sigma * g : rx;

  double a = Dot(f, y_rev_.data() + pos, t);
  if (!fixed) a += sigma * std::sqrt(coeffs_->SquaredRowNorm(t)) * g;
  return a;
}

RunningAverage::RunningAverage(const NoisePlan& plan,
                               std::shared_ptr<const LowerTriFactor> factor,
                               uint64_t stream, InputDomain domain)
    : plan_(plan),
      shared_(std::move(factor)),
      noise_(plan.seed, stream),
      domain_(domain) {
  plan_.Validate();
  if (shared_) {
    if (shared_->dim() < plan_.horizon) {
      throw std::invalid_argument("averaging factor shorter than horizon");
    }
  } else {
    owned_ = std::make_unique<LowerTriFactor>();
    if (plan_.mode == NoiseMode::kFixedHorizon) {
      for (int64_t i = 0; i < plan_.horizon; ++i) owned_->AppendRow();
    }
  }
  if (plan_.mode == NoiseMode::kFixedHorizon) {
    r_norm_horizon_ = this->factor().MaxColNorm(plan_.horizon);
  }
  x_.reserve(plan_.horizon);
  y_.reserve(plan_.horizon);
}

const LowerTriFactor& RunningAverage::factor() const {
  return shared_ ? *shared_ : *owned_;
}

double RunningAverage::Sigma(int64_t t) const {
  return NoiseScale(plan_, t, factor().MaxColNorm(t), r_norm_horizon_);
}

double RunningAverage::Step(double x) {
  CheckStepAvailable(t_, plan_.horizon);
  CheckInput(x, domain_);
  const int64_t t = ++t_;
  if (owned_ && owned_->dim() < t) owned_->AppendRow();
  const LowerTriFactor& r = factor();
  const std::span<const double> row = r.Row(t);

  x_.push_back(x);
  true_sum_ += x;
  const double sigma = Sigma(t);
  const double rx = Dot(row.data(), x_.data(), t);
  const double g = sigma == 0.0 ? 0.0 : noise_(static_cast<uint64_t>(t - 1));
  const bool fixed = plan_.mode == NoiseMode::kFixedHorizon;
  y_.push_back(fixed ? rx + sigma * g : rx);

  double a = Dot(row.data(), y_.data(), t);
  if (!fixed) a += sigma * std::sqrt(r.SquaredRowNorm(t)) * g;
  return a;
}

ContinualHistogram::ContinualHistogram(
    int64_t universe, const NoisePlan& plan,
    std::shared_ptr<const FactorCoeffs> coeffs)
    : counts_(universe > 0 ? universe : 0, 0) {
  if (universe < 1) throw std::invalid_argument("universe must be >= 1");
  if (!coeffs) {
    coeffs = std::make_shared<const FactorCoeffs>(
        FactorCoeffs::Build(plan.horizon));
  }
  channels_.reserve(universe);
  for (int64_t j = 0; j < universe; ++j) {
    channels_.emplace_back(plan, coeffs, static_cast<uint64_t>(j),
                           InputDomain::kSignedUnit);
  }
}

std::vector<double> ContinualHistogram::Step(int64_t coord, int sign) {
  if (coord < 0 || coord >= universe()) {
    throw std::out_of_range("histogram coordinate " + std::to_string(coord) +
                            " outside universe");
  }
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument("histogram update sign must be +1 or -1");
  }
  CheckStepAvailable(t(), channels_.front().horizon());
  if (counts_[coord] + sign < 0) {
    throw std::invalid_argument("delete would make the count of element " +
                                std::to_string(coord) + " negative");
  }
  counts_[coord] += sign;
  std::vector<double> out(channels_.size());
  for (int64_t j = 0; j < universe(); ++j) {
    out[j] = channels_[j].Step(j == coord ? static_cast<double>(sign) : 0.0);
  }
  return out;
}

int BinaryTreeCounter::TreeHeight(int64_t horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  // ceil(log2 T) + 1
  return std::bit_width(static_cast<uint64_t>(horizon - 1)) + 1;
}

BinaryTreeCounter::BinaryTreeCounter(const NoisePlan& plan, uint64_t stream,
                                     InputDomain domain)
    : plan_(plan),
      noise_(plan.seed, stream),
      domain_(domain),
      height_(TreeHeight(plan.horizon)) {
  plan_.Validate();
  node_sigma_ = plan_.dry_run ? 0.0
                              : GaussianConstant(plan_.budget) *
                                    plan_.sensitivity.At(1) *
                                    std::sqrt(static_cast<double>(height_));
  exact_.assign(height_, 0.0);
  noisy_.assign(height_, 0.0);
}

double BinaryTreeCounter::Step(double x) {
  CheckStepAvailable(t_, plan_.horizon);
  CheckInput(x, domain_);
  const int64_t t = ++t_;
  true_sum_ += x;
  const uint64_t ut = static_cast<uint64_t>(t);
  const int level = std::countr_zero(ut);
  // The node closing at time t covers the children closed below it.
  double sum = x;
  for (int j = 0; j < level; ++j) {
    sum += exact_[j];
    exact_[j] = 0.0;
    noisy_[j] = 0.0;
  }
  exact_[level] = sum;
  const double g = node_sigma_ == 0.0 ? 0.0 : noise_(ut - 1);
  noisy_[level] = sum + node_sigma_ * g;

  double out = 0.0;
  for (int j = 0; j < height_; ++j) {
    if (ut & (uint64_t{1} << j)) out += noisy_[j];
  }
  return out;
}

}  // namespace contfact
