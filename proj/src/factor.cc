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

#include "contfact/factor.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace contfact {

namespace {

void CheckDim(int64_t dim, const char* what) {
  if (dim < 1) {
    throw std::invalid_argument(std::string(what) +
                                ": dimension must be >= 1, got " +
                                std::to_string(dim));
  }
}

void CheckPrefix(int64_t t, int64_t dim) {
  if (t < 1 || t > dim) {
    throw std::out_of_range("prefix dimension " + std::to_string(t) +
                            " outside [1, " + std::to_string(dim) + "]");
  }
}

}  // namespace

double FactorCoeff(int64_t k) {
  if (k < 0) return 0.0;
  double f = 1.0;
  for (int64_t i = 1; i <= k; ++i) {
    f *= static_cast<double>(2 * i - 1) / static_cast<double>(2 * i);
  }
  return f;
}

FactorCoeffs::FactorCoeffs(std::vector<double> coeffs)
    : coeffs_(std::move(coeffs)), sq_prefix_(coeffs_.size()) {
  double acc = 0.0;
  for (size_t k = 0; k < coeffs_.size(); ++k) {
    acc += coeffs_[k] * coeffs_[k];
    sq_prefix_[k] = acc;
  }
}

FactorCoeffs FactorCoeffs::Build(int64_t dim) {
  CheckDim(dim, "counting factor");
  std::vector<double> coeffs(dim);
  coeffs[0] = 1.0;
  for (int64_t k = 1; k < dim; ++k) {
    coeffs[k] = coeffs[k - 1] * (static_cast<double>(2 * k - 1) /
                                 static_cast<double>(2 * k));
  }
  return FactorCoeffs(std::move(coeffs));
}

double FactorCoeffs::Entry(int64_t i, int64_t j) const {
  const int64_t k = i - j;
  if (k < 0) return 0.0;
  return coeffs_[k];
}

FactorCoeffs CountingFactor(int64_t dim) { return FactorCoeffs::Build(dim); }

Eigen::MatrixXd ReconstructProduct(const FactorCoeffs& coeffs, int64_t dim,
                                   int64_t dense_limit) {
  CheckDim(dim, "reconstruct");
  if (dim > coeffs.dim()) {
    throw std::invalid_argument("reconstruct: dimension " +
                                std::to_string(dim) + " exceeds factor horizon " +
                                std::to_string(coeffs.dim()));
  }
  if (dim > dense_limit) {
    throw std::length_error("reconstruct: dimension " + std::to_string(dim) +
                            " exceeds dense limit " +
                            std::to_string(dense_limit));
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  for (int64_t i = 0; i < dim; ++i) {
    for (int64_t j = 0; j <= i; ++j) {
      double acc = 0.0;
      for (int64_t k = j; k <= i; ++k) acc += coeffs[i - k] * coeffs[k - j];
      out(i, j) = acc;
    }
  }
  return out;
}

void LowerTriFactor::AppendRow() {
  const int64_t i = dim_ + 1;
  entries_.resize(entries_.size() + i);
  double* row = entries_.data() + Offset(i);
  const double diag = 1.0 / std::sqrt(static_cast<double>(i));
  const double target = 1.0 / static_cast<double>(i);
  row[i - 1] = diag;

  // scratch_[j-1] accumulates sum_{k>j, k<i} R[i,k] R[k,j] as entries of row
  // i are solved from right to left.
  scratch_.assign(i, 0.0);
  for (int64_t j = i - 1; j >= 1; --j) {
    const double* row_j = entries_.data() + Offset(j);
    double value = (target - scratch_[j - 1]) / (row_j[j - 1] + diag);
    if (value < 0.0) {
      if (value > -kClampTolerance) {
        value = 0.0;
        ++clamp_count_;
      } else {
        throw NumericalError("averaging factor: entry (" + std::to_string(i) +
                             "," + std::to_string(j) +
                             ") is negative: " + std::to_string(value));
      }
    }
    row[j - 1] = value;
    if (j > 1 && value != 0.0) {
      Eigen::Map<Eigen::VectorXd>(scratch_.data(), j - 1) +=
          value * Eigen::Map<const Eigen::VectorXd>(row_j, j - 1);
    }
  }

  const Eigen::Map<const Eigen::VectorXd> r(row, i);
  row_sq_.push_back(r.squaredNorm());
  col_sq_.push_back(0.0);
  double max_col = 0.0;
  for (int64_t j = 0; j < i; ++j) {
    col_sq_[j] += row[j] * row[j];
    max_col = std::max(max_col, col_sq_[j]);
  }
  const double prev_row = max_row_norm_.empty() ? 0.0 : max_row_norm_.back();
  max_row_norm_.push_back(std::max(prev_row, std::sqrt(row_sq_.back())));
  max_col_norm_.push_back(std::sqrt(max_col));
  dim_ = i;
}

double LowerTriFactor::Entry(int64_t i, int64_t j) const {
  if (j > i) return 0.0;
  return entries_[Offset(i) + j - 1];
}

std::span<const double> LowerTriFactor::Row(int64_t i) const {
  return {entries_.data() + Offset(i), static_cast<size_t>(i)};
}

Eigen::MatrixXd LowerTriFactor::ToDense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int64_t i = 1; i <= dim_; ++i) {
    for (int64_t j = 1; j <= i; ++j) out(i - 1, j - 1) = Entry(i, j);
  }
  return out;
}

LowerTriFactor AveragingFactor(int64_t dim) {
  CheckDim(dim, "averaging factor");
  LowerTriFactor factor;
  for (int64_t i = 0; i < dim; ++i) factor.AppendRow();
  return factor;
}

WorkloadMatrix::WorkloadMatrix(WorkloadKind kind, int64_t dim)
    : kind_(kind), dim_(dim) {
  CheckDim(dim, "workload");
}

double WorkloadMatrix::Entry(int64_t i, int64_t j) const {
  if (j > i) return 0.0;
  return kind_ == WorkloadKind::kCount ? 1.0 : 1.0 / static_cast<double>(i);
}

Eigen::MatrixXd WorkloadMatrix::ToDense(int64_t dense_limit) const {
  if (dim_ > dense_limit) {
    throw std::length_error("workload: dimension exceeds dense limit");
  }
  Eigen::MatrixXd out(dim_, dim_);
  for (int64_t i = 1; i <= dim_; ++i) {
    for (int64_t j = 1; j <= dim_; ++j) out(i - 1, j - 1) = Entry(i, j);
  }
  return out;
}

NormPair RowColNorms(const FactorCoeffs& factor, int64_t t) {
  CheckPrefix(t, factor.dim());
  // Toeplitz: the longest row is the last one and the longest column the
  // first one, and both hold f(0..t-1).
  const double n = std::sqrt(factor.SquaredRowNorm(t));
  return {n, n};
}

NormPair RowColNorms(const LowerTriFactor& factor, int64_t t) {
  CheckPrefix(t, factor.dim());
  return {factor.MaxRowNorm(t), factor.MaxColNorm(t)};
}

double CountingNormBound(int64_t T) {
  if (T < 2) {
    throw std::invalid_argument("counting norm bound needs T >= 2, got " +
                                std::to_string(T));
  }
  return 1.0 + std::log(static_cast<double>(T - 1)) / std::numbers::pi;
}

double AveragingNormBound(int64_t T) {
  CheckDim(T, "averaging norm bound");
  const double t = static_cast<double>(T);
  const double d = 2.0 * t + 1.0;
  return 2.0 * t * (t + 1.0) * std::numbers::pi * std::numbers::pi /
         (3.0 * d * d);
}

double GammaHat(int64_t T) {
  CheckDim(T, "gamma_hat");
  // Terms j and T+1-j are equal; sum one half and double it.
  const long double step =
      std::numbers::pi_v<long double> / (2.0L * static_cast<long double>(T));
  long double acc = 0.0L;
  const int64_t half = T / 2;
  for (int64_t j = 1; j <= half; ++j) {
    acc += 1.0L / std::sin(static_cast<long double>(2 * j - 1) * step);
  }
  acc *= 2.0L;
  if (T % 2 == 1) acc += 1.0L;  // middle term, angle pi/2
  return static_cast<double>(acc / static_cast<long double>(T));
}

BoundReport MathiasBounds(int64_t T) {
  CheckDim(T, "mathias bounds");
  BoundReport r;
  r.T = T;
  r.gamma_hat = GammaHat(T);
  const double t = static_cast<double>(T);
  r.mathias_lower = (0.5 + 0.5 / t) * r.gamma_hat;
  r.mathias_upper = 0.5 * r.gamma_hat + 0.5;
  r.ours_upper = T >= 2 ? CountingNormBound(T) : 1.0;

  // ||L||_{2->inf} ||R||_{1->2} = 1 + sum_{k=1}^{T-1} f(k)^2, accumulated
  // small-to-large after generating the coefficients.
  std::vector<double> sq(T);
  double f = 1.0;
  sq[0] = 1.0;
  for (int64_t k = 1; k < T; ++k) {
    f *= static_cast<double>(2 * k - 1) / static_cast<double>(2 * k);
    sq[k] = f * f;
  }
  long double acc = 0.0L;
  for (int64_t k = T - 1; k >= 0; --k) acc += sq[k];
  r.exact_norm_product = static_cast<double>(acc);
  return r;
}

ZetaSandwich PartialZetaBounds(int64_t T) {
  CheckDim(T, "partial zeta");
  const double t = static_cast<double>(T);
  const double d = 2.0 * t + 1.0;
  const double pi = std::numbers::pi;
  long double acc = 0.0L;
  for (int64_t i = T; i >= 1; --i) {
    const long double li = static_cast<long double>(i);
    acc += 1.0L / (li * li);
  }
  return {pi * std::sqrt(t * (2.0 * t - 1.0) / (3.0 * d * d)),
          static_cast<double>(std::sqrt(acc)),
          2.0 * pi * std::sqrt(t * (t + 1.0) / (6.0 * d * d))};
}

std::vector<ZetaSandwich> PartialZetaTable(int64_t max_T) {
  CheckDim(max_T, "partial zeta");
  std::vector<ZetaSandwich> out;
  out.reserve(max_T);
  const double pi = std::numbers::pi;
  long double acc = 0.0L;
  for (int64_t T = 1; T <= max_T; ++T) {
    const long double lt = static_cast<long double>(T);
    acc += 1.0L / (lt * lt);
    const double t = static_cast<double>(T);
    const double d = 2.0 * t + 1.0;
    out.push_back({pi * std::sqrt(t * (2.0 * t - 1.0) / (3.0 * d * d)),
                   static_cast<double>(std::sqrt(acc)),
                   2.0 * pi * std::sqrt(t * (t + 1.0) / (6.0 * d * d))});
  }
  return out;
}

}  // namespace contfact
