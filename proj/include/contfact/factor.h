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

// Lower-triangular factorizations of the prefix-sum and running-average
// workloads, plus the closed-form norm bounds that go with them.
//
// Indices in this header are 1-based (row i, column j, step t) to match the
// usual statement of the workload matrices; storage is 0-based internally.

#ifndef CONTFACT_FACTOR_H_
#define CONTFACT_FACTOR_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace contfact {

// Raised when a numerical routine detects a result that violates a
// mathematical invariant beyond round-off (e.g. a negative factor entry).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Default cap on the dimension of dense matrices materialized for checking.
inline constexpr int64_t kDefaultDenseLimit = 1024;

// Coefficient f(k) of the Toeplitz counting factor:
//   f(k) = 0 for k < 0, f(0) = 1, f(k) = ((2k-1)/(2k)) f(k-1).
// Equivalently f(k) = C(2k, k) / 4^k. O(k) time.
double FactorCoeff(int64_t k);

// f(0), ..., f(dim-1): the complete description of the lower-triangular
// Toeplitz matrices L = R with L[i,j] = f(i-j) and L * R = M_count.
//
// Also carries running sums of f(k)^2 so that row/column norms of every
// principal submatrix are O(1) lookups.
class FactorCoeffs {
 public:
  // Throws std::invalid_argument if dim < 1.
  static FactorCoeffs Build(int64_t dim);

  int64_t dim() const { return static_cast<int64_t>(coeffs_.size()); }
  double operator[](int64_t k) const { return coeffs_[k]; }
  std::span<const double> coeffs() const { return coeffs_; }

  // Entry (i, j) of L (equivalently R), 1-based. Zero above the diagonal.
  double Entry(int64_t i, int64_t j) const;

  // sum_{k < t} f(k)^2, i.e. the squared l2 norm of row t (or of column
  // 1 of the t x t principal submatrix). 1 <= t <= dim.
  double SquaredRowNorm(int64_t t) const { return sq_prefix_[t - 1]; }

 private:
  explicit FactorCoeffs(std::vector<double> coeffs);

  std::vector<double> coeffs_;
  std::vector<double> sq_prefix_;
};

// Same as FactorCoeffs::Build; named after the operation it performs.
FactorCoeffs CountingFactor(int64_t dim);

// Dense L * R restricted to the leading dim x dim block, computed by brute
// force from the coefficients. Meant as a check against M_count.
// Throws std::invalid_argument if dim > coeffs.dim() or dim < 1, and
// std::length_error if dim > dense_limit.
Eigen::MatrixXd ReconstructProduct(const FactorCoeffs& coeffs, int64_t dim,
                                   int64_t dense_limit = kDefaultDenseLimit);

// Square-root factor R of M_average (R * R = M_average), lower triangular
// with nonnegative entries. Rows are solved one at a time, so the factor can
// be grown incrementally as a stream advances.
class LowerTriFactor {
 public:
  // Entries that come out in (-kClampTolerance, 0) are treated as
  // round-off and set to zero; anything more negative is an error.
  static constexpr double kClampTolerance = 1e-10;

  LowerTriFactor() = default;

  int64_t dim() const { return dim_; }

  // Solves row dim()+1. O(dim^2). Throws NumericalError on a negative entry
  // below -kClampTolerance.
  void AppendRow();

  // 1-based entry; zero above the diagonal.
  double Entry(int64_t i, int64_t j) const;
  // Row i, entries (i,1)..(i,i).
  std::span<const double> Row(int64_t i) const;

  // Squared l2 norm of row i.
  double SquaredRowNorm(int64_t i) const { return row_sq_[i - 1]; }
  // Maximum row / column l2 norm of the t x t principal submatrix.
  double MaxRowNorm(int64_t t) const { return max_row_norm_[t - 1]; }
  double MaxColNorm(int64_t t) const { return max_col_norm_[t - 1]; }

  // Number of entries clamped from (-kClampTolerance, 0) to zero.
  int64_t clamp_count() const { return clamp_count_; }

  // Packed row-major lower triangle, dim*(dim+1)/2 values.
  std::span<const double> packed() const { return entries_; }

  Eigen::MatrixXd ToDense() const;

 private:
  static int64_t Offset(int64_t i) { return (i - 1) * i / 2; }

  int64_t dim_ = 0;
  std::vector<double> entries_;
  std::vector<double> row_sq_;
  std::vector<double> col_sq_;
  std::vector<double> max_row_norm_;
  std::vector<double> max_col_norm_;
  std::vector<double> scratch_;
  int64_t clamp_count_ = 0;
};

// Builds the averaging factor for dim >= 1. Throws std::invalid_argument on
// dim < 1, NumericalError on a sign violation.
LowerTriFactor AveragingFactor(int64_t dim);

enum class WorkloadKind { kCount, kAverage };

// Implicit M_count / M_average. Entries are computed on demand.
class WorkloadMatrix {
 public:
  WorkloadMatrix(WorkloadKind kind, int64_t dim);

  WorkloadKind kind() const { return kind_; }
  int64_t dim() const { return dim_; }
  double Entry(int64_t i, int64_t j) const;
  Eigen::MatrixXd ToDense(int64_t dense_limit = kDefaultDenseLimit) const;

 private:
  WorkloadKind kind_;
  int64_t dim_;
};

// ||.||_{2->inf} (max row norm) and ||.||_{1->2} (max column norm).
struct NormPair {
  double two_to_inf;
  double one_to_two;
};

// Exact norms of the t x t principal submatrix. For the counting factor
// both equal sqrt(1 + sum_{i=1}^{t-1} f(i)^2).
NormPair RowColNorms(const FactorCoeffs& factor, int64_t t);
NormPair RowColNorms(const LowerTriFactor& factor, int64_t t);

// 1 + ln(T-1)/pi. Throws std::invalid_argument for T < 2.
double CountingNormBound(int64_t T);

// 2 T (T+1) pi^2 / (3 (2T+1)^2); approaches pi^2/6 from below.
double AveragingNormBound(int64_t T);

// (1/T) sum_{j=1}^T |csc((2j-1) pi / (2T))|. O(T).
double GammaHat(int64_t T);

struct BoundReport {
  int64_t T = 0;
  double ours_upper = 0;          // 1 + ln(T-1)/pi (1 at T = 1)
  double gamma_hat = 0;
  double mathias_lower = 0;       // (1/2 + 1/(2T)) gamma_hat
  double mathias_upper = 0;       // gamma_hat/2 + 1/2
  double exact_norm_product = 0;  // ||L||_{2->inf} ||R||_{1->2} of our factor
};

// O(T). Throws std::invalid_argument for T < 1.
BoundReport MathiasBounds(int64_t T);

struct ZetaSandwich {
  double lower;
  double exact;  // sqrt(sum_{i=1}^T 1/i^2)
  double upper;
};

ZetaSandwich PartialZetaBounds(int64_t T);

// PartialZetaBounds for T = 1..max_T in one O(max_T) pass.
std::vector<ZetaSandwich> PartialZetaTable(int64_t max_T);

}  // namespace contfact

#endif  // CONTFACT_FACTOR_H_
