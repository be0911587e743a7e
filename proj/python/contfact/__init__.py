# Copyright 2026 The Contfact Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Private continual counting with an explicit Toeplitz factorization."""

from contfact._contfact import (
    BinaryTreeCounter,
    FactorizationCounter,
    NumericalError,
    RunningAverage,
    UnsupportedRegimeError,
    averaging_factor,
    averaging_norm_bound,
    bounds_table,
    counting_coeffs,
    counting_factor_dense,
    counting_norm_bound,
    error_bound_average,
    error_bound_counting,
    factor_coeff,
    gamma_hat,
    gaussian_constant,
    local_learning_bound,
    mathias_bounds,
    partial_zeta_bounds,
    reconstruct_product,
    run_experiment,
    workload,
)

__all__ = [
    "BinaryTreeCounter",
    "FactorizationCounter",
    "NumericalError",
    "RunningAverage",
    "UnsupportedRegimeError",
    "averaging_factor",
    "averaging_norm_bound",
    "bounds_table",
    "counting_coeffs",
    "counting_factor_dense",
    "counting_norm_bound",
    "error_bound_average",
    "error_bound_counting",
    "factor_coeff",
    "gamma_hat",
    "gaussian_constant",
    "local_learning_bound",
    "mathias_bounds",
    "partial_zeta_bounds",
    "reconstruct_product",
    "run_experiment",
    "workload",
]
