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

"""Smoke tests for the Python bindings."""

import math

import numpy as np
import pytest

import contfact


def test_factor_coefficients():
    assert contfact.factor_coeff(2) == pytest.approx(0.375)
    assert contfact.counting_coeffs(3) == pytest.approx([1.0, 0.5, 0.375])
    assert contfact.factor_coeff(10) == pytest.approx(math.comb(20, 10) / 4**10)


def test_product_is_all_ones_lower_triangle():
    product = contfact.reconstruct_product(64)
    np.testing.assert_allclose(product, np.tril(np.ones((64, 64))), atol=1e-9)


def test_averaging_square_root():
    r = contfact.averaging_factor(32)
    m = contfact.workload("average", 32)
    np.testing.assert_allclose(r @ r, m, atol=1e-8)
    assert r[1, 0] == pytest.approx(1.0 / (2.0 + math.sqrt(2.0)))


def test_dry_run_counter_and_average():
    counter = contfact.FactorizationCounter(4, sigma_zero=True)
    assert [counter.step(x) for x in (1, 1, 0, 1)] == pytest.approx([1, 2, 2, 3])
    avg = contfact.RunningAverage(3, sigma_zero=True)
    assert [avg.step(x) for x in (1, 0, 1)] == pytest.approx([1, 0.5, 2 / 3])


def test_noisy_counter_is_seeded():
    a = contfact.FactorizationCounter(16, seed=5)
    b = contfact.FactorizationCounter(16, seed=5)
    assert [a.step(1) for _ in range(16)] == [b.step(1) for _ in range(16)]


def test_constants_and_bounds():
    assert contfact.gaussian_constant(0.8, 1e-10) == pytest.approx(8.522856, rel=1e-6)
    assert contfact.counting_norm_bound(2) == pytest.approx(1.0)
    assert contfact.gamma_hat(2) == pytest.approx(math.sqrt(2.0))
    lower, exact, upper = contfact.partial_zeta_bounds(10_000)
    assert lower <= exact <= upper
    assert contfact.mathias_bounds(2)["ours_upper"] == pytest.approx(1.0)


def test_unsupported_regime_is_value_error():
    with pytest.raises(ValueError):
        contfact.gaussian_constant(1.5, 1e-6)


def test_run_experiment_and_bounds_table():
    csv = contfact.run_experiment("count", 8, sigma_zero=True)
    rows = [line for line in csv.splitlines() if line and not line.startswith("#")]
    assert rows[0].startswith("t,")
    assert len(rows) == 9
    table = contfact.bounds_table([256, 1024])
    assert "gap_upper" in table
