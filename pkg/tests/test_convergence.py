import math

import mpmath
import numpy as np
import pytest

from betaedge.convergence import (
    default_grid,
    deriv_correction,
    deviation_from_limit,
    fit_pair_rate,
    fit_rate,
    richardson_limit,
    successive_difference,
)
from betaedge.ensembles import Kind
from betaedge.errors import BetaUnsupported, DegenerateFit, GridMismatch
from betaedge.normalization import DensityModel, DensityTable
from betaedge.oracles import rho_limit_beta2
from betaedge.scaling import ScalingCase, build_scaling


def synthetic_table(N, grid, fn):
    values = tuple(mpmath.mpf(fn(x, N)) for x in grid)
    return DensityTable(tuple(grid), values, N, meta={"beta": 2})


class TestSuccessiveDifference:
    def test_recovers_coefficient(self):
        # v_N(x) = L(x) + c(x) N^{-2/3}: the pair difference with prefactor
        # must return c(x) exactly (up to rounding)
        grid = [-1.0, 0.0, 1.0]
        L = {-1.0: 0.3, 0.0: 0.2, 1.0: 0.1}
        c = {-1.0: -0.5, 0.0: 0.7, 1.0: 0.05}
        fn = lambda x, N: L[x] + c[x] * N ** (-2 / 3)
        t1, t2 = synthetic_table(20, grid, fn), synthetic_table(30, grid, fn)
        out = successive_difference(t1, t2)
        for x, v in zip(grid, out):
            assert float(v) == pytest.approx(c[x], rel=1e-10)

    def test_same_N_rejected(self):
        grid = [0.0]
        t = synthetic_table(10, grid, lambda x, N: 1.0)
        with pytest.raises(GridMismatch):
            successive_difference(t, t)

    def test_grid_mismatch(self):
        t1 = synthetic_table(10, [0.0, 1.0], lambda x, N: 1.0)
        t2 = synthetic_table(20, [0.0, 2.0], lambda x, N: 1.0)
        with pytest.raises(GridMismatch):
            successive_difference(t1, t2)


class TestDeviationFromLimit:
    def test_synthetic(self):
        grid = [-2.0, 0.0]
        fn = lambda x, N: float(rho_limit_beta2(x, 128)) + 0.25 * N ** (-2 / 3)
        t = synthetic_table(27, grid, fn)
        for v in deviation_from_limit(t):
            assert float(v) == pytest.approx(0.25, rel=1e-8)

    def test_beta_guard(self):
        t = DensityTable((0.0,), (mpmath.mpf(1),), 5, meta={"beta": 4})
        with pytest.raises(BetaUnsupported):
            deviation_from_limit(t)


class TestRateFits:
    def test_fit_rate_exact_power_law(self):
        pts = [(n, 7.0 * n ** (-2 / 3)) for n in (10, 20, 40, 80)]
        slope, resid = fit_rate(pts)
        assert slope == pytest.approx(-2 / 3, abs=1e-12)
        assert resid < 1e-12

    def test_fit_rate_guards(self):
        with pytest.raises(DegenerateFit):
            fit_rate([(10, 1.0), (20, 0.5)])
        with pytest.raises(DegenerateFit):
            fit_rate([(10, 1.0), (10, 0.5), (20, 0.2)])
        with pytest.raises(DegenerateFit):
            fit_rate([(10, 1.0), (20, 0.0), (30, 0.1)])

    def test_richardson_exact(self):
        # d_N = 3 + 5 N^{-2/3}
        d = lambda n: 3 + 5 * n ** (-2 / 3)
        lim = richardson_limit(20, d(20), 40, d(40), 2 / 3)
        assert float(lim) == pytest.approx(3.0, rel=1e-12)
        with pytest.raises(DegenerateFit):
            richardson_limit(20, 1.0, 20, 1.0, 2 / 3)

    def test_fit_pair_rate_exact(self):
        ns = [20, 30, 40, 50]
        vals = [1.5 + 4.0 * n ** (-0.66) for n in ns]
        assert fit_pair_rate(ns, vals) == pytest.approx(0.66, abs=1e-6)

    def test_fit_pair_rate_guard(self):
        with pytest.raises(DegenerateFit):
            fit_pair_rate([10, 20], [1.0, 0.5])


class TestDerivCorrection:
    def test_comparison_matches_finite_difference(self):
        # C(x) = -scale^2 rho_N'(offset + scale x) against a 5-point stencil
        model = DensityModel(Kind.GAUSSIAN, 6, 10)
        centred = build_scaling(ScalingCase.GAUSSIAN_CENTRED, 10, 6)
        primed = build_scaling(ScalingCase.GAUSSIAN_UNCENTRED, 10, 6)
        grid = [-2.0, -0.5, 1.0]
        _, comparison = deriv_correction(model, centred, primed, grid)
        h = 1e-3
        for x, c in zip(grid, comparison):
            s = float(centred.apply(x))
            sc = float(centred.scale)
            vals = [float(model.rho(s + k * h)) for k in (-2, -1, 1, 2)]
            dfd = (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * h)
            assert float(c) == pytest.approx(-sc * sc * dfd, rel=1e-6)

    def test_mismatched_N_rejected(self):
        from betaedge.errors import Inadmissible
        model = DensityModel(Kind.GAUSSIAN, 6, 10)
        centred = build_scaling(ScalingCase.GAUSSIAN_CENTRED, 11, 6)
        primed = build_scaling(ScalingCase.GAUSSIAN_UNCENTRED, 10, 6)
        with pytest.raises(Inadmissible):
            deriv_correction(model, centred, primed, [0.0])


class TestDefaultGrid:
    def test_span_and_step(self):
        g = default_grid()
        assert g[0] == pytest.approx(-6.0)
        assert g[-1] == pytest.approx(3.0)
        assert g[1] - g[0] == pytest.approx(0.05)
