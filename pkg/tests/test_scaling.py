import math

import mpmath
import numpy as np
import pytest
from gmpy2 import mpq

from betaedge.ensembles import Kind
from betaedge.errors import Inadmissible, ZeroK
from betaedge.normalization import DensityModel
from betaedge.scaling import (
    ScalingCase,
    b_constant,
    build_scaling,
    k_sharp,
    scaled_density,
)


class TestBConstant:
    def test_alpha_zero(self):
        assert float(b_constant(0)) == pytest.approx(2.0, rel=1e-15)

    def test_alpha_three(self):
        assert float(b_constant(3)) == pytest.approx(81 / 16, rel=1e-15)

    def test_alpha_ten(self):
        want = (1 / math.sqrt(11) + 1) * ((math.sqrt(11) + 1) / 2) ** 3
        assert float(b_constant(10)) == pytest.approx(want, rel=1e-15)
        assert float(b_constant(10)) == pytest.approx(13.0855, abs=5e-5)


class TestKSharp:
    def test_gaussian_beta6(self):
        val = k_sharp(ScalingCase.GAUSSIAN_CENTRED, 6)
        assert float(val) == pytest.approx(1 / 3, rel=1e-15)

    def test_laguerre_fixed_a_half(self):
        val = k_sharp(ScalingCase.LAGUERRE_FIXED_CENTRED, 4, a=mpq(1, 2))
        assert float(val) == pytest.approx(0.5 / 2 ** (1 / 3), rel=1e-12)
        assert float(val) == pytest.approx(0.39685, abs=5e-6)

    def test_gaussian_beta2_vanishes(self):
        with pytest.raises(ZeroK):
            k_sharp(ScalingCase.GAUSSIAN_CENTRED, 2)

    def test_proportional(self):
        # (1/(2 b^{1/3})) * (alpha/sqrt(1+alpha)) * (1/2 - 1/beta)
        alpha, beta = 10, 6
        b = float(b_constant(alpha))
        want = (1 / (2 * b ** (1 / 3))) * (alpha / math.sqrt(1 + alpha)) * (0.5 - 1 / beta)
        got = k_sharp(ScalingCase.LAGUERRE_PROPORTIONAL_CENTRED, beta,
                      alpha_ratio=alpha)
        assert float(got) == pytest.approx(want, rel=1e-12)


class TestBuildScaling:
    def test_gaussian_uncentred_N1(self):
        m = build_scaling(ScalingCase.GAUSSIAN_UNCENTRED, 1, 2)
        assert float(m.apply(0)) == pytest.approx(math.sqrt(2), rel=1e-15)
        assert float(m.scale) == pytest.approx(1 / math.sqrt(2), rel=1e-15)

    def test_gaussian_centred_shift(self):
        # centred offset exceeds uncentred by (1/2 - 1/beta)/sqrt(2N)
        N, beta = 7, 6
        u = build_scaling(ScalingCase.GAUSSIAN_UNCENTRED, N, beta)
        c = build_scaling(ScalingCase.GAUSSIAN_CENTRED, N, beta)
        assert float(c.scale) == pytest.approx(float(u.scale), rel=1e-15)
        assert float(c.offset - u.offset) == pytest.approx(
            (0.5 - 1 / beta) / math.sqrt(2 * N), rel=1e-12)
        # equivalently (1/2 - 1/beta) * scale * N^{-1/3}
        assert float(c.offset - u.offset) == pytest.approx(
            (0.5 - 1 / beta) * float(u.scale) * N ** (-1 / 3), rel=1e-12)

    def test_laguerre_fixed_N1(self):
        m = build_scaling(ScalingCase.LAGUERRE_FIXED_UNCENTRED, 1, 2, a=0)
        assert float(m.apply(0)) == pytest.approx(4.0, rel=1e-15)
        assert float(m.scale) == pytest.approx(2 * 2 ** (1 / 3), rel=1e-15)

    def test_laguerre_fixed_centred_equals_uncentred(self):
        u = build_scaling(ScalingCase.LAGUERRE_FIXED_UNCENTRED, 9, 4, a="1/2")
        c = build_scaling(ScalingCase.LAGUERRE_FIXED_CENTRED, 9, 4, a="1/2")
        assert float(u.offset) == float(c.offset)
        assert float(u.scale) == float(c.scale)

    def test_laguerre_primed_offset(self):
        p = build_scaling(ScalingCase.LAGUERRE_FIXED_PRIMED, 9, 4, a="1/2")
        u = build_scaling(ScalingCase.LAGUERRE_FIXED_UNCENTRED, 9, 4, a="1/2")
        assert float(u.offset - p.offset) == pytest.approx(2 * 0.5, rel=1e-13)
        assert float(p.offset) == pytest.approx(36.0, rel=1e-15)

    def test_proportional_offset_and_scale(self):
        N, beta, alpha = 5, 6, 10
        u = build_scaling(ScalingCase.LAGUERRE_PROPORTIONAL_UNCENTRED, N, beta,
                          alpha_ratio=alpha)
        want_off = N * (math.sqrt(1 + alpha) + 1) ** 2
        assert float(u.offset) == pytest.approx(want_off, rel=1e-13)
        b = float(b_constant(alpha))
        assert float(u.scale) == pytest.approx(2 * (b * N) ** (1 / 3), rel=1e-13)
        c = build_scaling(ScalingCase.LAGUERRE_PROPORTIONAL_CENTRED, N, beta,
                          alpha_ratio=alpha)
        assert float(c.offset - u.offset) == pytest.approx(
            (alpha / math.sqrt(1 + alpha)) * (0.5 - 1 / beta), rel=1e-12)

    def test_affine_roundtrip(self):
        m = build_scaling(ScalingCase.GAUSSIAN_CENTRED, 12, 4)
        for x in (-3.0, 0.0, 2.5):
            assert float(m.invert(m.apply(x))) == pytest.approx(x, abs=1e-12)

    def test_proportional_degenerates_to_fixed(self):
        # alpha -> 0 with a = alpha * N: offsets agree linearly in alpha
        N, beta = 6, 2
        gaps = []
        for alpha in (1e-4, 1e-5):
            p = build_scaling(ScalingCase.LAGUERRE_PROPORTIONAL_UNCENTRED, N,
                              beta, alpha_ratio=mpq(alpha))
            f = build_scaling(ScalingCase.LAGUERRE_FIXED_UNCENTRED, N, beta,
                              a=mpq(alpha) * N)
            gaps.append(abs(float(p.offset - f.offset)))
        assert gaps[1] < gaps[0] / 5
        assert gaps[1] < 1e-3

    def test_missing_parameters_rejected(self):
        with pytest.raises(Inadmissible):
            build_scaling(ScalingCase.LAGUERRE_FIXED_CENTRED, 5, 2)
        with pytest.raises(Inadmissible):
            build_scaling(ScalingCase.LAGUERRE_PROPORTIONAL_CENTRED, 5, 2)


class TestScaledDensity:
    def test_jacobian(self):
        model = DensityModel(Kind.GAUSSIAN, 2, 4)
        m = build_scaling(ScalingCase.GAUSSIAN_UNCENTRED, 4, 2)
        grid = np.array([-1.0, 0.0, 1.0])
        table = scaled_density(model, m, grid)
        for x, v in zip(grid, table.values):
            want = m.scale * model.rho(m.apply(x))
            assert float(v) == pytest.approx(float(want), rel=1e-14)
        assert table.meta["scaling_case"] == "gaussian-uncentred"

    def test_metadata_carries_scaling(self):
        model = DensityModel(Kind.LAGUERRE_FIXED, 4, 4, a="1/2")
        m = build_scaling(ScalingCase.LAGUERRE_FIXED_CENTRED, 4, 4, a="1/2")
        table = scaled_density(model, m, np.array([0.0]))
        assert "offset" in table.meta and "scale" in table.meta
        assert table.meta["ensemble"] == "laguerre"
