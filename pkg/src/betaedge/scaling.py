"""Soft-edge affine changes of variable, Jacobians, and the shift constants.

A ScalingMap is a pure affine record s(x) = offset + scale * x; density
tables never know which scaling produced their grid, so the convergence
module can mix scalings freely.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

import mpmath

from .bigpoly import to_mpq
from .ensembles import Kind
from .errors import Inadmissible, OutOfSupport, ZeroK
from .normalization import DEFAULT_PRECISION_BITS, DensityModel, DensityTable


class ScalingCase(enum.Enum):
    GAUSSIAN_UNCENTRED = "gaussian-uncentred"
    GAUSSIAN_CENTRED = "gaussian-centred"
    LAGUERRE_FIXED_UNCENTRED = "laguerre-uncentred"
    LAGUERRE_FIXED_PRIMED = "laguerre-primed"
    LAGUERRE_FIXED_CENTRED = "laguerre-centred"
    LAGUERRE_PROPORTIONAL_UNCENTRED = "laguerre-proportional-uncentred"
    LAGUERRE_PROPORTIONAL_CENTRED = "laguerre-proportional-centred"


_GAUSSIAN_CASES = {ScalingCase.GAUSSIAN_UNCENTRED, ScalingCase.GAUSSIAN_CENTRED}
_FIXED_CASES = {
    ScalingCase.LAGUERRE_FIXED_UNCENTRED,
    ScalingCase.LAGUERRE_FIXED_PRIMED,
    ScalingCase.LAGUERRE_FIXED_CENTRED,
}
_PROP_CASES = {
    ScalingCase.LAGUERRE_PROPORTIONAL_UNCENTRED,
    ScalingCase.LAGUERRE_PROPORTIONAL_CENTRED,
}


@dataclass(frozen=True)
class ScalingMap:
    case: ScalingCase
    N: int
    beta: int
    offset: mpmath.mpf
    scale: mpmath.mpf
    a: Optional[object] = None
    alpha_ratio: Optional[object] = None
    b: Optional[mpmath.mpf] = None

    def apply(self, x) -> mpmath.mpf:
        return self.offset + self.scale * mpmath.mpf(x)

    def invert(self, s) -> mpmath.mpf:
        return (mpmath.mpf(s) - self.offset) / self.scale

    def metadata(self) -> dict:
        meta = {
            "scaling_case": self.case.value,
            "offset": mpmath.nstr(self.offset, 40),
            "scale": mpmath.nstr(self.scale, 40),
        }
        if self.b is not None:
            meta["b"] = mpmath.nstr(self.b, 40)
        try:
            meta["k_sharp"] = mpmath.nstr(
                k_sharp(self.case, self.beta, a=self.a, alpha_ratio=self.alpha_ratio), 40)
        except ZeroK:
            meta["k_sharp"] = "0"
        return meta


def b_constant(alpha_ratio, prec: int = DEFAULT_PRECISION_BITS) -> mpmath.mpf:
    """b = (1/sqrt(1+alpha) + 1) * ((sqrt(1+alpha) + 1)/2)^3."""
    aq = to_mpq(alpha_ratio)
    if aq < 0:
        raise Inadmissible(f"alpha_ratio must be >= 0, got {aq}")
    with mpmath.workprec(prec + 16):
        al = mpmath.mpf(int(aq.numerator)) / int(aq.denominator)
        r = mpmath.sqrt(1 + al)
        return +((1 / r + 1) * ((r + 1) / 2) ** 3)


def build_scaling(case: ScalingCase, N: int, beta: int, a=None, alpha_ratio=None,
                  prec: int = DEFAULT_PRECISION_BITS) -> ScalingMap:
    """Populate offset and scale for the requested soft-edge variable."""
    if N < 1:
        raise Inadmissible(f"N must be >= 1, got {N}")
    if beta < 2 or beta % 2:
        raise Inadmissible(f"beta must be even and >= 2, got {beta}")
    with mpmath.workprec(prec + 16):
        Nf = mpmath.mpf(N)
        shift = mpmath.mpf(1) / 2 - mpmath.mpf(1) / beta
        b = None
        if case in _GAUSSIAN_CASES:
            if a is not None or alpha_ratio is not None:
                raise Inadmissible("Gaussian scaling takes no a / alpha_ratio")
            offset = mpmath.sqrt(2 * Nf)
            scale = 1 / (mpmath.sqrt(2) * Nf ** (mpmath.mpf(1) / 6))
            if case is ScalingCase.GAUSSIAN_CENTRED:
                offset += shift / mpmath.sqrt(2 * Nf)
        elif case in _FIXED_CASES:
            if a is None:
                raise Inadmissible("fixed-Laguerre scaling requires a")
            aq = to_mpq(a)
            af = mpmath.mpf(int(aq.numerator)) / int(aq.denominator)
            scale = 2 * (2 * Nf) ** (mpmath.mpf(1) / 3)
            if case is ScalingCase.LAGUERRE_FIXED_PRIMED:
                offset = 4 * Nf
            else:
                # optimally centred coincides with the uncentred variable here
                offset = 4 * Nf + 2 * af
        elif case in _PROP_CASES:
            if alpha_ratio is None:
                raise Inadmissible("proportional-Laguerre scaling requires alpha_ratio")
            aq = to_mpq(alpha_ratio)
            if aq <= 0:
                raise Inadmissible(f"alpha_ratio must be > 0, got {aq}")
            al = mpmath.mpf(int(aq.numerator)) / int(aq.denominator)
            b = b_constant(aq, prec)
            r = mpmath.sqrt(1 + al)
            offset = Nf * (r + 1) ** 2
            scale = 2 * (b * Nf) ** (mpmath.mpf(1) / 3)
            if case is ScalingCase.LAGUERRE_PROPORTIONAL_CENTRED:
                offset += al / r * shift
        else:
            raise Inadmissible(f"unknown case {case}")
        return ScalingMap(case, N, beta, +offset, +scale, a=a, alpha_ratio=alpha_ratio,
                          b=(+b if b is not None else None))


def k_sharp(case: ScalingCase, beta: int, a=None, alpha_ratio=None,
            prec: int = DEFAULT_PRECISION_BITS) -> mpmath.mpf:
    """Shift constant k#(beta) for the derivative-comparison diagnostic."""
    with mpmath.workprec(prec + 16):
        shift = mpmath.mpf(1) / 2 - mpmath.mpf(1) / beta
        if case in _GAUSSIAN_CASES:
            val = shift
        elif case in _FIXED_CASES:
            if a is None:
                raise Inadmissible("fixed-Laguerre k# requires a")
            aq = to_mpq(a)
            val = (mpmath.mpf(int(aq.numerator)) / int(aq.denominator)) / mpmath.cbrt(2)
        elif case in _PROP_CASES:
            if alpha_ratio is None:
                raise Inadmissible("proportional-Laguerre k# requires alpha_ratio")
            aq = to_mpq(alpha_ratio)
            al = mpmath.mpf(int(aq.numerator)) / int(aq.denominator)
            b = b_constant(aq, prec)
            val = al / mpmath.sqrt(1 + al) * shift / (2 * mpmath.cbrt(b))
        else:
            raise Inadmissible(f"unknown case {case}")
        if val == 0:
            raise ZeroK(f"k#({beta}) vanishes for {case.value}")
        return +val


def scaled_density(model: DensityModel, scaling: ScalingMap, grid: Sequence) -> DensityTable:
    """Jacobian-multiplied density scale * rho_N(offset + scale * x)."""
    if scaling.N != model.N or scaling.beta != model.beta:
        raise Inadmissible("scaling map and density model disagree on (N, beta)")
    with mpmath.workprec(model.prec + 32):
        xs = tuple(mpmath.mpf(x) for x in grid)
        vals = []
        for x in xs:
            s = scaling.apply(x)
            if model.kind is not Kind.GAUSSIAN and s <= 0:
                raise OutOfSupport(f"scaled point {float(x)} unscales to {float(s)} <= 0")
            vals.append(+(scaling.scale * model.rho(s)))
    meta = model.metadata()
    meta.update(scaling.metadata())
    return DensityTable(xs, tuple(vals), model.N, meta=meta)
