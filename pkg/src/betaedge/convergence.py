"""Convergence diagnostics: successive differences, deviation-from-limit
curves, the N^{-1/3} derivative-correction comparison, and rate fits."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath
import numpy as np

from .ensembles import Kind
from .errors import BetaUnsupported, DegenerateFit, GridMismatch, Inadmissible
from .normalization import DensityModel, DensityTable
from .oracles import rho_limit_beta2
from .scaling import ScalingCase, ScalingMap, k_sharp

DEFAULT_GRID = (-6.0, 3.0, 0.05)


def default_grid() -> list[float]:
    lo, hi, step = DEFAULT_GRID
    n = int(round((hi - lo) / step))
    return [lo + i * step for i in range(n + 1)]


@dataclass
class CorrectionSeries:
    """Deviation curves across an N-sweep plus a fitted rate exponent."""

    grid: tuple
    entries: list  # list of (N, deviation vector)
    fitted_exponent: float = float("nan")
    fit_residual: float = float("nan")
    meta: dict = field(default_factory=dict)


def _require_same_grid(a: DensityTable, b: DensityTable) -> None:
    if len(a.grid) != len(b.grid) or any(
            float(x) != float(y) for x, y in zip(a.grid, b.grid)):
        raise GridMismatch("density tables must share the same scaled grid")


def successive_difference(table_a: DensityTable, table_b: DensityTable) -> list[mpmath.mpf]:
    """(1/N1^{2/3} - 1/N2^{2/3})^{-1} (rho-scaled_{N1} - rho-scaled_{N2}).

    Each table must be built with its own N-dependent scaling map on an
    identical scaled grid; the prefactor turns the gap into an estimate of
    the N^{-2/3} correction coefficient with its own sign: for tables of
    the form L(x) + c(x) N^{-2/3} the output is c(x) pointwise.
    """
    _require_same_grid(table_a, table_b)
    n1, n2 = table_a.N, table_b.N
    if n1 == n2:
        raise GridMismatch("successive difference needs two distinct N values")
    with mpmath.workprec(256):
        pref = 1 / (mpmath.mpf(n1) ** mpmath.mpf("-2/3") - mpmath.mpf(n2) ** mpmath.mpf("-2/3"))
        return [+(pref * (va - vb)) for va, vb in zip(table_a.values, table_b.values)]


def deviation_from_limit(table: DensityTable, prec: int = 256) -> list[mpmath.mpf]:
    """N^{2/3} (scaled density - Airy-kernel limit), pointwise; beta=2 only."""
    if table.meta.get("beta") != 2:
        raise BetaUnsupported("deviation_from_limit is defined for beta = 2 only")
    with mpmath.workprec(prec):
        n23 = mpmath.mpf(table.N) ** mpmath.mpf("2/3")
        return [+(n23 * (v - rho_limit_beta2(x, prec)))
                for x, v in zip(table.grid, table.values)]


def fit_rate(points: Sequence[tuple[int, float]]) -> tuple[float, float]:
    """OLS slope of log|deviation| against log N, with RMS residual."""
    if len(points) < 3:
        raise DegenerateFit(f"rate fit needs >= 3 points, got {len(points)}")
    ns = [n for n, _ in points]
    if len(set(ns)) != len(ns):
        raise DegenerateFit("repeated N values in rate fit")
    devs = [abs(float(d)) for _, d in points]
    if any(d <= 0 for d in devs):
        raise DegenerateFit("nonpositive deviations in rate fit")
    logn = np.log(np.asarray(ns, dtype=float))
    logd = np.log(np.asarray(devs))
    slope, intercept = np.polyfit(logn, logd, 1)
    resid = logd - (slope * logn + intercept)
    return float(slope), float(np.sqrt(np.mean(resid ** 2)))


def richardson_limit(n1: int, d1, n2: int, d2, exponent: float) -> mpmath.mpf:
    """Two-point extrapolated limit under the ansatz d_N = L + c N^{-exponent}."""
    if n1 == n2:
        raise DegenerateFit("Richardson extrapolation needs distinct N values")
    with mpmath.workprec(256):
        t1 = mpmath.mpf(n1) ** mpmath.mpf(-exponent)
        t2 = mpmath.mpf(n2) ** mpmath.mpf(-exponent)
        return +((mpmath.mpf(d1) * t2 - mpmath.mpf(d2) * t1) / (t2 - t1))


def fit_pair_rate(ns: Sequence[int], values: Sequence, e_bounds=(0.05, 2.0)) -> float:
    """Rate exponent from consecutive differences, no limit estimate needed.

    Fits e in d_N = L + c N^{-e} by least squares on
    log|d_{N_i} - d_{N_{i+1}}| = log|c| + log(N_i^{-e} - N_{i+1}^{-e}).
    """
    if len(ns) < 3:
        raise DegenerateFit("pair-rate fit needs >= 3 N values")
    diffs = np.array([abs(float(values[i] - values[i + 1])) for i in range(len(ns) - 1)])
    if np.any(diffs <= 0):
        raise DegenerateFit("degenerate consecutive differences")
    logd = np.log(diffs)

    def sse(e: float) -> float:
        model = np.log([float(ns[i]) ** -e - float(ns[i + 1]) ** -e
                        for i in range(len(ns) - 1)])
        resid = logd - model
        resid -= resid.mean()  # profile out log|c|
        return float(np.dot(resid, resid))

    from scipy.optimize import minimize_scalar
    res = minimize_scalar(sse, bounds=e_bounds, method="bounded")
    return float(res.x)


def deriv_correction(model: DensityModel, centred: ScalingMap, primed: ScalingMap,
                     grid: Sequence) -> tuple[list[mpmath.mpf], list[mpmath.mpf]]:
    """The scaled N^{-1/3} correction and its derivative comparison curve.

    Returns (F, C) with
      F(x) = (N^{1/3}/k#) * scale * (rho_N(s'_x) - rho_N(s_{x,beta}))
      C(x) = -scale^2 * rho_N'(s_{x,beta})
    where s' is the uncentred/primed map and s the centred one.  C is the
    negative derivative of the scaled density, from the exact polynomial
    derivative and the weight product rule.
    """
    if centred.N != model.N or primed.N != model.N:
        raise Inadmissible("scaling maps must match the model's N")
    k = k_sharp(centred.case, model.beta, a=centred.a, alpha_ratio=centred.alpha_ratio,
                prec=model.prec)
    with mpmath.workprec(model.prec + 32):
        n13 = mpmath.mpf(model.N) ** mpmath.mpf("1/3")
        f_curve, c_curve = [], []
        for x in grid:
            sp = primed.apply(x)
            sc = centred.apply(x)
            rho_c, drho_c = model.rho_and_deriv(sc)
            rho_p = model.rho(sp)
            f_curve.append(+(n13 / k * centred.scale * (rho_p - rho_c)))
            c_curve.append(+(-(centred.scale ** 2) * drho_c))
    return f_curve, c_curve
