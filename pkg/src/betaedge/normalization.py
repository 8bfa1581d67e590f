"""Gamma-product constants in log-space and finite-N density assembly.

All partition-function constants overflow doubles around N = 20, so they
are carried as natural logs in mpmath floats and only exponentiated against
the weight factor at table-emission time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import mpmath
from gmpy2 import mpq

from .bigpoly import BigPoly, to_mpq
from .ensembles import EnsembleSpec, Kind
from .errors import Inadmissible, NegativePolyValue, OutOfSupport, PoleHit
from .recurrence import run_full_recurrence

DEFAULT_PRECISION_BITS = 512


@dataclass(frozen=True)
class LogConstant:
    """Natural log of a positive constant, at a stated binary precision."""

    log_value: mpmath.mpf
    precision_bits: int = DEFAULT_PRECISION_BITS
    sign: int = 1


def _loggamma(z, prec: int) -> mpmath.mpf:
    with mpmath.workprec(prec + 32):
        zf = mpmath.mpf(z) if not isinstance(z, mpq) else mpmath.mpf(int(z.numerator)) / int(z.denominator)
        if zf <= 0 and zf == mpmath.floor(zf):
            raise PoleHit(f"log-gamma pole at {zf}")
        return +mpmath.loggamma(zf)


def log_gaussian_Z(beta: int, N: int, prec: int = DEFAULT_PRECISION_BITS) -> LogConstant:
    """log G_{beta,N}, the partition function for weight exp(-beta x^2 / 2)."""
    if N < 0 or beta < 2 or beta % 2:
        raise Inadmissible(f"need even beta >= 2 and N >= 0, got beta={beta}, N={N}")
    with mpmath.workprec(prec + 32):
        half_beta = mpmath.mpf(beta) / 2
        log_g = (
            mpmath.mpf(N) / 2 * mpmath.log(2 * mpmath.pi)
            - N * (mpmath.mpf(1) / 2 + mpmath.mpf(beta) * (N - 1) / 4) * mpmath.log(beta)
        )
        total = log_g
        for j in range(2, N + 1):
            total += mpmath.loggamma(1 + j * half_beta) - mpmath.loggamma(1 + half_beta)
        return LogConstant(+total, prec)


def log_laguerre_Z(a, beta: int, N: int, prec: int = DEFAULT_PRECISION_BITS) -> LogConstant:
    """log W_{a,beta,N}, the partition function for weight x^{a beta/2} e^{-beta x/2}."""
    aq = to_mpq(a)
    if aq * beta <= -2:
        raise Inadmissible(f"need a > -2/beta, got a={aq}")
    if N < 0 or beta < 2 or beta % 2:
        raise Inadmissible(f"need even beta >= 2 and N >= 0, got beta={beta}, N={N}")
    with mpmath.workprec(prec + 32):
        af = mpmath.mpf(int(aq.numerator)) / int(aq.denominator)
        half_beta = mpmath.mpf(beta) / 2
        log_w = N * (af * half_beta + 1 + half_beta * (N - 1)) * mpmath.log(mpmath.mpf(2) / beta)
        total = log_w
        for j in range(1, N + 1):
            total += (
                mpmath.loggamma(1 + j * half_beta)
                + mpmath.loggamma(1 + (af + j - 1) * half_beta)
                - mpmath.loggamma(1 + half_beta)
            )
        return LogConstant(+total, prec)


def log_mehta_M(n: int, A, B, C, prec: int = DEFAULT_PRECISION_BITS) -> LogConstant:
    """log M_n(A, B, C), the Mehta-type product of gamma ratios."""
    with mpmath.workprec(prec + 32):
        A, B, C = (mpmath.mpf(str(v)) for v in (A, B, C))
        total = mpmath.mpf(0)
        for j in range(1, n + 1):
            total += (
                _loggamma(1 + A + B - C + j * C, prec)
                + _loggamma(1 + j * C, prec)
                - _loggamma(1 + A - C + j * C, prec)
                - _loggamma(1 + B - C + j * C, prec)
                - _loggamma(1 + C, prec)
            )
        return LogConstant(+total, prec)


@dataclass(frozen=True)
class DensityTable:
    """Density values on a grid, with full provenance metadata.

    `grid` holds the caller's coordinates (scaled, if a scaling map was
    applied), `values` the corresponding density values as mpmath floats.
    """

    grid: tuple
    values: tuple
    N: int
    meta: dict = field(default_factory=dict, compare=False)

    def values_float(self) -> list[float]:
        return [float(v) for v in self.values]

    def grid_float(self) -> list[float]:
        return [float(x) for x in self.grid]


class DensityModel:
    """Exact finite-N eigenvalue density rho_N for one ensemble.

    Caches the recurrence polynomial (n_particles = N - 1) and the
    log-space prefactor log(N) + log Z_{N-1} - log Z_N; evaluation is
    exact-rational-to-big-float Horner times the weight, all in mpmath.
    """

    def __init__(self, kind: Kind, beta: int, N: int, a=None, alpha_ratio=None,
                 prec: int = DEFAULT_PRECISION_BITS, backend: str = "rational"):
        if N < 1:
            raise Inadmissible(f"matrix size N must be >= 1, got {N}")
        self.kind = kind
        self.beta = beta
        self.N = N
        self.a = to_mpq(a) if a is not None else None
        self.alpha_ratio = to_mpq(alpha_ratio) if alpha_ratio is not None else None
        self.prec = prec
        self.spec = EnsembleSpec(kind, beta, N - 1, a=self.a, alpha_ratio=self.alpha_ratio)
        self.poly = _cached_polynomial(self.spec, backend, prec)
        if kind is Kind.GAUSSIAN:
            logZ = lambda n: log_gaussian_Z(beta, n, prec).log_value
            self._a_eff = None
        else:
            a_eff = self.a if kind is Kind.LAGUERRE_FIXED else self.alpha_ratio * N
            logZ = lambda n: log_laguerre_Z(a_eff, beta, n, prec).log_value
            self._a_eff = a_eff
        with mpmath.workprec(prec + 32):
            self.log_prefactor = +(mpmath.log(N) + logZ(N - 1) - logZ(N))

    def _log_weight(self, x: mpmath.mpf) -> mpmath.mpf:
        beta = self.beta
        if self.kind is Kind.GAUSSIAN:
            return -beta * x * x / 2
        if x <= 0:
            raise OutOfSupport(f"Laguerre weight undefined at x = {x}")
        af = mpmath.mpf(int(self._a_eff.numerator)) / int(self._a_eff.denominator)
        return beta * af / 2 * mpmath.log(x) - beta * x / 2

    def rho(self, x) -> mpmath.mpf:
        """rho_N at a raw (unscaled) coordinate."""
        with mpmath.workprec(self.prec + 32):
            xf = mpmath.mpf(x)
            pval = self.poly.eval_mpf(xf, self.prec)
            if pval <= 0:
                raise NegativePolyValue(
                    f"polynomial average nonpositive at x = {float(xf)}")
            return +(mpmath.exp(self.log_prefactor + self._log_weight(xf)) * pval)

    def rho_and_deriv(self, x) -> tuple[mpmath.mpf, mpmath.mpf]:
        """(rho_N(x), rho_N'(x)) using the exact polynomial derivative."""
        with mpmath.workprec(self.prec + 32):
            xf = mpmath.mpf(x)
            pval = self.poly.eval_mpf(xf, self.prec)
            dval = self.poly.derivative().eval_mpf(xf, self.prec)
            if pval <= 0:
                raise NegativePolyValue(
                    f"polynomial average nonpositive at x = {float(xf)}")
            w = mpmath.exp(self.log_prefactor + self._log_weight(xf))
            if self.kind is Kind.GAUSSIAN:
                dlogw = -self.beta * xf
            else:
                af = mpmath.mpf(int(self._a_eff.numerator)) / int(self._a_eff.denominator)
                dlogw = self.beta * af / (2 * xf) - mpmath.mpf(self.beta) / 2
            return +(w * pval), +(w * (dlogw * pval + dval))

    def metadata(self) -> dict:
        meta = {
            "ensemble": self.kind.value,
            "beta": self.beta,
            "N": self.N,
            "precision_bits": self.prec,
        }
        if self.a is not None:
            meta["a"] = str(self.a)
        if self.alpha_ratio is not None:
            meta["alpha_ratio"] = str(self.alpha_ratio)
        return meta


@lru_cache(maxsize=128)
def _cached_polynomial(spec: EnsembleSpec, backend: str, prec: int) -> BigPoly:
    return run_full_recurrence(spec, backend=backend, precision_bits=prec)


def density(model: DensityModel, grid: Sequence) -> DensityTable:
    """Tabulate rho_N over raw coordinates (scaling-agnostic)."""
    with mpmath.workprec(model.prec + 32):
        xs = tuple(mpmath.mpf(x) for x in grid)
        vals = tuple(model.rho(x) for x in xs)
    return DensityTable(xs, vals, model.N, meta=model.metadata())
