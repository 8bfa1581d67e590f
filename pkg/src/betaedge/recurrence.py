"""Differential-difference recurrences for the auxiliary polynomials I_p.

The Jacobi-weight recurrence is the master equation; its Gaussian and
Laguerre degenerations advance the polynomial average of prod (x - x_l)^beta
one elementary-symmetric index at a time.  Sweeping p = 0..N at exponent
stage alpha, then restarting with I_0 <- I_N at alpha + 1, yields after
`beta` sweeps the unnormalized average as an exact polynomial (the constant
initial value, a Selberg gamma-product, is factored out and tracked in
log-space by the normalization module).
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Callable, Optional

import gmpy2
from gmpy2 import mpq

from .bigpoly import BigPoly, as_float_backend, to_mpq
from .ensembles import EnsembleSpec, Kind
from .errors import IndexOutOfRange, StageOverflow, ZeroPivot


@dataclass
class RecurrenceCursor:
    """Sliding two-term window of the recurrence at stage (alpha_index, p)."""

    alpha_index: int
    p: int
    prev: BigPoly  # I_{p-1}; unused at p = 0
    curr: BigPoly  # I_p


def elementary_symmetric(values, p: int):
    """e_p of the given rationals, by the generating-product recurrence."""
    vals = [to_mpq(v) for v in values]
    if p < 0 or p > len(vals):
        raise IndexOutOfRange(f"e_{p} undefined for {len(vals)} values")
    # e[k] after processing j values = e_k(v_1..v_j)
    e = [mpq(1)] + [mpq(0)] * p
    for v in vals:
        for k in range(min(p, len(e) - 1), 0, -1):
            e[k] = e[k] + v * e[k - 1]
    return e[p]


def _check_step(p: int, N: int, pivot) -> None:
    if p >= N:
        raise StageOverflow(f"p = {p} >= N = {N}")
    if pivot == 0:
        raise ZeroPivot(f"(N - p) * E_p vanished at p = {p}")


def jacobi_dde_step(cursor: RecurrenceCursor, lambda1, lambda2, lam, alpha, N: int) -> BigPoly:
    """One step of the master differential-difference equation.

    (N-p) E_p I_{p+1} = (A_p x + B_p) I_p - x(x-1) I_p' + D_p x(x-1) I_{p-1}
    """
    lambda1, lambda2, lam, alpha = map(to_mpq, (lambda1, lambda2, lam, alpha))
    p = cursor.p
    A = (N - p) * (lambda1 + lambda2 + 2 * lam * (N - p - 1) + 2 * alpha)
    B = (p - N) * (lambda1 + alpha + lam * (N - p - 1))
    D = p * (lam * (N - p) + alpha)
    E = lambda1 + lambda2 + 1 + lam * (2 * N - p - 2) + alpha
    pivot = (N - p) * E
    _check_step(p, N, pivot)
    Ip, dIp = cursor.curr, cursor.curr.derivative()
    # x(x-1) f = x^2 f - x f
    xxm1 = lambda f: f.mul_x().mul_x() - f.mul_x()
    rhs = Ip.mul_x().scale(A) + Ip.scale(B) - xxm1(dIp)
    if D != 0:
        rhs = rhs + xxm1(cursor.prev).scale(D)
    return rhs.scale(1 / pivot)


def gaussian_step(cursor: RecurrenceCursor, lam, alpha, N: int) -> BigPoly:
    """Gaussian-weight degeneration of the master recurrence.

    lam(N-p) G_{p+1} = lam(N-p) x G_p + (1/2) G_p' - (p(lam(N-p)+alpha)/2) G_{p-1}
    """
    lam, alpha = to_mpq(lam), to_mpq(alpha)
    p = cursor.p
    pivot = lam * (N - p)
    _check_step(p, N, pivot)
    rhs = cursor.curr.mul_x().scale(pivot) + cursor.curr.derivative().scale(mpq(1, 2))
    D = p * (lam * (N - p) + alpha)
    if D != 0:
        rhs = rhs - cursor.prev.scale(D / 2)
    return rhs.scale(1 / pivot)


def laguerre_step(cursor: RecurrenceCursor, lam, lambda1, alpha, N: int) -> BigPoly:
    """Laguerre-weight degeneration of the master recurrence.

    lam(N-p) L_{p+1} = (lam(N-p) x + B_p) L_p + x L_p' - D_p x L_{p-1},
    with B_p, D_p evaluated at lambda1 = a*beta/2.
    """
    lam, lambda1, alpha = to_mpq(lam), to_mpq(lambda1), to_mpq(alpha)
    p = cursor.p
    pivot = lam * (N - p)
    _check_step(p, N, pivot)
    B = (p - N) * (lambda1 + alpha + lam * (N - p - 1))
    D = p * (lam * (N - p) + alpha)
    rhs = (
        cursor.curr.mul_x().scale(pivot)
        + cursor.curr.scale(B)
        + cursor.curr.derivative().mul_x()
    )
    if D != 0:
        rhs = rhs - cursor.prev.mul_x().scale(D)
    return rhs.scale(1 / pivot)


def run_full_recurrence(
    spec: EnsembleSpec,
    backend: str = "rational",
    precision_bits: int = 512,
    progress: Optional[Callable[[int, int], None]] = None,
) -> BigPoly:
    """Iterate the recurrence to the final polynomial of degree beta * n.

    Starts from the constant 1 (the Selberg constant is factored out) and
    sweeps p = 0..n-1 at each exponent stage alpha = 1..beta, using the
    continuation I_0|_{alpha+1} = I_N|_{alpha}.  For n_particles = 0 the
    result is the constant 1.
    """
    n = spec.n_particles
    if n == 0:
        return BigPoly.one()
    lam = spec.lam
    if spec.kind is Kind.GAUSSIAN:
        step = lambda cur, alpha: gaussian_step(cur, lam, alpha, n)
    else:
        lambda1 = lam * spec.effective_a()
        step = lambda cur, alpha: laguerre_step(cur, lam, lambda1, alpha, n)

    def sweep_all() -> BigPoly:
        curr = BigPoly.one()
        for alpha in range(1, spec.beta + 1):
            prev = BigPoly.zero()
            cursor = RecurrenceCursor(alpha, 0, prev, curr)
            for p in range(n):
                cursor.p = p
                nxt = step(cursor, alpha)
                cursor.prev, cursor.curr = cursor.curr, nxt
            if progress is not None:
                progress(alpha, spec.beta)
            curr = cursor.curr
        return curr

    if backend == "rational":
        return sweep_all()
    if backend == "bigfloat":
        with gmpy2.context(precision=precision_bits):
            one = BigPoly((gmpy2.mpfr(1),))
            # rerun with mpfr initial value; rational parameters coerce on contact
            curr = one
            for alpha in range(1, spec.beta + 1):
                cursor = RecurrenceCursor(alpha, 0, BigPoly.zero(), curr)
                for p in range(n):
                    cursor.p = p
                    nxt = step(cursor, alpha)
                    cursor.prev, cursor.curr = cursor.curr, nxt
                if progress is not None:
                    progress(alpha, spec.beta)
                curr = cursor.curr
            return curr
    raise ValueError(f"unknown backend {backend!r}")


def dump_coefficients(poly: BigPoly, stream=None) -> None:
    """Debug dump: one exact coefficient per line, lowest power first."""
    stream = stream or sys.stderr
    for line in poly.coeff_strings():
        print(line, file=stream)
