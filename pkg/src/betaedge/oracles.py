"""Independent ground truth: Airy machinery, beta=2 limit and correction
functions, a Christoffel-Darboux finite-N beta=2 density, and a brute-force
quadrature oracle for tiny N.

None of these touch the recurrence engine, so agreement with it is a
genuine two-route check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import mpmath
from gmpy2 import mpq

from .bigpoly import to_mpq
from .ensembles import Kind
from .errors import BetaUnsupported, Inadmissible, RangeExceeded, TooLarge
from .normalization import DEFAULT_PRECISION_BITS, log_gaussian_Z, log_laguerre_Z

AIRY_RANGE = 40.0


@dataclass(frozen=True)
class AiryPair:
    ai: mpmath.mpf
    ai_prime: mpmath.mpf


def airy(x, prec: int = DEFAULT_PRECISION_BITS) -> AiryPair:
    """Ai(x) and Ai'(x) to at least the requested precision, |x| <= 40.

    Backed by mpmath's hypergeometric-series implementation, which handles
    the cancellation-heavy negative axis by raising its working precision
    internally; validated in the test suite against the ODE residual and
    the closed forms at 0.
    """
    if abs(float(x)) > AIRY_RANGE:
        raise RangeExceeded(f"|x| = {abs(float(x))} exceeds documented range {AIRY_RANGE}")
    with mpmath.workprec(max(prec, 128)):
        xf = mpmath.mpf(x)
        return AiryPair(+mpmath.airyai(xf), +mpmath.airyai(xf, derivative=1))


def rho_limit_beta2(x, prec: int = DEFAULT_PRECISION_BITS) -> mpmath.mpf:
    """Airy-kernel diagonal Ai'(x)^2 - x Ai(x)^2, the beta=2 edge limit."""
    pair = airy(x, prec)
    with mpmath.workprec(max(prec, 128)):
        xf = mpmath.mpf(x)
        return +(pair.ai_prime ** 2 - xf * pair.ai ** 2)


def _b_constant(alpha, prec: int) -> mpmath.mpf:
    with mpmath.workprec(max(prec, 128)):
        al = mpmath.mpf(str(alpha)) if not isinstance(alpha, mpq) else (
            mpmath.mpf(int(alpha.numerator)) / int(alpha.denominator))
        r = mpmath.sqrt(1 + al)
        return +((1 / r + 1) * ((r + 1) / 2) ** 3)


def rho_correction_beta2(case: Kind, x, alpha_ratio=None,
                         prec: int = DEFAULT_PRECISION_BITS) -> mpmath.mpf:
    """The N^{-2/3} correction coefficient to the beta=2 edge density."""
    pair = airy(x, prec)
    with mpmath.workprec(max(prec, 128)):
        xf = mpmath.mpf(x)
        ai, aip = pair.ai, pair.ai_prime
        if case is Kind.GAUSSIAN:
            val = -(3 * xf**2 * ai**2 - 2 * xf * aip**2 - 3 * ai * aip) / 20
        elif case is Kind.LAGUERRE_FIXED:
            val = mpmath.cbrt(2) / 10 * (3 * xf**2 * ai**2 - 2 * xf * aip**2 + 2 * ai * aip)
        elif case is Kind.LAGUERRE_PROPORTIONAL:
            if alpha_ratio is None or float(alpha_ratio) <= 0:
                raise Inadmissible("proportional case needs alpha_ratio > 0")
            al = to_mpq(alpha_ratio)
            alf = mpmath.mpf(int(al.numerator)) / int(al.denominator)
            b = _b_constant(al, prec)
            r = mpmath.sqrt(1 + alf)
            a2 = alf**2 / (1 + alf)
            val = (
                (3 * b / (5 * r) - 3 * a2 / 20) * xf**2 * ai**2
                + (2 * b / (5 * r) + a2 / 40) * ai * aip
                + (-2 * b / (5 * r) + a2 / 10) * xf * aip**2
            ) / (2 * b ** mpmath.mpf("2/3"))
        else:
            raise Inadmissible(f"unknown case {case}")
        return +val


def cd_density(kind: Kind, N: int, x, a=None, beta: int = 2,
               prec: int = 256) -> mpmath.mpf:
    """Finite-N beta=2 density as a Christoffel-Darboux sum of squares.

    rho_N(x) = w(x) * sum_{k<N} phi_k(x)^2 with phi_k orthonormal w.r.t.
    w(x) = e^{-x^2} (Gaussian) or x^a e^{-x} (Laguerre), by stable
    three-term recurrence in high-precision floats.
    """
    if beta != 2:
        raise BetaUnsupported(f"Christoffel-Darboux oracle requires beta = 2, got {beta}")
    with mpmath.workprec(max(prec, 256)):
        xf = mpmath.mpf(x)
        if kind is Kind.GAUSSIAN:
            # phi_{k+1} = x sqrt(2/(k+1)) phi_k - sqrt(k/(k+1)) phi_{k-1}
            phi_prev = mpmath.mpf(0)
            phi = mpmath.pi ** mpmath.mpf("-0.25")
            total = phi * phi
            for k in range(N - 1):
                nxt = xf * mpmath.sqrt(mpmath.mpf(2) / (k + 1)) * phi \
                    - mpmath.sqrt(mpmath.mpf(k) / (k + 1)) * phi_prev
                phi_prev, phi = phi, nxt
                total += phi * phi
            return +(total * mpmath.exp(-xf * xf))
        if kind is Kind.LAGUERRE_FIXED:
            aq = to_mpq(a if a is not None else 0)
            af = mpmath.mpf(int(aq.numerator)) / int(aq.denominator)
            if xf <= 0:
                raise Inadmissible("Laguerre support is x > 0")
            # monic-free standard recurrence for L_k^{(a)}, then normalize:
            # ||L_k^{(a)}||^2 = Gamma(k + a + 1) / k!
            Lm, L = mpmath.mpf(0), mpmath.mpf(1)
            lognorm = mpmath.loggamma(af + 1)
            total = mpmath.exp(-lognorm) * L * L
            for k in range(N - 1):
                nxt = ((2 * k + 1 + af - xf) * L - (k + af) * Lm) / (k + 1)
                Lm, L = L, nxt
                lognorm = lognorm + mpmath.log(af + k + 1) - mpmath.log(k + 1)
                total += mpmath.exp(-lognorm) * L * L
            return +(total * mpmath.exp(af * mpmath.log(xf) - xf))
        raise Inadmissible(f"unsupported kind {kind} for the determinantal oracle")


def quadrature_oracle(kind: Kind, beta: int, N: int, x, a=None,
                      tol: float = 1e-12) -> mpmath.mpf:
    """Direct nested quadrature of the N-particle density definition.

    Feasible only for N - 1 <= 3 inner integrals; the partition function is
    taken from the gamma-product closed form (itself quadrature-validated
    at N = 1, 2 in the unit tests).
    """
    m = N - 1
    if m > 3:
        raise TooLarge(f"quadrature oracle limited to N <= 4, got N = {N}")
    prec_dps = 30
    with mpmath.workdps(prec_dps):
        xf = mpmath.mpf(x)
        if kind is Kind.GAUSSIAN:
            logZ = log_gaussian_Z(beta, N, 256).log_value
            w = lambda t: mpmath.exp(-beta * t * t / 2)
            lo, hi = -mpmath.mpf(10), mpmath.mpf(10)
            lo = min(lo, xf - 1)
            hi = max(hi, xf + 1)
        else:
            aq = to_mpq(a if a is not None else 0)
            af = mpmath.mpf(int(aq.numerator)) / int(aq.denominator)
            logZ = log_laguerre_Z(aq, beta, N, 256).log_value
            w = lambda t: t ** (beta * af / 2) * mpmath.exp(-beta * t / 2)
            # weight decays like exp(-beta t / 2); tail cut where negligible
            lo, hi = mpmath.mpf(0), mpmath.mpf(max(40, 4 * N + 20, float(xf) * 2 + 20))

        def integrand(*ts):
            val = mpmath.mpf(1)
            for t in ts:
                val *= w(t) * abs(xf - t) ** beta
            for i in range(len(ts)):
                for j in range(i + 1, len(ts)):
                    val *= abs(ts[i] - ts[j]) ** beta
            return val

        if m == 0:
            integral = mpmath.mpf(1)
        else:
            integral = mpmath.quad(integrand, *([[lo, hi]] * m))
        return +(w(xf) * N * mpmath.exp(-logZ) * integral)
