"""Dense exact-coefficient polynomials used as recurrence state.

Coefficients are gmpy2 rationals by default, so every recurrence step is
exact.  A big-float backend (gmpy2.mpfr at a configurable precision) is
supported as a faster alternative; see `run in a gmpy2 local context` in
the recurrence driver.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2
import mpmath
from gmpy2 import mpq


def to_mpq(value) -> mpq:
    """Coerce ints, Fractions, strings and floats-with-exact-binary to mpq."""
    if isinstance(value, (int, str)):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


class BigPoly:
    """Immutable dense polynomial; index = power of x."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls) -> "BigPoly":
        return cls(())

    @classmethod
    def one(cls) -> "BigPoly":
        return cls((mpq(1),))

    @classmethod
    def constant(cls, c) -> "BigPoly":
        return cls((to_mpq(c),))

    @classmethod
    def from_coeffs(cls, coeffs: Sequence) -> "BigPoly":
        return cls(tuple(to_mpq(c) for c in coeffs))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return isinstance(other, BigPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"BigPoly({list(self.coeffs)!r})"

    def __add__(self, other: "BigPoly") -> "BigPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return BigPoly(out)

    def __sub__(self, other: "BigPoly") -> "BigPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "BigPoly":
        if c == 0:
            return BigPoly.zero()
        return BigPoly(tuple(c * a for a in self.coeffs))

    def mul_x(self) -> "BigPoly":
        if self.is_zero():
            return self
        return BigPoly((type(self.coeffs[0])(0),) + self.coeffs)

    def derivative(self) -> "BigPoly":
        return BigPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def eval_exact(self, x):
        """Horner evaluation at an exact rational point."""
        xq = to_mpq(x)
        acc = mpq(0)
        for c in reversed(self.coeffs):
            acc = acc * xq + c
        return acc

    def _horner(self, x, work: int) -> mpmath.mpf:
        with mpmath.workprec(work):
            xf = mpmath.mpf(x)
            acc = mpmath.mpf(0)
            for c in reversed(self.coeffs):
                if isinstance(c, type(mpq(0))):
                    cf = mpmath.mpf(int(c.numerator)) / int(c.denominator)
                else:
                    cf = mpmath.mpf(c)
                acc = acc * xf + cf
            return +acc

    def eval_mpf(self, x, prec: int) -> mpmath.mpf:
        """Horner evaluation in mpmath floats, accurate to ~prec bits.

        Coefficients convert exactly, but alternating signs can cancel by
        hundreds of orders of magnitude, so the working precision is raised
        until the result clears the term-magnitude bound sum |c_i||x|^i by
        the requested number of bits.
        """
        if not self.coeffs:
            return mpmath.mpf(0)
        # magnitude bound at low precision; exponents are what matter
        with mpmath.workprec(53):
            ax = abs(mpmath.mpf(x))
            bound = mpmath.mpf(0)
            for c in reversed(self.coeffs):
                if isinstance(c, type(mpq(0))):
                    cf = abs(mpmath.mpf(int(c.numerator)) / int(c.denominator))
                else:
                    cf = abs(mpmath.mpf(c))
                bound = bound * ax + cf
        log2_bound = mpmath.log(bound, 2) if bound > 0 else mpmath.mpf(0)
        work = prec + 64 + (self.degree + 1).bit_length() * 4
        while True:
            val = self._horner(x, work)
            if val != 0:
                with mpmath.workprec(53):
                    lost = float(log2_bound - mpmath.log(abs(val), 2))
                if lost < work - prec - 16:
                    return val
                needed = int(lost) + prec + 64
            else:
                needed = work * 2
            if work >= needed:
                return val
            work = needed

    def coeff_strings(self) -> list[str]:
        """Coefficients as exact "numerator/denominator" strings (debug dump)."""
        out = []
        for c in self.coeffs:
            if isinstance(c, type(mpq(0))):
                out.append(f"{c.numerator}/{c.denominator}")
            else:
                out.append(repr(c))
        return out


def as_float_backend(poly: BigPoly, precision_bits: int) -> BigPoly:
    """Convert a rational polynomial to the mpfr big-float backend."""
    with gmpy2.local_context(gmpy2.context(), precision=precision_bits):
        return BigPoly(tuple(gmpy2.mpfr(c) for c in poly.coeffs))
