"""Ensemble parameter records and admissibility checks."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from gmpy2 import mpq

from .bigpoly import to_mpq
from .errors import Inadmissible


class Kind(enum.Enum):
    GAUSSIAN = "gaussian"
    LAGUERRE_FIXED = "laguerre"
    LAGUERRE_PROPORTIONAL = "laguerre-proportional"


@dataclass(frozen=True)
class EnsembleSpec:
    """Parameters of a (weight, beta, particle count) average.

    `n_particles` is the number of eigenvalues the polynomial average runs
    over; the density of an N x N ensemble uses n_particles = N - 1.  For
    the proportional-Laguerre case the weight exponent is
    a = alpha_ratio * (n_particles + 1), i.e. proportional to the density's
    matrix size.  `a` and `alpha_ratio` are kept as exact rationals so the
    recurrence stays exact.
    """

    kind: Kind
    beta: int
    n_particles: int
    a: Optional[mpq] = None
    alpha_ratio: Optional[mpq] = None

    def __post_init__(self):
        if not isinstance(self.beta, int) or self.beta < 2 or self.beta % 2:
            raise Inadmissible(f"beta must be a positive even integer, got {self.beta}")
        if self.n_particles < 0:
            raise Inadmissible(f"n_particles must be >= 0, got {self.n_particles}")
        if self.kind is Kind.GAUSSIAN:
            if self.a is not None or self.alpha_ratio is not None:
                raise Inadmissible("Gaussian spec takes neither a nor alpha_ratio")
        elif self.kind is Kind.LAGUERRE_FIXED:
            if self.a is None or self.alpha_ratio is not None:
                raise Inadmissible("fixed-Laguerre spec requires a and no alpha_ratio")
            object.__setattr__(self, "a", to_mpq(self.a))
            if self.a * self.beta <= -2:
                raise Inadmissible(f"Laguerre weight needs a > -2/beta, got a={self.a}")
        elif self.kind is Kind.LAGUERRE_PROPORTIONAL:
            if self.alpha_ratio is None or self.a is not None:
                raise Inadmissible("proportional-Laguerre spec requires alpha_ratio only")
            object.__setattr__(self, "alpha_ratio", to_mpq(self.alpha_ratio))
            if self.alpha_ratio <= 0:
                raise Inadmissible(f"alpha_ratio must be > 0, got {self.alpha_ratio}")

    @property
    def lam(self) -> mpq:
        """lambda = beta / 2, derived, never stored."""
        return mpq(self.beta, 2)

    def effective_a(self) -> mpq:
        """Weight exponent parameter a for either Laguerre kind."""
        if self.kind is Kind.LAGUERRE_FIXED:
            return self.a
        if self.kind is Kind.LAGUERRE_PROPORTIONAL:
            return self.alpha_ratio * (self.n_particles + 1)
        raise Inadmissible("Gaussian ensemble has no parameter a")
