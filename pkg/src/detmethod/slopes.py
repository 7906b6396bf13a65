"""Arakelov degrees and slopes of F_D under the symmetric quotient metrics.

The base lattice is Z^{n+1} with the standard orthonormal metric.  Its D-th
symmetric power carries the quotient metric of the tensor power, for which
the monomials are orthogonal with ``<x^a, x^a> = a!/D!``.  Restricting to X
then takes the quotient metric along ``E_D -> F_D``, whose kernel is
``f * E_{D - delta}``; the resulting Gram determinant is
``det G(E_D) / det G(kernel)``.  Everything stays rational, so the degree is
``(1/2) log`` of an exact rational number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .exactmath import LogValue, det_integer, outward
from .jets import binom, graded_piece, hypersurface_rank, multiples_matrix
from .poly import monomial_basis
from .varieties import Hypersurface


def _multinomial_factorial(a: Sequence[int]) -> int:
    out = 1
    for x in a:
        out *= math.factorial(x)
    return out


def sym_gram(n: int, D: int) -> List[List[Fraction]]:
    """Diagonal Gram matrix of ``Sym^D`` on the monomial basis of :func:`monomial_basis`."""
    if n < 1 or D < 1:
        raise ValueError("need n >= 1 and D >= 1")
    mons = monomial_basis(n, D)
    fD = math.factorial(D)
    size = len(mons)
    G = [[Fraction(0)] * size for _ in range(size)]
    for i, a in enumerate(mons):
        G[i][i] = Fraction(_multinomial_factorial(a), fD)
    return G


@dataclass(frozen=True)
class SlopeInterval:
    """Symmetric-metric slope together with the John-metric window below it.

    ``degree`` is the exact Arakelov degree, so ``mu_sym = degree / r1``.
    """

    degree: LogValue
    r1: int
    n: int
    D: int

    @property
    def mu_sym(self) -> float:
        return float(self.degree) / self.r1

    @property
    def r0_max(self) -> float:
        return 0.5 * math.log(binom(self.n + self.D, self.D))

    @property
    def lower(self) -> float:
        return self.mu_sym - self.r0_max

    @property
    def upper(self) -> float:
        return self.mu_sym

    def to_json(self) -> dict:
        rad = self.degree.radicand
        return {
            "mu_sym_radicand": f"{rad.numerator}/{rad.denominator}",
            "mu_sym": self.mu_sym,
            "lower": self.lower,
            "upper": self.upper,
            "r1": self.r1,
        }


def symmetric_power_degree(n: int, D: int) -> LogValue:
    """Degree of the whole of ``Sym^D``: ``(1/2) log prod(D!/a!)``."""
    fD = math.factorial(D)
    rad = 1
    for a in monomial_basis(n, D):
        rad *= fD // _multinomial_factorial(a)
    return LogValue(Fraction(rad))


def slope_F_D(X: Hypersurface, D: int) -> SlopeInterval:
    if D < 1:
        raise ValueError("D must be >= 1")
    n = X.n
    r1 = hypersurface_rank(n, X.delta, D)
    piece = graded_piece(X, D)  # asserts the quotient is torsion-free
    assert piece.r1 == r1
    mons, cols = multiples_matrix(X, D)
    fD = math.factorial(D)
    weights = [_multinomial_factorial(a) for a in mons]
    # det G(E_D) = prod(a!) / D!^m
    det_E = Fraction(math.prod(weights), fD ** len(mons))
    if not cols:
        return SlopeInterval(LogValue(1 / det_E), r1, n, D)
    # kernel Gram scaled by D!: C^T diag(a!) C
    k = len(cols)
    GM = [[sum(w * x * y for w, x, y in zip(weights, cols[i], cols[j])) for j in range(k)]
          for i in range(k)]
    det_M = Fraction(det_integer(GM), fD ** k)
    return SlopeInterval(LogValue(det_M / det_E), r1, n, D)


@dataclass(frozen=True)
class CriterionInput:
    D: int
    r_1: int
    slope: SlopeInterval
    classes: Tuple[Tuple[int, int], ...]  # (R_j, p_j)
    sup_height: float
    field_degree: int = 1

    def __post_init__(self):
        primes = [p for _, p in self.classes]
        if len(set(primes)) != len(primes):
            raise ValueError("primes must be distinct")
        if any(R < 0 for R, _ in self.classes):
            raise ValueError("R_j must be nonnegative")


def criterion_threshold(inp: CriterionInput) -> float:
    """Right-hand side of the slope criterion, rounded downward."""
    D, r1 = inp.D, inp.r_1
    value = inp.slope.lower / D - math.log(r1) / (2 * D)
    value += sum(R * math.log(p) for R, p in inp.classes) / (D * r1 * inp.field_degree)
    return outward(value, -1)


def criterion_holds(inp: CriterionInput) -> bool:
    """Sound check of ``sup h < lower/D - log(r_1)/(2D) + sum R_j log p_j / (D r_1)``."""
    return outward(inp.sup_height, +1) < criterion_threshold(inp)
