"""Heights of rational points and a naive height for defining forms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence, Tuple

from .exactmath import LogValue, outward
from .poly import Form


@dataclass(frozen=True, order=True)
class ProjPoint:
    """A rational point of P^n via primitive integer coordinates.

    The representative is canonical: coprime entries, first nonzero entry
    positive.  Rational input coordinates are cleared automatically.
    """

    coords: Tuple[int, ...]

    def __post_init__(self):
        fr = [Fraction(x) for x in self.coords]
        if not any(fr):
            raise ValueError("all coordinates are zero")
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (x.denominator for x in fr), 1)
        ints = [int(x * den) for x in fr]
        g = reduce(math.gcd, ints, 0)
        ints = [x // g for x in ints]
        if next(x for x in ints if x) < 0:
            ints = [-x for x in ints]
        object.__setattr__(self, "coords", tuple(ints))

    @classmethod
    def of(cls, *coords) -> "ProjPoint":
        if len(coords) == 1 and not isinstance(coords[0], (int, Fraction)):
            coords = tuple(coords[0])
        return cls(tuple(coords))

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def norm_squared(self) -> int:
        return sum(x * x for x in self.coords)

    def max_abs(self) -> int:
        return max(abs(x) for x in self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __str__(self):
        return "[" + ":".join(map(str, self.coords)) + "]"

    def to_json(self):
        return list(self.coords)


def classic_log_height(P: ProjPoint) -> float:
    """Weil logarithmic height; for primitive coordinates only the archimedean place counts."""
    return math.log(P.max_abs())


def arakelov_log_height_exact(P: ProjPoint) -> LogValue:
    return LogValue(Fraction(P.norm_squared()))


def arakelov_log_height(P: ProjPoint) -> float:
    """Height for the standard l2-metrized O(1): ``(1/2) log(sum x_i^2)``."""
    return float(arakelov_log_height_exact(P))


def height_bound(P: ProjPoint) -> float:
    return 0.5 * math.log(P.n + 1)


@dataclass(frozen=True)
class HeightReport:
    point: ProjPoint
    classic_log_height: float
    arakelov_log_height: float
    arakelov_radicand: int
    bound_gap: float
    bound: float
    within_bound: bool

    def to_json(self) -> dict:
        return {
            "point": self.point.to_json(),
            "classic_log_height": self.classic_log_height,
            "arakelov_log_height": self.arakelov_log_height,
            "arakelov_radicand": self.arakelov_radicand,
            "bound_gap": self.bound_gap,
            "bound": self.bound,
            "within_bound": self.within_bound,
        }


def height_comparison(P: ProjPoint) -> HeightReport:
    """Both heights and their gap, checked against ``(1/2) log(n+1)``.

    The check is done exactly: ``0 <= h_ar - h <= (1/2) log(n+1)`` is
    equivalent to ``max^2 <= sum x_i^2 <= (n+1) max^2``.
    """
    m2 = P.max_abs() ** 2
    s = P.norm_squared()
    ok = m2 <= s <= (P.n + 1) * m2
    if not ok:
        raise AssertionError(f"height comparison violated at {P}")
    classic = classic_log_height(P)
    ar = arakelov_log_height(P)
    gap = float(LogValue(Fraction(s, m2)))
    return HeightReport(P, classic, ar, s, gap, height_bound(P), ok)


def naive_form_height(f: Form) -> float:
    """log of the largest coefficient of the primitive integral form ``f``."""
    if not f.is_integral():
        raise ValueError("naive height needs integer coefficients")
    if f.content() != 1:
        raise ValueError("naive height needs coprime coefficients")
    return math.log(int(f.max_abs_coefficient()))


def height_at_most(P: ProjPoint, B) -> bool:
    """Exact test of ``exp(h_ar(P)) <= B``, i.e. ``sum x_i^2 <= B^2``."""
    B = Fraction(B) if not isinstance(B, float) else Fraction(B)
    return P.norm_squared() <= B * B


def sup_log_height(points: Sequence[ProjPoint]) -> float:
    """Upward-rounded supremum of Arakelov heights (0 for an empty family)."""
    if not points:
        return 0.0
    return outward(max(arakelov_log_height(P) for P in points), +1)
