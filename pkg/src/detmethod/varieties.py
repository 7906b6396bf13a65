"""Hypersurfaces X in P^n over Q, their rational points and reductions mod p."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exactmath import PrimeField, is_prime
from .heights import ProjPoint
from .poly import Form, jet_at


class NotOnVariety(ValueError):
    pass


class SingularPoint(ValueError):
    pass


@dataclass(frozen=True)
class Hypersurface:
    """``X = V(f)`` in P^n with ``f`` primitive, integral and irreducible.

    Irreducibility is the caller's responsibility; for degree <= 3 it is
    spot-checked with a factorization (pass ``check=False`` to skip).
    """

    f: Form
    name: str = ""
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        f = self.f
        if f.is_zero() or f.degree < 1:
            raise ValueError("the defining form must be nonconstant")
        if not f.is_integral() or f.content() != 1:
            raise ValueError("the defining form must have coprime integer coefficients")
        if self.check and f.degree <= 3:
            self._check_irreducible()

    def _check_irreducible(self):
        import sympy

        names = sympy.symbols(f"t0:{self.f.nvars}")
        expr = sum(
            int(c) * sympy.Mul(*[v ** e for v, e in zip(names, m)])
            for m, c in self.f.coeffs.items()
        )
        _, factors = sympy.factor_list(expr)
        if len(factors) != 1 or factors[0][1] != 1:
            raise ValueError(f"{self.f} is reducible over Q")

    @classmethod
    def parse(cls, text: str, name: str = "", nvars: Optional[int] = None) -> "Hypersurface":
        return cls(Form.parse(text, nvars=nvars).primitive(normalize_sign=False), name or text)

    @property
    def n(self) -> int:
        return self.f.n

    @property
    def delta(self) -> int:
        return self.f.degree

    @property
    def d(self) -> int:
        return self.n - 1

    @cached_property
    def gradient(self) -> List[Form]:
        return self.f.gradient()

    def contains(self, P: Sequence[int]) -> bool:
        return self.f.evaluate(tuple(P)) == 0

    def is_regular(self, P: Sequence[int]) -> bool:
        """Nonvanishing gradient at a point of X (Euler: equivalent to multiplicity 1)."""
        P = tuple(P)
        return any(g.evaluate(P) != 0 for g in self.gradient)

    def to_json(self) -> dict:
        out = {"form": self.f.to_json()}
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, data) -> "Hypersurface":
        if isinstance(data, (str, Path)):
            data = json.loads(Path(data).read_text())
        if "equation" in data:
            nvars = data["n"] + 1 if "n" in data else None
            return cls.parse(data["equation"], data.get("name", ""), nvars)
        form = Form.from_json(data.get("form", data))
        return cls(form.primitive(normalize_sign=False), data.get("name", ""))

    def __str__(self):
        return self.name or str(self.f)


@dataclass(frozen=True)
class ResidueClass:
    p: int
    point_mod_p: Tuple[int, ...]
    regular: bool
    members: Tuple[ProjPoint, ...]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "point_mod_p": list(self.point_mod_p),
            "regular": self.regular,
            "members": [P.to_json() for P in self.members],
        }


# ---------------------------------------------------------------------------
# enumeration


def _canonical_primitive(v: Sequence[int]) -> bool:
    first = next((x for x in v if x), 0)
    if first <= 0:
        return False
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return g == 1


def enumerate_points(X: Hypersurface, B) -> List[ProjPoint]:
    """All points of X with ``exp(h_ar) <= B``, i.e. ``sum x_i^2 <= B^2``.

    The box ``|x_i| <= B`` is scanned one leading coordinate at a time, the
    remaining ones vectorized with numpy.  Output is sorted by norm and then
    by coordinates in decreasing order.
    """
    B2 = Fraction(B) ** 2
    if B2 < 1:
        return []
    R = math.isqrt(math.floor(B2))
    nv = X.f.nvars
    coeff_bound = int(X.f.max_abs_coefficient()) * len(X.f.coeffs) * R ** X.delta
    use_numpy = coeff_bound < 2 ** 62 and nv >= 2
    found: List[ProjPoint] = []

    if use_numpy and nv >= 2:
        axis = np.arange(-R, R + 1, dtype=np.int64)
        grids = np.meshgrid(*([axis] * (nv - 1)), indexing="ij")
        flat = [g.ravel() for g in grids]
        sq_rest = sum(g * g for g in flat)
        terms = [(m, int(c)) for m, c in X.f.coeffs.items()]
        for x0 in range(0, R + 1):
            mask = sq_rest + x0 * x0 <= B2.numerator // B2.denominator
            if not mask.any():
                continue
            cols = [c[mask] for c in flat]
            value = np.zeros(cols[0].shape, dtype=np.int64)
            for m, c in terms:
                t = np.full(cols[0].shape, c, dtype=np.int64) * (x0 ** m[0])
                for k, e in enumerate(m[1:]):
                    if e:
                        t = t * cols[k] ** e
                value += t
            hits = np.nonzero(value == 0)[0]
            for h in hits:
                v = (x0,) + tuple(int(c[h]) for c in cols)
                if _canonical_primitive(v) and Fraction(sum(x * x for x in v)) <= B2:
                    found.append(ProjPoint(v))
    else:
        import itertools

        for v in itertools.product(range(-R, R + 1), repeat=nv):
            if (_canonical_primitive(v) and Fraction(sum(x * x for x in v)) <= B2
                    and X.contains(v)):
                found.append(ProjPoint(v))
    found.sort(key=lambda P: (P.norm_squared(), tuple(-x for x in P.coords)))
    return found


def multiplicity(X: Hypersurface, P: Sequence[int]) -> int:
    """Order of vanishing of ``f`` at ``P`` in an ambient affine chart."""
    P = tuple(P)
    if not X.contains(P):
        raise NotOnVariety(f"{P} is not on {X}")
    jet = jet_at(X.f, P, X.delta)
    k = jet.order_of_vanishing()
    assert k is not None and k >= 1
    return k


# ---------------------------------------------------------------------------
# reduction modulo p


def reduce_mod_p(P: Sequence[int], p: int) -> Tuple[int, ...]:
    return PrimeField(p).normalize(tuple(P))


def singular_points_mod_p(X: Hypersurface, p: int) -> List[Tuple[int, ...]]:
    """F_p-points of the reduction where every partial derivative vanishes."""
    F = PrimeField(p)
    fp = X.f.mod_p(p)
    if fp.is_zero():
        raise ValueError(f"f vanishes identically mod {p}")
    grads = [g.mod_p(p) for g in X.gradient]
    out = []
    for Q in F.projective_points(X.n):
        if fp.evaluate(Q) == 0 and all(g.evaluate(Q) == 0 for g in grads):
            out.append(Q)
    return out


def regular_mod_p(X: Hypersurface, Q: Sequence[int], p: int) -> bool:
    """Whether an F_p-point of the fiber has a nonzero gradient mod p."""
    Q = tuple(Q)
    return any(g.mod_p(p).evaluate(Q) != 0 for g in X.gradient)


def partition_into_classes(X: Hypersurface, points: Sequence[ProjPoint], p: int) -> List[ResidueClass]:
    """Group points by reduction mod p and flag fiber-regular classes."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if X.f.mod_p(p).is_zero():
        raise ValueError(f"f vanishes identically mod {p}")
    groups: Dict[Tuple[int, ...], List[ProjPoint]] = {}
    for P in points:
        if not X.contains(P):
            raise NotOnVariety(f"{P} is not on {X}")
        groups.setdefault(reduce_mod_p(P, p), []).append(P)
    classes = [
        ResidueClass(p, Q, regular_mod_p(X, Q, p), tuple(members))
        for Q, members in groups.items()
    ]
    classes.sort(key=lambda c: (-len(c.members), c.point_mod_p))
    return classes
