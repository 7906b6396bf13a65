"""Graded pieces F_D of a hypersurface and jet filtrations at rational points.

``F_D`` is realized as ``E_D / (f * E_{D - delta})``.  A degree-``D`` class
vanishes to order ``>= m`` at a regular point ``eta`` of X exactly when its
restriction, written in ``d`` local parameters of X at ``eta``, has no terms
of order ``< m``.  Multiples of ``f`` restrict to zero, so the jet map can be
evaluated on all of ``E_D`` and ``k_m = r_1(D) - rank(jets of order < m)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, List, Sequence, Tuple

from .exactmath import EchelonBasis, rref, smith_normal_form
from .heights import ProjPoint
from .poly import Form, local_chart, monomial_basis, series_mul
from .varieties import (Hypersurface, NotOnVariety, SingularPoint, reduce_mod_p,
                        regular_mod_p)


def binom(top: int, k: int) -> int:
    """Binomial coefficient, zero when ``top < k`` or ``top < 0``."""
    if k < 0 or top < k:
        return 0
    return math.comb(top, k)


def hypersurface_rank(n: int, delta: int, D: int) -> int:
    return binom(D + n, n) - binom(D - delta + n, n)


def truncation_order(d: int, delta: int, D: int) -> int:
    """``floor(delta**(1/d) * D)``, computed exactly."""
    target = delta * D ** d
    t = int(round(target ** (1.0 / d)))
    while t ** d > target:
        t -= 1
    while (t + 1) ** d <= target:
        t += 1
    return t


@dataclass(frozen=True)
class GradedPiece:
    """Integral basis of ``F_D = E_D / (f E_{D-delta})``.

    ``basis`` holds integral forms whose classes form a Z-basis of the
    quotient; when the leading coefficient of ``f`` is a unit these are the
    standard monomials (not divisible by the leading monomial of ``f``).
    """

    D: int
    basis: Tuple[Form, ...]
    r1: int
    monomial_basis: bool
    elementary_divisors: Tuple[int, ...] = field(repr=False, default=())

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "r1": self.r1,
            "monomial_basis": self.monomial_basis,
            "basis": [b.to_json() for b in self.basis],
        }


def multiples_matrix(X: Hypersurface, D: int) -> Tuple[List[Tuple[int, ...]], List[List[int]]]:
    """Monomials of E_D and the columns of ``f * m`` for ``m`` in E_{D-delta}."""
    mons = monomial_basis(X.n, D)
    if D < X.delta:
        return mons, []
    index = {m: i for i, m in enumerate(mons)}
    cols = []
    for q in monomial_basis(X.n, D - X.delta):
        col = [0] * len(mons)
        for m, c in X.f.coeffs.items():
            col[index[tuple(a + b for a, b in zip(m, q))]] = int(c)
        cols.append(col)
    return mons, cols


@lru_cache(maxsize=256)
def graded_piece(X: Hypersurface, D: int) -> GradedPiece:
    if D < 1:
        raise ValueError("D must be >= 1")
    mons, cols = multiples_matrix(X, D)
    nvars = X.f.nvars
    if not cols:
        basis = tuple(Form.monomial(m) for m in mons)
        return GradedPiece(D, basis, len(mons), True, ())
    # rows = monomials, columns = multiples of f
    A = [list(r) for r in zip(*cols)]
    divisors, U, _ = smith_normal_form(A)
    if any(abs(x) != 1 for x in divisors):
        raise ArithmeticError(f"(f) is not saturated in degree {D}: divisors {divisors}")
    k = len(cols)
    r1 = len(mons) - k
    lm = X.f.leading_monomial()
    if abs(X.f.leading_coefficient()) == 1:
        standard = [m for m in mons if not all(a >= b for a, b in zip(m, lm))]
        assert len(standard) == r1
        return GradedPiece(D, tuple(Form.monomial(m) for m in standard), r1, True, tuple(divisors))
    # U A V = diag(1,...,1); columns k.. of U^{-1} give a basis of the quotient
    m = len(mons)
    aug = [list(U[i]) + [int(i == j) for j in range(m)] for i in range(m)]
    R, _ = rref(aug)
    Uinv = [row[m:] for row in R]
    basis = []
    for j in range(k, m):
        coeffs = {mons[i]: Uinv[i][j] for i in range(m) if Uinv[i][j] != 0}
        basis.append(Form(nvars, D, coeffs))
    return GradedPiece(D, tuple(basis), r1, False, tuple(divisors))


# ---------------------------------------------------------------------------
# jet filtration


def _local_exponents(d: int, order: int) -> List[Tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(d), order):
        e = [0] * d
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def _check_center(X: Hypersurface, eta: Sequence[int]) -> Tuple[int, ...]:
    eta = tuple(eta)
    if not X.contains(eta):
        raise NotOnVariety(f"{eta} is not on {X}")
    if not X.is_regular(eta):
        raise SingularPoint(f"{eta} is a singular point of {X}")
    return eta


def jet_rank_profile(X: Hypersurface, D: int, eta: Sequence[int], max_m: int) -> List[int]:
    """``ranks[m-1]`` = rank of the degree-D jet map to order ``< m``, for ``m = 1..max_m``."""
    eta = _check_center(X, eta)
    order = max_m - 1
    ch = local_chart(eta, order, X.f)
    d = len(ch.params)
    one = {(0,) * d: Fraction(1)}
    nonchart = [i for i in range(X.f.nvars) if i != ch.chart]

    powers: Dict[Tuple[int, int], dict] = {}

    def power(i, e):
        if e == 0:
            return one
        if (i, e) not in powers:
            powers[(i, e)] = series_mul(power(i, e - 1), ch.coords[i], order)
        return powers[(i, e)]

    mons = monomial_basis(X.n, D)
    series = []
    for m in mons:
        s = one
        for i in nonchart:
            if m[i]:
                s = series_mul(s, power(i, m[i]), order)
        series.append(s)

    basis = EchelonBasis(len(mons))
    ranks = []
    for m in range(1, max_m + 1):
        for u in _local_exponents(d, m - 1):
            row = [s.get(u, 0) for s in series]
            if any(row):
                basis.add(row)
        ranks.append(basis.rank)
    return ranks


def jet_kernel_dim(X: Hypersurface, D: int, eta: Sequence[int], m: int) -> int:
    """Dimension of the classes in F_D vanishing to order ``>= m`` at ``eta``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if D < 1:
        raise ValueError("D must be >= 1")
    r1 = hypersurface_rank(X.n, X.delta, D)
    return r1 - jet_rank_profile(X, D, eta, m)[m - 1]


@dataclass(frozen=True)
class FiltrationProfile:
    """``dims[m-1] = k_m`` for ``m = 1, 2, ...`` up to the first vanishing term.

    ``cutoff`` is ``floor(delta^(1/d) D) + 1``.  On curves every ``k_m`` with
    ``m >= cutoff`` is zero; on surfaces this fails already for the tangent
    hyperplane at ``D = 1``, so the profile is extended past ``cutoff`` until
    a zero appears (at the latest at ``m = delta D + 1``).
    """

    D: int
    center: ProjPoint
    dims: Tuple[int, ...]
    r1: int
    cutoff: int

    @property
    def R(self) -> int:
        return sum(self.dims)

    @property
    def truncation_holds(self) -> bool:
        return all(k == 0 for k in self.dims[self.cutoff - 1:])

    def k(self, m: int) -> int:
        return self.dims[m - 1] if m <= len(self.dims) else 0

    def to_json(self) -> dict:
        return {"D": self.D, "center": self.center.to_json(), "dims": list(self.dims),
                "R": self.R, "r1": self.r1, "cutoff": self.cutoff,
                "truncation_holds": self.truncation_holds}


@lru_cache(maxsize=4096)
def _profile(X: Hypersurface, D: int, eta: Tuple[int, ...]) -> FiltrationProfile:
    cutoff = truncation_order(X.d, X.delta, D) + 1
    r1 = hypersurface_rank(X.n, X.delta, D)
    dims = [r1 - r for r in jet_rank_profile(X, D, eta, cutoff)]
    if dims[-1] != 0:
        # a divisor of degree delta*D has multiplicity at most delta*D at a point
        dims = [r1 - r for r in jet_rank_profile(X, D, eta, X.delta * D + 1)]
        dims = dims[: dims.index(0) + 1]
    return FiltrationProfile(D, ProjPoint(eta), tuple(dims), r1, cutoff)


def filtration_profile(X: Hypersurface, D: int, eta: Sequence[int]) -> FiltrationProfile:
    if D < 1:
        raise ValueError("D must be >= 1")
    return _profile(X, D, ProjPoint(tuple(eta)).coords)


def empirical_I(X: Hypersurface, eta: Sequence[int], D: int) -> Fraction:
    """``d! * R / D^(d+1)``, which tends to ``I_X(H, eta)`` as D grows."""
    prof = filtration_profile(X, D, eta)
    return Fraction(math.factorial(X.d) * prof.R, D ** (X.d + 1))


def check_reduction_invariance(X: Hypersurface, D: int, eta1: Sequence[int], eta2: Sequence[int],
                               p: int) -> bool:
    """Whether two points with a common regular reduction mod p share a profile."""
    e1, e2 = _check_center(X, eta1), _check_center(X, eta2)
    r1, r2 = reduce_mod_p(e1, p), reduce_mod_p(e2, p)
    if r1 != r2:
        raise ValueError(f"{e1} and {e2} reduce to different points mod {p}")
    if not regular_mod_p(X, r1, p):
        raise SingularPoint(f"common reduction {r1} is singular mod {p}")
    return filtration_profile(X, D, e1).dims == filtration_profile(X, D, e2).dims
