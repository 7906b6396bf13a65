"""Explicit constants and closed-form bounds for the hypersurface count.

Sub-expressions are assembled exactly (``Fraction``/``int``) where the
formula allows it and converted to floats only at the end.  Values meant
for certification carry an outward rounding step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union

from .exactmath import next_prime_in_range, outward

Real = Union[int, float, Fraction]


def binom(top: int, k: int) -> int:
    if k < 0 or top < k:
        return 0
    return math.comb(top, k)


def _log(x: Real) -> float:
    if isinstance(x, Fraction):
        return math.log(x.numerator) - math.log(x.denominator)
    return math.log(x)


def exact_root(x: int, d: int) -> Optional[int]:
    """Integer ``d``-th root of ``x`` if it exists."""
    r = round(x ** (1.0 / d))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** d == x:
            return c
    return None


@dataclass(frozen=True)
class BoundInputs:
    """Parameters shared by the counting constants.

    ``mu_max_bound`` defaults to ``(1/2) log C(n+delta, delta)``, ``I_value``
    to the generic lower bound :func:`I_lower_bound`; ``sources`` records
    where each defaulted value came from.
    """

    n: int
    d: int
    delta: int
    epsilon: Fraction
    B: float
    field_degree: int = 1
    alpha: Real = 2
    h_X: float = 0.0
    mu_max_bound: Optional[float] = None
    I_value: Optional[Real] = None
    r_param: int = 1
    sources: Dict[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not 1 <= self.d <= self.n - 1:
            raise ValueError("need 1 <= d <= n - 1")
        if self.delta < 1:
            raise ValueError("delta must be >= 1")
        eps = Fraction(self.epsilon) if not isinstance(self.epsilon, float) else self.epsilon
        if eps <= 0:
            raise ValueError("epsilon must be positive")
        object.__setattr__(self, "epsilon", eps)
        if self.B < 1:
            raise ValueError("B must be >= 1")
        if self.alpha < 2:
            raise ValueError("alpha must be >= 2")
        src = dict(self.sources)
        if self.mu_max_bound is None:
            object.__setattr__(self, "mu_max_bound",
                               0.5 * math.log(binom(self.n + self.delta, self.delta)))
            src.setdefault("mu_max_bound", "default (1/2) log C(n+delta, delta)")
        else:
            src.setdefault("mu_max_bound", "supplied")
        if self.I_value is None:
            object.__setattr__(self, "I_value", I_lower_bound(self.d, self.delta))
            src.setdefault("I_value", "I_lower_bound(d, delta)")
        else:
            src.setdefault("I_value", "supplied")
        src.setdefault("h_X", "supplied")
        src.setdefault("r_param", "supplied")
        object.__setattr__(self, "sources", src)

    @property
    def log_B(self) -> float:
        return math.log(self.B)

    def with_(self, **changes) -> "BoundInputs":
        return replace(self, **changes)


@dataclass
class BoundReport:
    """Named constants with the formula each one evaluates."""

    entries: Dict[str, Tuple[object, str]] = field(default_factory=dict)

    def add(self, name: str, value, formula: str):
        self.entries[name] = (value, formula)
        return value

    def __getitem__(self, name):
        return self.entries[name][0]

    def __contains__(self, name):
        return name in self.entries

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return {"exact": f"{v.numerator}/{v.denominator}", "value": float(v)}
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            return v

        return {k: {"value": enc(v), "formula": f} for k, (v, f) in self.entries.items()}


# ---------------------------------------------------------------------------
# Hilbert function estimates


def sombra_lower_bound(n: int, d: int, delta: int, D: int) -> int:
    """``C(D+d+1, d+1) - C(D-delta+d+1, d+1)``; exact for hypersurfaces."""
    if D < 1:
        raise ValueError("D must be >= 1")
    return binom(D + d + 1, d + 1) - binom(D - delta + d + 1, d + 1)


def chardin_upper_bound(delta: int, d: int, D: int) -> Tuple[int, int]:
    """``(delta * C(D+d, D), delta * (d+1)^D)``, both upper bounds for ``r_1(D)``."""
    if D < 1:
        raise ValueError("D must be >= 1")
    return delta * binom(D + d, D), delta * (d + 1) ** D


def _floor_root_shift(d: int, delta: int, y: int) -> int:
    """``floor(delta^(1/d) * y + (d+1)/2)`` without floating point."""
    half = Fraction(d + 1, 2)
    B = math.floor(half)
    # largest B with (B - half)^d <= delta y^d, B - half >= 0
    lo, hi = B, B + 1
    while (hi - half) ** d <= delta * y ** d:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if (mid - half) ** d <= delta * y ** d:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class RLowerBound:
    d: int
    D: int
    B: int
    L: Fraction
    dominant_coefficient: float
    B2: float

    def asymptotic_value(self) -> float:
        """``dominant * D^(d+1) + B_2 * D^d``, itself a lower bound for ``L(D)``."""
        return self.dominant_coefficient * self.D ** (self.d + 1) + self.B2 * self.D ** self.d


@lru_cache(maxsize=None)
def _B2_symbolic(d: int, delta: int) -> float:
    """Coefficient ``B_2`` with ``L(D) >= c D^(d+1) + B_2 D^d`` for ``D >= delta``.

    With ``x = delta^(1/d) y + (d+1)/2`` and ``y = D - delta + 2`` one has
    ``x - 1 < B <= x``, hence
    ``L >= (x - 1) delta y^d / d! - (x + d/2)^(d+1)/(d+1)! - 1``.
    Expanding in powers of D, each negative ``c_k D^k`` with ``k < d`` is at
    least ``c_k D^d`` because ``D >= 1``.
    """
    import sympy

    Dv = sympy.Symbol("D", positive=True)
    s = sympy.root(sympy.Integer(delta), d)
    y = Dv - delta + 2
    x = s * y + sympy.Rational(d + 1, 2)
    expr = ((x - 1) * delta * y ** d / sympy.factorial(d)
            - (x + sympy.Rational(d, 2)) ** (d + 1) / sympy.factorial(d + 1) - 1)
    poly = sympy.Poly(sympy.expand(expr), Dv)
    coeffs = {k[0]: c for k, c in zip(poly.monoms(), poly.coeffs())}
    total = coeffs.get(d, sympy.Integer(0))
    for k in range(d):
        c = coeffs.get(k, sympy.Integer(0))
        if c < 0:
            total += c
    return outward(float(sympy.N(total, 30)), -1)


def explicit_R_lower_bound(d: int, delta: int, D: int) -> RLowerBound:
    """The lower chain ``L(D)`` for the filtration sum ``R``, with its asymptotics.

    ``L(D) = B delta y^d / d! - (B + d/2)^(d+1)/(d+1)! - 1`` where
    ``y = D - delta + 2`` and ``B = floor(delta^(1/d) y + (d+1)/2)``.
    """
    if D < delta:
        raise ValueError(f"out of regime: D = {D} < delta = {delta}")
    y = D - delta + 2
    B = _floor_root_shift(d, delta, y)
    L = (Fraction(B * delta * y ** d, math.factorial(d))
         - (Fraction(B) + Fraction(d, 2)) ** (d + 1) / math.factorial(d + 1) - 1)
    dom = d * delta ** (1 + 1 / d) / math.factorial(d + 1)
    return RLowerBound(d, D, B, L, dom, _B2_symbolic(d, delta))


# ---------------------------------------------------------------------------
# the invariant I_X


def I_closed_form(kind: str, param: int) -> Fraction:
    """``curve`` of degree ``param``: ``delta^2/2``; ``linear_subspace`` of dimension ``param``: ``d/(d+1)``."""
    if kind == "curve":
        return Fraction(param * param, 2)
    if kind in ("linear_subspace", "linear"):
        return Fraction(param, param + 1)
    raise ValueError(f"no closed form for {kind!r}; use empirical_I or I_lower_bound")


def I_lower_bound(d: int, delta: int) -> Real:
    """``d * delta^(1 + 1/d) / (d+1)``; exact when delta is a perfect d-th power."""
    if d < 1 or delta < 1:
        raise ValueError("need d >= 1 and delta >= 1")
    r = exact_root(delta, d)
    if r is not None:
        return Fraction(d * delta * r, d + 1)
    return d * delta ** (1 + 1 / d) / (d + 1)


def cubic_remark_coefficient(n: int, delta: int) -> float:
    """Improved dominant coefficient of ``D^n`` for hypersurfaces with ``2 <= delta <= 2^(n-1)``."""
    if n < 3:
        raise ValueError("need n >= 3")
    if not 2 <= delta <= 2 ** (n - 1):
        raise ValueError(f"regime violation: need 2 <= delta <= {2 ** (n - 1)}")
    return (2 * delta / math.factorial(n)
            + delta * (delta / 2) ** (1 / (n - 2)) / math.factorial(n - 1) * (1 - 2 / n))


# ---------------------------------------------------------------------------
# counting constants


def C3_slope_constant(inp: BoundInputs) -> float:
    """``c(n, d, r)`` with ``C_3 <= c * delta``, from ``log C(n+delta, delta) <= delta log(n+1)``."""
    n, d, L = inp.n, inp.d, math.log(inp.n + 1)
    c1 = ((d + 2) * L
          + 0.5 * math.log((d + 2) * (n - d))
          + 0.5 * (d + 1) * L)
    excess = max(0.0, inp.mu_max_bound - 0.5 * inp.delta * L)
    c1 += (d + 2) * excess / inp.delta
    c2 = (inp.r_param * L / 2
          + 0.5 * math.log(binom(n + 1, n - d))
          + 0.5 * math.log(math.factorial(n - d))
          + (n - d))
    return (n - d) * c1 + c2


def constants_C123(inp: BoundInputs, r_param: Optional[int] = None) -> BoundReport:
    if r_param is not None:
        inp = inp.with_(r_param=r_param)
    n, d, delta = inp.n, inp.d, inp.delta
    logC = math.log(binom(n + delta, delta))
    rep = BoundReport()
    C1 = rep.add(
        "C_1",
        (d + 2) * inp.mu_max_bound + 0.5 * (d + 2) * logC
        + 0.5 * delta * math.log((d + 2) * (n - d)) + 0.5 * delta * (d + 1) * math.log(n + 1),
        "(d+2) mu_max + (1/2)(d+2) log C(n+delta,delta) + (delta/2) log((d+2)(n-d))"
        " + (delta/2)(d+1) log(n+1)",
    )
    C2 = rep.add(
        "C_2",
        0.5 * inp.r_param * logC + 0.5 * math.log(binom(n + 1, n - d))
        + 0.5 * math.log(math.factorial(n - d)) + (n - d) * math.log(delta),
        "(r/2) log C(n+delta,delta) + (1/2) log C(n+1,n-d) + log sqrt((n-d)!) + (n-d) log delta",
    )
    C3 = rep.add("C_3", C3_from(n - d, C1, C2), "(n-d) C_1 + C_2")
    c = rep.add("c(n,d,r)", C3_slope_constant(inp), "C_3 <= c(n,d,r) delta")
    if C3 > outward(c * delta, +1):
        raise AssertionError(f"C_3 = {C3} exceeds c * delta = {c * delta}")
    rep.add("mu_max_bound", inp.mu_max_bound, inp.sources.get("mu_max_bound", "supplied"))
    rep.add("r_param", inp.r_param, inp.sources.get("r_param", "supplied"))
    return rep


def C3_from(codim: int, C1: float, C2: float) -> float:
    return codim * C1 + C2


def _check_regime(inp: BoundInputs):
    if inp.log_B < float(inp.epsilon):
        raise ValueError(f"out of regime: log B = {inp.log_B:.4f} < epsilon = {float(inp.epsilon)}")
    if inp.I_value <= 0:
        raise ValueError("I_value must be positive")


def log_N0(inp: BoundInputs) -> float:
    return (float(1 + inp.epsilon)
            * (inp.log_B + 0.5 * inp.field_degree * math.log((inp.n + 1) * (inp.d + 1)))
            * inp.delta / float(inp.I_value))


def places_count(numerator: float, logN0: float) -> int:
    """Integral part of ``numerator / log N_0 + 1``."""
    return math.floor(numerator / logN0 + 1)


@dataclass(frozen=True)
class PrimePlan:
    N0: float
    log_N0: float
    r: int
    primes: Tuple[int, ...]
    numerator: float

    def to_json(self) -> dict:
        return {"N0": self.N0, "log_N0": self.log_N0, "r": self.r,
                "primes": list(self.primes), "numerator": self.numerator}


def prime_plan(inp: BoundInputs) -> PrimePlan:
    _check_regime(inp)
    lN0 = log_N0(inp)
    C3 = constants_C123(inp)["C_3"]
    codim = inp.n - inp.d
    num = codim * (inp.delta - 1) * inp.log_B + (codim * inp.h_X + C3) * inp.field_degree
    r = places_count(num, lN0)
    N0 = math.exp(lN0)
    primes: List[int] = []
    lo = Fraction(N0)
    alpha = Fraction(inp.alpha)
    for _ in range(r):
        p = next_prime_in_range(lo, alpha)
        if p is None:
            raise ArithmeticError(f"no prime in ({lo}, {alpha * lo}]")
        primes.append(p)
        lo *= alpha
    return PrimePlan(N0, lN0, r, tuple(primes), num)


def A_constants(inp: BoundInputs) -> Dict[str, float]:
    n, d, delta = inp.n, inp.d, inp.delta
    G = Fraction((2 * d + 2) ** (d + 1), math.factorial(d))
    A1 = float((n - d) * (delta - 1) + G * (n - d) * delta)
    C3 = constants_C123(inp)["C_3"]
    A2 = inp.field_degree * (
        C3 + float(G) * delta * (math.log(n + 1) + 0.5 * math.log(d + 1) + 2 ** d))
    A3 = A3_from(inp.I_value, delta, A1, A2, inp.epsilon)
    return {"A_1": A1, "A_2": A2, "A_3": A3}


def A3_from(I_value: Real, delta: int, A1: float, A2: float, epsilon) -> float:
    return float(I_value) / delta * (A1 + A2 / float(epsilon)) + 1


def log_C4_double_prime(inp: BoundInputs, A3: float) -> float:
    """log of ``delta(d+1) a^d (a^(A_3 d) - 1)/(a^d - 1) * ((d+1)(n+1))^(e/2 (d+1) delta^(-1/d))``."""
    d, a = inp.d, float(inp.alpha)
    la = math.log(a)
    # log(a^(A3 d) - 1) computed stably for large exponents
    t = A3 * d * la
    log_geom = t + math.log1p(-math.exp(-t)) if t > 0 else -math.inf
    expo = 0.5 * float(1 + inp.epsilon) * inp.field_degree * (d + 1) * inp.delta ** (-1 / d)
    return (math.log(inp.delta * (d + 1)) + d * la + log_geom - math.log(a ** d - 1)
            + expo * math.log((d + 1) * (inp.n + 1)))


def count_exponent(inp: BoundInputs) -> float:
    return float(1 + inp.epsilon) * inp.d * inp.delta / float(inp.I_value)


@dataclass(frozen=True)
class CountBound:
    A: Dict[str, float]
    log_C4pp: float
    log_C4: float
    exponent: float
    log_value: float

    @property
    def C4pp(self) -> float:
        return _safe_exp(self.log_C4pp)

    @property
    def C4(self) -> float:
        return _safe_exp(self.log_C4)

    @property
    def value(self) -> float:
        return _safe_exp(self.log_value)

    def to_json(self) -> dict:
        return {**self.A, "log_C4''": self.log_C4pp, "log_C4": self.log_C4,
                "C4": self.C4, "exponent": self.exponent, "log_count_bound": self.log_value,
                "count_bound": self.value}


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def count_bound(inp: BoundInputs, A3_override: Optional[float] = None) -> CountBound:
    """``C_4 * B^((1+eps) d delta / I)`` with ``C_4 = C''_4 + 1``, kept in log space."""
    _check_regime(inp)
    A = A_constants(inp)
    if A3_override is not None:
        A["A_3"] = float(A3_override)
    lpp = log_C4_double_prime(inp, A["A_3"])
    # log(C'' + 1) = l + log1p(exp(-l))
    l4 = lpp + math.log1p(math.exp(-lpp)) if lpp > -700 else math.log1p(math.exp(lpp))
    expo = count_exponent(inp)
    return CountBound(A, lpp, l4, expo, l4 + expo * inp.log_B)


def large_height_threshold(inp: BoundInputs) -> float:
    d = inp.d
    G = (2 * d + 2) ** (d + 1) / math.factorial(d)
    return G * inp.delta * (inp.log_B / inp.field_degree + 1.5 * math.log(inp.n + 1) + 2 ** d)


def part_one_degree(n: int, d: int, delta: int) -> int:
    return 2 * (n - d) * (delta - 1) + d + 2


def full_report(inp: BoundInputs) -> BoundReport:
    """Every constant the counting argument uses, for one set of inputs."""
    rep = constants_C123(inp)
    rep.add("I_value", inp.I_value, inp.sources.get("I_value", "supplied"))
    rep.add("h_X", inp.h_X, inp.sources.get("h_X", "supplied"))
    rep.add("large_height_threshold", large_height_threshold(inp),
            "(2d+2)^(d+1)/d! delta (log B/[K:Q] + (3/2) log(n+1) + 2^d)")
    rep.add("part_one_degree", part_one_degree(inp.n, inp.d, inp.delta), "2(n-d)(delta-1)+d+2")
    plan = prime_plan(inp)
    rep.add("log_N0", plan.log_N0,
            "(1+eps)(log B + (1/2)[K:Q] log((n+1)(d+1))) delta / I")
    rep.add("r", plan.r, "floor(((n-d)(delta-1) log B + ((n-d) h_X + C_3)[K:Q]) / log N_0 + 1)")
    rep.add("primes", list(plan.primes), "least prime in (alpha^(i-1) N_0, alpha^i N_0]")
    cb = count_bound(inp)
    rep.add("A_1", cb.A["A_1"], "(n-d)(delta-1) + (2d+2)^(d+1)/d! (n-d) delta")
    rep.add("A_2", cb.A["A_2"],
            "[K:Q](C_3 + (2d+2)^(d+1)/d! delta (log(n+1) + (1/2) log(d+1) + 2^d))")
    rep.add("A_3", cb.A["A_3"], "(I/delta)(A_1 + A_2/eps) + 1")
    rep.add("log_C4''", cb.log_C4pp,
            "log[delta(d+1) a^d (a^(A_3 d) - 1)/(a^d - 1) ((d+1)(n+1))^((1+eps)[K:Q](d+1) delta^(-1/d)/2)]")
    rep.add("log_C4", cb.log_C4, "log(C''_4 + 1)")
    rep.add("exponent", cb.exponent, "(1+eps) d delta / I")
    rep.add("log_count_bound", cb.log_value, "log C_4 + exponent log B")
    rep.add("count_bound", cb.value, "C_4 B^((1+eps) d delta / I)")
    return rep
