"""Homogeneous forms with exact coefficients, monomial bases and jets.

Monomials are exponent tuples.  The canonical order is graded-lex with
``x_0 > x_1 > ... > x_n``; within a fixed degree this is plain lexicographic
order on the tuples, and "canonical order" lists the largest monomial first.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exactmath import as_rational

Monomial = Tuple[int, ...]

VARIABLE_NAMES = {
    2: "xy",
    3: "xyz",
    4: "xyzw",
}


def monomial_basis(n: int, D: int) -> List[Monomial]:
    """All degree-``D`` monomials in ``n + 1`` variables, largest first."""
    if n < 0 or D < 0:
        raise ValueError("need n >= 0 and D >= 0")
    out = []
    for combo in combinations_with_replacement(range(n + 1), D):
        e = [0] * (n + 1)
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def grlex_key(m: Monomial):
    return (sum(m), m)


def variable_names(nvars: int) -> List[str]:
    if nvars in VARIABLE_NAMES:
        return list(VARIABLE_NAMES[nvars])
    return [f"x{i}" for i in range(nvars)]


@dataclass(frozen=True)
class Form:
    """A homogeneous polynomial in ``nvars`` variables.

    Coefficients are Fractions, or residues ``0 <= c < p`` when ``p`` is set.
    The zero form has no terms; its ``degree`` is still recorded.
    """

    nvars: int
    degree: int
    coeffs: Mapping[Monomial, object] = field(default_factory=dict)
    p: Optional[int] = None

    def __post_init__(self):
        clean = {}
        for m, c in self.coeffs.items():
            m = tuple(int(e) for e in m)
            if len(m) != self.nvars:
                raise ValueError(f"monomial {m} has wrong number of variables")
            if sum(m) != self.degree:
                raise ValueError(f"monomial {m} is not of degree {self.degree}")
            c = c % self.p if self.p else as_rational(c)
            if c:
                clean[m] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items(), reverse=True)))

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, degree: int, p: Optional[int] = None) -> "Form":
        return cls(nvars, degree, {}, p)

    @classmethod
    def monomial(cls, m: Sequence[int], c=1, p: Optional[int] = None) -> "Form":
        m = tuple(m)
        return cls(len(m), sum(m), {m: c}, p)

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[Sequence[int], object]], nvars: Optional[int] = None) -> "Form":
        coeffs: Dict[Monomial, Fraction] = {}
        degree = None
        for m, c in terms:
            m = tuple(m)
            nvars = nvars or len(m)
            degree = sum(m) if degree is None else degree
            coeffs[m] = coeffs.get(m, Fraction(0)) + as_rational(c)
        if degree is None:
            raise ValueError("cannot infer the degree of an empty term list")
        return cls(nvars, degree, coeffs)

    @classmethod
    def parse(cls, text: str, names: Optional[Sequence[str]] = None,
              nvars: Optional[int] = None) -> "Form":
        """Parse an expression such as ``"x*z - y^2"`` (uses sympy).

        Variables are ``x, y, z, w`` (or ``x0, x1, ...``); pass ``nvars`` when
        the expression does not mention all of them.
        """
        import sympy

        expr = sympy.sympify(text.replace("^", "**"))
        if names is None and nvars is not None:
            names = variable_names(nvars)
        if names is None:
            syms = sorted(expr.free_symbols, key=lambda s: s.name)
            for nv, letters in VARIABLE_NAMES.items():
                if {s.name for s in syms} <= set(letters):
                    names = list(letters)
                    break
            else:
                names = [s.name for s in syms]
        gens = [sympy.Symbol(nm) for nm in names]
        poly = sympy.Poly(expr, *gens)
        terms = [(m, Fraction(int(c.p), int(c.q))) for m, c in poly.terms()]
        return cls.from_terms(terms, nvars=len(gens))

    # -- basic properties --------------------------------------------------

    @property
    def n(self) -> int:
        """Projective dimension of the ambient space."""
        return self.nvars - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def terms(self) -> List[Tuple[Monomial, object]]:
        return list(self.coeffs.items())

    def leading_monomial(self) -> Optional[Monomial]:
        return next(iter(self.coeffs), None)

    def leading_coefficient(self):
        m = self.leading_monomial()
        return None if m is None else self.coeffs[m]

    def is_integral(self) -> bool:
        return self.p is None and all(c.denominator == 1 for c in self.coeffs.values())

    def content(self) -> Fraction:
        if self.p is not None:
            raise ValueError("content is defined over Q only")
        if not self.coeffs:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.coeffs.values():
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self, normalize_sign: bool = True) -> "Form":
        """Integer coprime multiple, by default with positive leading coefficient."""
        if not self.coeffs:
            return self
        c = self.content()
        if normalize_sign and self.leading_coefficient() < 0:
            c = -c
        return self.scale(1 / c)

    def max_abs_coefficient(self) -> Fraction:
        return max((abs(c) for c in self.coeffs.values()), default=Fraction(0))

    # -- arithmetic --------------------------------------------------------

    def _combine(self, other: "Form", sign: int) -> "Form":
        if other.nvars != self.nvars or other.p != self.p:
            raise ValueError("incompatible forms")
        if other.degree != self.degree and self.coeffs and other.coeffs:
            raise ValueError("cannot add forms of different degrees")
        deg = self.degree if self.coeffs else other.degree
        c = dict(self.coeffs)
        for m, v in other.coeffs.items():
            c[m] = c.get(m, 0) + sign * v
        return Form(self.nvars, deg, c, self.p)

    def __add__(self, other: "Form") -> "Form":
        return self._combine(other, 1)

    def __sub__(self, other: "Form") -> "Form":
        return self._combine(other, -1)

    def __neg__(self) -> "Form":
        return self.scale(-1)

    def scale(self, c) -> "Form":
        return Form(self.nvars, self.degree, {m: v * c for m, v in self.coeffs.items()}, self.p)

    def __mul__(self, other):
        if not isinstance(other, Form):
            return self.scale(other)
        if other.nvars != self.nvars or other.p != self.p:
            raise ValueError("incompatible forms")
        out: Dict[Monomial, object] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Form(self.nvars, self.degree + other.degree, out, self.p)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        if self.nvars != other.nvars or self.p != other.p:
            return False
        if not self.coeffs and not other.coeffs:
            return True
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.nvars, self.degree, self.p, tuple(self.coeffs.items())))

    def mod_p(self, p: int) -> "Form":
        from .exactmath import PrimeField

        F = PrimeField(p)
        return Form(self.nvars, self.degree, {m: F(c) for m, c in self.coeffs.items()}, p)

    # -- evaluation and calculus -------------------------------------------

    def evaluate(self, point: Sequence) -> object:
        """Exact value at the given coordinates (residue mod p if ``p`` set)."""
        if len(point) != self.nvars:
            raise ValueError("point has the wrong number of coordinates")
        p = self.p
        total = 0
        for m, c in self.coeffs.items():
            t = c
            for x, e in zip(point, m):
                if e:
                    t = t * (pow(x, e, p) if p else x ** e)
            total += t
        if p:
            return total % p
        return as_rational(total)

    __call__ = evaluate

    def partial_derivative(self, i: int) -> "Form":
        if self.degree < 1:
            raise ValueError("cannot differentiate a constant form")
        out = {}
        for m, c in self.coeffs.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                out[tuple(mm)] = c * m[i]
        return Form(self.nvars, self.degree - 1, out, self.p)

    def gradient(self) -> List["Form"]:
        return [self.partial_derivative(i) for i in range(self.nvars)]

    # -- division ----------------------------------------------------------

    def divmod(self, f: "Form") -> Tuple["Form", "Form"]:
        """Multivariate division by a single form (graded-lex leading terms)."""
        if f.is_zero():
            raise ZeroDivisionError("division by the zero form")
        lm = f.leading_monomial()
        lc = f.leading_coefficient()
        inv = pow(lc, -1, self.p) if self.p else 1 / lc
        qdeg = self.degree - f.degree
        rem = dict(self.coeffs)
        quo: Dict[Monomial, object] = {}
        remainder: Dict[Monomial, object] = {}
        while rem:
            m = max(rem)
            c = rem.pop(m)
            if c == 0:
                continue
            if qdeg >= 0 and all(a >= b for a, b in zip(m, lm)):
                q = tuple(a - b for a, b in zip(m, lm))
                qc = c * inv
                quo[q] = quo.get(q, 0) + qc
                for fm, fc in f.coeffs.items():
                    if fm == lm:
                        continue
                    t = tuple(a + b for a, b in zip(q, fm))
                    v = rem.get(t, 0) - qc * fc
                    if self.p:
                        v %= self.p
                    if v:
                        rem[t] = v
                    else:
                        rem.pop(t, None)
            else:
                remainder[m] = c
        Q = Form(self.nvars, max(qdeg, 0), quo, self.p) if quo else Form.zero(self.nvars, max(qdeg, 0), self.p)
        R = Form(self.nvars, self.degree, remainder, self.p)
        return Q, R

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        if self.p is not None:
            raise ValueError("only rational forms are serialized")
        return {
            "n": self.n,
            "degree": self.degree,
            "terms": [[list(m), c.numerator, c.denominator] for m, c in self.coeffs.items()],
        }

    @classmethod
    def from_json(cls, data) -> "Form":
        if isinstance(data, str):
            data = json.loads(data)
        nvars = int(data["n"]) + 1
        degree = int(data["degree"])
        coeffs = {}
        for term in data["terms"]:
            m = tuple(term[0])
            den = term[2] if len(term) > 2 else 1
            coeffs[m] = coeffs.get(m, Fraction(0)) + Fraction(int(term[1]), int(den))
        return cls(nvars, degree, coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        names = variable_names(self.nvars)
        parts = []
        for m, c in self.coeffs.items():
            mono = "*".join(
                (nm if e == 1 else f"{nm}^{e}") for nm, e in zip(names, m) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Form({self})"


def divides_modulo(g: Form, f: Form) -> bool:
    """True iff ``g`` lies in the principal ideal ``(f)``."""
    if f.is_zero():
        raise ValueError("f must be nonzero")
    if g.is_zero():
        return True
    if g.degree < f.degree:
        return False
    _, r = g.divmod(f)
    return r.is_zero()


# ---------------------------------------------------------------------------
# truncated power series in local parameters


Series = Dict[Tuple[int, ...], Fraction]


def series_mul(a: Series, b: Series, order: int) -> Series:
    """Product truncated to total degree <= order."""
    out: Series = {}
    if not a or not b:
        return out
    if len(next(iter(a))) == 1:
        for (i,), x in a.items():
            lim = order - i
            for (j,), y in b.items():
                if j <= lim:
                    k = (i + j,)
                    out[k] = out.get(k, 0) + x * y
    else:
        for ea, x in a.items():
            da = sum(ea)
            for eb, y in b.items():
                if da + sum(eb) <= order:
                    k = tuple(u + v for u, v in zip(ea, eb))
                    out[k] = out.get(k, 0) + x * y
    return {k: v for k, v in out.items() if v}


def series_add(a: Series, b: Series, scale=1) -> Series:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + scale * v
    return {k: v for k, v in out.items() if v}


def series_truncate(a: Series, order: int) -> Series:
    return {k: v for k, v in a.items() if sum(k) <= order}


def _substitute(f: Form, coords: Sequence[Series], order: int, nparams: int) -> Series:
    """Evaluate ``f`` at coordinates given as series, truncated at ``order``."""
    one = {(0,) * nparams: Fraction(1)}
    powers: Dict[Tuple[int, int], Series] = {}

    def power(i, e):
        if e == 0:
            return one
        key = (i, e)
        if key not in powers:
            powers[key] = series_mul(power(i, e - 1), coords[i], order)
        return powers[key]

    total: Series = {}
    for m, c in f.coeffs.items():
        term = one
        for i, e in enumerate(m):
            if e:
                term = series_mul(term, power(i, e), order)
        total = series_add(total, term, c)
    return total


def default_chart(point: Sequence[int]) -> int:
    """Index of the coordinate of largest absolute value (lowest index on ties)."""
    best = max(abs(x) for x in point)
    if best == 0:
        raise ValueError("the zero vector is not a projective point")
    return next(i for i, x in enumerate(point) if abs(x) == best)


@dataclass
class LocalChart:
    """Affine chart at a point, optionally restricted to a hypersurface.

    ``coords[i]`` is the series of ``x_i / x_chart`` in the local parameters;
    ``params`` lists the ambient variables used as local parameters and
    ``eliminated`` the variable solved for on the hypersurface (or None).
    """

    center: Tuple[int, ...]
    chart: int
    params: List[int]
    eliminated: Optional[int]
    order: int
    coords: List[Series]


def local_chart(point: Sequence[int], order: int, f: Optional[Form] = None,
                chart: Optional[int] = None) -> LocalChart:
    point = tuple(int(x) for x in point)
    nvars = len(point)
    if chart is None:
        chart = default_chart(point)
    if point[chart] == 0:
        raise ValueError(f"chart coordinate {chart} vanishes at {point}")
    a = [Fraction(x, point[chart]) for x in point]
    ambient = [i for i in range(nvars) if i != chart]
    k = len(ambient)
    coords: List[Series] = []
    for i in range(nvars):
        s: Series = {}
        if a[i]:
            s[(0,) * k] = a[i]
        if i != chart:
            e = [0] * k
            e[ambient.index(i)] = 1
            s[tuple(e)] = Fraction(1)
        coords.append(s)
    if f is None:
        return LocalChart(point, chart, ambient, None, order, coords)

    floc = _substitute(f, coords, f.degree, k)
    if floc.get((0,) * k, 0) != 0:
        raise ValueError(f"{point} does not lie on the hypersurface")
    linear = {}
    for idx in range(k):
        e = [0] * k
        e[idx] = 1
        linear[idx] = floc.get(tuple(e), 0)
    j_idx = next((idx for idx in range(k) if linear[idx] != 0), None)
    if j_idx is None:
        raise ValueError(f"{point} is a singular point of the hypersurface")
    cj = linear[j_idx]
    rest = [idx for idx in range(k) if idx != j_idx]
    d = len(rest)

    # group f_loc by powers of the eliminated parameter: f_loc = sum_e h_e(u) t^e
    by_power: Dict[int, Series] = {}
    for e, c in floc.items():
        u = tuple(e[idx] for idx in rest)
        by_power.setdefault(e[j_idx], {})[u] = c
    h0 = dict(by_power.get(1, {}))
    h0.pop((0,) * d, None)  # remove c_j * t_j itself
    by_power[1] = h0

    phi: Series = {}
    for step in range(1, order + 1):
        acc: Series = {}
        pw: Series = {(0,) * d: Fraction(1)}
        for e in range(0, max(by_power) + 1):
            if e:
                pw = series_mul(pw, phi, step)
            he = by_power.get(e)
            if he:
                acc = series_add(acc, series_mul(he, pw, step))
        phi = {u: -v / cj for u, v in acc.items()}

    def lift(idx_in_ambient: int) -> Series:
        if idx_in_ambient == j_idx:
            return phi
        e = [0] * d
        e[rest.index(idx_in_ambient)] = 1
        return {tuple(e): Fraction(1)}

    local_coords: List[Series] = []
    for i in range(nvars):
        s: Series = {}
        if a[i]:
            s[(0,) * d] = a[i]
        if i != chart:
            s = series_add(s, lift(ambient.index(i)))
        local_coords.append(series_truncate(s, order))
    params = [ambient[idx] for idx in rest]
    return LocalChart(point, chart, params, ambient[j_idx], order, local_coords)


@dataclass
class JetExpansion:
    """Homogeneous pieces of a form's local expansion at a point.

    ``pieces[k]`` maps exponent tuples over ``params`` to coefficients of
    total degree ``k``.
    """

    center: Tuple[int, ...]
    chart: int
    params: List[int]
    eliminated: Optional[int]
    pieces: List[Series]

    def piece_form(self, k: int, nvars: int) -> Form:
        """Piece ``k`` written as a form in the ambient variable names."""
        out = {}
        for e, c in self.pieces[k].items():
            m = [0] * nvars
            for idx, v in zip(self.params, e):
                m[idx] = v
            out[tuple(m)] = c
        return Form(nvars, k, out)

    def order_of_vanishing(self) -> Optional[int]:
        return next((k for k, pc in enumerate(self.pieces) if pc), None)


def jet_at(f: Form, point: Sequence[int], max_order: int, hypersurface: Optional[Form] = None,
           chart: Optional[int] = None) -> JetExpansion:
    """Local expansion of ``f`` at ``point`` up to ``max_order``.

    Without ``hypersurface`` the pieces live in the ``n`` ambient parameters
    of the affine chart; with it, one parameter is eliminated by solving the
    hypersurface equation (the point must then be a regular point).
    """
    if max_order < 0:
        raise ValueError("max_order must be >= 0")
    ch = local_chart(point, max_order, hypersurface, chart)
    nparams = len(ch.params)
    series = _substitute(f, ch.coords, max_order, nparams)
    pieces: List[Series] = [dict() for _ in range(max_order + 1)]
    for e, c in series.items():
        pieces[sum(e)][e] = c
    return JetExpansion(ch.center, ch.chart, ch.params, ch.eliminated, pieces)


def substitute_series(f: Form, ch: LocalChart) -> Series:
    return _substitute(f, ch.coords, ch.order, len(ch.params))
