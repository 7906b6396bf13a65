"""Exact integer/rational linear algebra, p-adic valuations and small primes.

Everything here works on plain Python ints and :class:`fractions.Fraction`,
so results are exact regardless of size.  Matrices are lists of rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Rational = Fraction
Matrix = List[List]

INFINITE = math.inf
FLOAT_GUARD = 1e-12


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    return Fraction(x)


@dataclass(frozen=True)
class LogValue:
    """The real number ``(1/2) * log(radicand)`` carried exactly.

    Adding two values multiplies their radicands; scaling by an integer raises
    the radicand to that power.
    """

    radicand: Fraction

    def __post_init__(self):
        r = as_rational(self.radicand)
        if r <= 0:
            raise ValueError("LogValue radicand must be positive")
        object.__setattr__(self, "radicand", r)

    @classmethod
    def of_log(cls, x) -> "LogValue":
        """The value ``log(x)`` for rational ``x > 0``."""
        x = as_rational(x)
        return cls(x * x)

    def __add__(self, other: "LogValue") -> "LogValue":
        return LogValue(self.radicand * other.radicand)

    def __neg__(self) -> "LogValue":
        return LogValue(1 / self.radicand)

    def __sub__(self, other: "LogValue") -> "LogValue":
        return self + (-other)

    def __mul__(self, k: int) -> "LogValue":
        if not isinstance(k, int):
            raise TypeError("LogValue can only be scaled by an integer")
        return LogValue(self.radicand ** k)

    __rmul__ = __mul__

    def __float__(self) -> float:
        r = self.radicand
        v = 0.5 * (math.log(r.numerator) - math.log(r.denominator))
        return 0.0 if abs(v) < FLOAT_GUARD else v

    def enclosure(self) -> Tuple[float, float]:
        """Float interval guaranteed to contain the exact value."""
        v = float(self)
        eps = FLOAT_GUARD * max(1.0, abs(v))
        return v - eps, v + eps


def outward(value: float, direction: int) -> float:
    """Push a float outward by the standard guard (direction -1 or +1)."""
    return value + direction * FLOAT_GUARD * max(1.0, abs(value))


# ---------------------------------------------------------------------------
# primes and valuations


def padic_valuation(x: int, p: int) -> float:
    """Largest ``e`` with ``p**e | x``; ``math.inf`` when ``x == 0``."""
    if p < 2:
        raise ValueError("p must be a prime")
    if x == 0:
        return INFINITE
    x = abs(x)
    e = 0
    while x % p == 0:
        x //= p
        e += 1
    return e


def is_prime(n: int) -> bool:
    from sympy import isprime

    return bool(isprime(n))


def next_prime_in_range(N0, alpha=2) -> Optional[int]:
    """Least prime ``p`` with ``N0 < p <= alpha * N0``.

    Returns ``None`` when the window holds no prime, which cannot happen over
    the rationals for ``alpha >= 2`` (Bertrand).
    """
    N0 = as_rational(N0)
    alpha = as_rational(alpha)
    if N0 < 1:
        raise ValueError("N0 must be >= 1")
    hi = N0 * alpha
    p = math.floor(N0) + 1
    while p <= hi:
        if is_prime(p):
            return p
        p += 1
    return None


# ---------------------------------------------------------------------------
# rational elimination


def rref(M: Sequence[Sequence]) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    A = [[Fraction(v) for v in row] for row in M]
    if not A:
        return [], []
    ncols = len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                factor = A[i][c]
                A[i] = [a - factor * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank_and_kernel_over_Q(M: Sequence[Sequence], ncols: Optional[int] = None):
    """Exact rank of ``M`` and a basis of its right kernel.

    ``ncols`` is needed only when ``M`` has no rows.
    """
    if not M:
        n = ncols or 0
        return 0, [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    n = len(M[0])
    R, pivots = rref(M)
    free = [c for c in range(n) if c not in set(pivots)]
    kernel = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[fc]
        kernel.append(v)
    return len(pivots), kernel


def primitive_integer_vector(v: Sequence) -> List[int]:
    """Scale a rational vector to coprime integers, first nonzero entry positive."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return ints
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return ints


class EchelonBasis:
    """Incrementally grown echelon basis of integer row vectors.

    Rows are kept fraction-free and content-reduced, so ``add`` returns
    whether a new vector enlarged the span, exactly.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict = {}  # pivot column -> row

    @property
    def rank(self) -> int:
        return len(self.rows)

    def add(self, vec: Sequence) -> bool:
        row = primitive_integer_vector(vec) if any(
            isinstance(x, Fraction) and x.denominator != 1 for x in vec
        ) else [int(x) for x in vec]
        for c in range(self.ncols):
            a = row[c]
            if a == 0:
                continue
            e = self.rows.get(c)
            if e is None:
                g = 0
                for x in row:
                    g = math.gcd(g, x)
                row = [x // g for x in row]
                self.rows[c] = row
                return True
            b = e[c]
            g = math.gcd(a, b)
            fa, fb = b // g, a // g
            row = [fa * x - fb * y for x, y in zip(row, e)]
            g = 0
            for x in row:
                g = math.gcd(g, x)
            if g == 0:
                return False
            if g > 1:
                row = [x // g for x in row]
        return False


def rank_over_Q(M: Sequence[Sequence]) -> int:
    if not M:
        return 0
    basis = EchelonBasis(len(M[0]))
    for row in M:
        basis.add(row)
    return basis.rank


def det_integer(M: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(map(int, row)) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            rowi = A[i]
            rowk = A[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = akk
    return sign * A[n - 1][n - 1]


def det_rational(M: Sequence[Sequence]) -> Fraction:
    """Determinant of a square rational matrix (row denominators cleared)."""
    scale = Fraction(1)
    rows = []
    for row in M:
        den = 1
        for x in row:
            den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
        rows.append([int(Fraction(x) * den) for x in row])
        scale *= den
    return Fraction(det_integer(rows)) / scale


# ---------------------------------------------------------------------------
# Smith normal form


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M: Sequence[Sequence[int]]):
    """Smith normal form of an integer matrix.

    Returns ``(divisors, U, V)`` with ``U @ M @ V`` diagonal, the diagonal
    being ``divisors`` (length ``min(rows, cols)``, zeros last) with each
    entry dividing the next.  ``U`` and ``V`` are unimodular.
    """
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m)
    V = _identity(n)
    if m == 0 or n == 0:
        return [], U, V

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in A:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    for t in range(min(m, n)):
        while True:
            # smallest nonzero entry of the remaining block becomes the pivot
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] != 0 and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    add_row(i, t, q)
                if A[i][t] != 0:
                    clean = False
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    add_col(j, t, q)
                if A[t][j] != 0:
                    clean = False
            if not clean:
                continue
            # enforce divisibility of the rest of the block
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
            U[t] = [a + b for a, b in zip(U[t], U[bad[0]])]
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    divisors = [A[i][i] for i in range(min(m, n))]
    return divisors, U, V


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


# ---------------------------------------------------------------------------
# prime fields


@dataclass(frozen=True)
class PrimeField:
    """The residue field F_p with elements represented as ints in [0, p)."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def __call__(self, x) -> int:
        x = as_rational(x)
        num = x.numerator % self.p
        den = x.denominator % self.p
        if den == 0:
            raise ZeroDivisionError(f"denominator divisible by {self.p}")
        return num * pow(den, -1, self.p) % self.p

    def inv(self, a: int) -> int:
        return pow(a, -1, self.p)

    def rank(self, M: Sequence[Sequence]) -> int:
        p = self.p
        A = [[self(v) for v in row] for row in M]
        if not A:
            return 0
        r = 0
        for c in range(len(A[0])):
            piv = next((i for i in range(r, len(A)) if A[i][c]), None)
            if piv is None:
                continue
            A[r], A[piv] = A[piv], A[r]
            inv = pow(A[r][c], -1, p)
            A[r] = [v * inv % p for v in A[r]]
            for i in range(len(A)):
                if i != r and A[i][c]:
                    f = A[i][c]
                    A[i] = [(a - f * b) % p for a, b in zip(A[i], A[r])]
            r += 1
            if r == len(A):
                break
        return r

    def projective_points(self, n: int):
        """All points of P^n(F_p), normalized with first nonzero coordinate 1."""
        p = self.p
        for lead in range(n + 1):
            tail = n - lead
            for k in range(p ** tail):
                rest = []
                for _ in range(tail):
                    rest.append(k % p)
                    k //= p
                yield tuple([0] * lead + [1] + rest[::-1])

    def normalize(self, coords: Sequence[int]) -> Tuple[int, ...]:
        c = [x % self.p for x in coords]
        lead = next((x for x in c if x), None)
        if lead is None:
            raise ValueError("zero vector is not a projective point")
        inv = pow(lead, -1, self.p)
        return tuple(x * inv % self.p for x in c)
