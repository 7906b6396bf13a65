"""Auxiliary forms, the p-adic determinant check and the covering experiment."""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .bounds import (BoundInputs, count_bound, large_height_threshold, part_one_degree,
                     prime_plan)
from .exactmath import INFINITE, det_integer, padic_valuation, rank_and_kernel_over_Q
from .heights import ProjPoint, naive_form_height
from .jets import filtration_profile, graded_piece, hypersurface_rank
from .poly import Form, divides_modulo
from .varieties import (Hypersurface, NotOnVariety, ResidueClass, SingularPoint, enumerate_points,
                        reduce_mod_p, regular_mod_p)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AuxiliaryForm:
    """A form of degree ``degree_used`` through ``covered_points`` and not in (f).

    The empty cover (``form is None``) stands for "nothing to cover".
    """

    form: Optional[Form]
    degree_used: int
    covered_points: Tuple[ProjPoint, ...] = ()
    class_info: Optional[ResidueClass] = None

    @property
    def is_empty(self) -> bool:
        return self.form is None

    def covers(self, P: ProjPoint) -> bool:
        return self.form is not None and self.form.evaluate(P.coords) == 0

    def to_json(self) -> dict:
        return {
            "form": None if self.form is None else str(self.form),
            "form_json": None if self.form is None else self.form.to_json(),
            "degree": self.degree_used,
            "covered_points": [P.to_json() for P in self.covered_points],
        }


def _as_points(X: Hypersurface, points: Sequence) -> Tuple[ProjPoint, ...]:
    pts = tuple(P if isinstance(P, ProjPoint) else ProjPoint(tuple(P)) for P in points)
    for P in pts:
        if not X.contains(P.coords):
            raise NotOnVariety(f"{P} is not on {X}")
    return pts


def _grlex_lead(g: Form):
    m = g.leading_monomial()
    return (sum(m), m)


def find_auxiliary_form(X: Hypersurface, points: Sequence, D: int) -> Optional[AuxiliaryForm]:
    """A degree-D form vanishing at ``points`` and nonzero on X, or None.

    Among the kernel basis vectors of the evaluation map on F_D, each is made
    into a coprime integral form with positive leading coefficient and the one
    with the smallest leading monomial is returned.
    """
    if D < 1:
        raise ValueError("D must be >= 1")
    pts = _as_points(X, points)
    basis = graded_piece(X, D).basis
    M = [[b.evaluate(P.coords) for b in basis] for P in pts]
    if M:
        _, kernel = rank_and_kernel_over_Q(M, len(basis))
    else:
        kernel = [[Fraction(int(i == j)) for j in range(len(basis))] for i in range(len(basis))]
    if not kernel:
        return None
    candidates = []
    for v in kernel:
        g = Form.zero(X.f.nvars, D)
        for c, b in zip(v, basis):
            if c:
                g = g + b.scale(c)
        candidates.append(g.primitive())
    best = min(candidates, key=_grlex_lead)
    if divides_modulo(best, X.f):
        raise ArithmeticError(f"kernel form {best} lies in (f)")
    bad = [P for P in pts if best.evaluate(P.coords) != 0]
    if bad:
        raise ArithmeticError(f"kernel form {best} does not vanish at {bad}")
    return AuxiliaryForm(best, D, pts)


@dataclass(frozen=True)
class DeterminantCheck:
    determinant: int
    valuation: float
    R: int
    holds: bool

    def to_json(self) -> dict:
        v = self.valuation
        return {"determinant": str(self.determinant),
                "valuation": "inf" if math.isinf(v) else int(v),
                "R": self.R, "holds": self.holds}


def determinant_valuation_check(X: Hypersurface, points: Sequence, D: int, p: int) -> DeterminantCheck:
    """``v_p`` of the interpolation determinant against the filtration sum R."""
    pts = _as_points(X, points)
    r1 = hypersurface_rank(X.n, X.delta, D)
    if len(pts) != r1:
        raise ValueError(f"need exactly r_1 = {r1} points, got {len(pts)}")
    reductions = {reduce_mod_p(P.coords, p) for P in pts}
    if len(reductions) != 1:
        raise ValueError(f"points reduce to {len(reductions)} distinct points mod {p}")
    xi = next(iter(reductions))
    if not regular_mod_p(X, xi, p):
        raise SingularPoint(f"common reduction {xi} is singular mod {p}")
    basis = graded_piece(X, D).basis
    M = [[int(b.evaluate(P.coords)) for b in basis] for P in pts]
    det = det_integer(M)
    v = padic_valuation(det, p)
    R = filtration_profile(X, D, pts[0].coords).R
    return DeterminantCheck(det, v, R, v >= R)


def singular_cover(X: Hypersurface, points: Sequence = ()) -> AuxiliaryForm:
    """A primitive partial derivative of f, which vanishes on the singular locus.

    The nonzero partial with the smallest leading monomial is used; it has
    degree ``delta - 1`` and so is not a multiple of ``f``.  Linear ``f``
    have no singular points and get the empty cover.
    """
    if X.delta == 1:
        return AuxiliaryForm(None, 0, ())
    partials = [g for g in X.gradient if not g.is_zero()]
    g = min(partials, key=_grlex_lead).primitive()
    assert not divides_modulo(g, X.f)
    covered = tuple(P for P in _as_points(X, points) if not X.is_regular(P.coords))
    return AuxiliaryForm(g, g.degree, covered)


# ---------------------------------------------------------------------------
# the experiment


@dataclass(frozen=True)
class ExperimentConfig:
    max_degree: int = 8
    jobs: int = 1
    h_X: Optional[float] = None
    I_value: Optional[object] = None
    r_param: int = 1
    alpha: int = 2


@dataclass
class ClassOutcome:
    p: int
    point_mod_p: Tuple[int, ...]
    members: Tuple[ProjPoint, ...]
    degree: Optional[int]
    form: Optional[Form]

    @property
    def ok(self) -> bool:
        return self.form is not None

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "point_mod_p": list(self.point_mod_p),
            "size": len(self.members),
            "members": [P.to_json() for P in self.members],
            "degree": self.degree,
            "form": None if self.form is None else str(self.form),
            "status": "covered" if self.ok else "failed",
        }


@dataclass
class ExperimentReport:
    variety: dict
    B: float
    epsilon: Fraction
    branch: str
    primes: Tuple[int, ...]
    outcomes: List[ClassOutcome]
    singular: AuxiliaryForm
    part_one: Optional[AuxiliaryForm]
    unassigned: Tuple[ProjPoint, ...]
    num_points: int
    count_bound: float
    log_count_bound: float
    sources: Dict[str, str]
    inputs: Dict[str, object]
    coverage_ok: bool
    wall_clock: float = 0.0
    points: Tuple[ProjPoint, ...] = field(default=(), repr=False)

    @property
    def forms(self) -> List[Form]:
        out = [o.form for o in self.outcomes if o.form is not None]
        if self.part_one is not None and self.part_one.form is not None:
            out.append(self.part_one.form)
        if not self.singular.is_empty:
            out.append(self.singular.form)
        return out

    @property
    def total_forms(self) -> int:
        return len(self.forms)

    @property
    def failures(self) -> List[ClassOutcome]:
        return [o for o in self.outcomes if not o.ok]

    @property
    def success(self) -> bool:
        return self.coverage_ok and not self.failures and not self.unassigned

    def to_json(self) -> dict:
        return {
            "variety": self.variety,
            "B": self.B,
            "epsilon": f"{self.epsilon.numerator}/{self.epsilon.denominator}",
            "branch": self.branch,
            "primes": list(self.primes),
            "num_points": self.num_points,
            "classes": [o.to_json() for o in self.outcomes],
            "singular_cover": self.singular.to_json(),
            "part_one_cover": None if self.part_one is None else self.part_one.to_json(),
            "unassigned_points": [P.to_json() for P in self.unassigned],
            "total_forms": self.total_forms,
            "count_bound": self.count_bound,
            "log_count_bound": self.log_count_bound,
            "within_count_bound": self.total_forms <= self.count_bound,
            "coverage_ok": self.coverage_ok,
            "failures": len(self.failures),
            "success": self.success,
            "sources": self.sources,
            "inputs": self.inputs,
            "wall_clock_seconds": self.wall_clock,
        }


def search_class(X: Hypersurface, members: Tuple[ProjPoint, ...], max_degree: int
                 ) -> Tuple[Optional[int], Optional[Form]]:
    """Smallest ``D <= max_degree`` admitting an auxiliary form through ``members``."""
    for D in range(1, max_degree + 1):
        aux = find_auxiliary_form(X, members, D)
        if aux is not None:
            return D, aux.form
    return None, None


def _search_task(args):
    X, members, max_degree = args
    return search_class(X, members, max_degree)


def _assign_classes(X: Hypersurface, regular_pts: Sequence[ProjPoint], primes: Sequence[int]):
    groups: Dict[Tuple[int, Tuple[int, ...]], List[ProjPoint]] = {}
    unassigned = []
    for P in regular_pts:
        for p in primes:
            xi = reduce_mod_p(P.coords, p)
            if regular_mod_p(X, xi, p):
                groups.setdefault((p, xi), []).append(P)
                break
        else:
            unassigned.append(P)
    return groups, unassigned


def run_experiment(X: Hypersurface, B, epsilon, config: ExperimentConfig = ExperimentConfig()
                   ) -> ExperimentReport:
    start = time.perf_counter()
    epsilon = Fraction(epsilon)
    if math.log(B) < epsilon:
        raise ValueError(f"out of regime: log B = {math.log(B):.4f} < epsilon = {float(epsilon)}")
    sources = {}
    if config.h_X is None:
        h_X = naive_form_height(X.f)
        sources["h_X"] = "naive_form_height"
    else:
        h_X = float(config.h_X)
        sources["h_X"] = "supplied"
    sources["r_param"] = "config default" if config.r_param == 1 else "supplied"
    inp = BoundInputs(X.n, X.d, X.delta, epsilon, float(B), alpha=config.alpha, h_X=h_X,
                      I_value=config.I_value, r_param=config.r_param, sources=sources)
    sources = dict(inp.sources)

    pts = tuple(enumerate_points(X, B))
    log.info("enumerated %d points on %s with height <= %s", len(pts), X, B)
    singular = singular_cover(X, pts)
    regular_pts = [P for P in pts if X.is_regular(P.coords)]
    cb = count_bound(inp)
    inputs = {"n": X.n, "d": X.d, "delta": X.delta, "h_X": h_X, "I_value": float(inp.I_value),
              "r_param": inp.r_param, "alpha": inp.alpha, "max_degree": config.max_degree,
              "mu_max_bound": inp.mu_max_bound}

    threshold = large_height_threshold(inp)
    inputs["large_height_threshold"] = threshold
    outcomes: List[ClassOutcome] = []
    part_one = None
    unassigned: List[ProjPoint] = []
    primes: Tuple[int, ...] = ()
    if h_X > threshold:
        branch = "part1"
        D1 = part_one_degree(X.n, X.d, X.delta)
        part_one = find_auxiliary_form(X, regular_pts, D1)
        if part_one is None:
            unassigned = list(regular_pts)
    else:
        branch = "part2"
        plan = prime_plan(inp)
        primes = plan.primes
        inputs["log_N0"] = plan.log_N0
        inputs["r"] = plan.r
        groups, unassigned = _assign_classes(X, regular_pts, primes)
        keys = sorted(groups, key=lambda k: (primes.index(k[0]), k[1]))
        tasks = [(X, tuple(groups[k]), config.max_degree) for k in keys]
        if config.jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=config.jobs) as ex:
                results = list(ex.map(_search_task, tasks, chunksize=max(1, len(tasks) // (4 * config.jobs))))
        else:
            results = [_search_task(t) for t in tasks]
        for k, t, (D, g) in zip(keys, tasks, results):
            outcomes.append(ClassOutcome(k[0], k[1], t[1], D, g))
            if g is None:
                log.warning("class %s mod %d exhausted max_degree=%d", k[1], k[0], config.max_degree)

    report = ExperimentReport(
        variety=X.to_json(), B=float(B), epsilon=epsilon, branch=branch, primes=primes,
        outcomes=outcomes, singular=singular, part_one=part_one, unassigned=tuple(unassigned),
        num_points=len(pts), count_bound=cb.value, log_count_bound=cb.log_value,
        sources=sources, inputs=inputs, coverage_ok=False, points=pts,
    )
    report.coverage_ok = verify_coverage(X, report)
    report.wall_clock = time.perf_counter() - start
    return report


def verify_coverage(X: Hypersurface, report: ExperimentReport) -> bool:
    """Every enumerated point lies on an emitted form, and no form is in (f)."""
    forms = report.forms
    if any(divides_modulo(g, X.f) for g in forms):
        return False
    return all(any(g.evaluate(P.coords) == 0 for g in forms) for P in report.points)
