import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from detmethod.heights import (ProjPoint, arakelov_log_height, arakelov_log_height_exact,
                               classic_log_height, height_at_most, height_comparison,
                               naive_form_height, sup_log_height)
from detmethod.poly import Form


def test_canonical_representative():
    assert ProjPoint((-2, 4, 0)).coords == (1, -2, 0)
    assert ProjPoint((Fraction(1, 2), 1, 0)).coords == (1, 2, 0)
    assert ProjPoint.of(0, -3, 6).coords == (0, 1, -2)
    with pytest.raises(ValueError):
        ProjPoint((0, 0, 0))


@pytest.mark.parametrize("coords, classic, arakelov", [
    ((1, 0, 0), 0.0, 0.0),
    ((3, 4, 0), math.log(4), math.log(5)),
    ((16, 4, 1), math.log(16), 0.5 * math.log(273)),
    ((1, 1, 1), 0.0, 0.5 * math.log(3)),
])
def test_height_values(coords, classic, arakelov):
    P = ProjPoint(coords)
    assert classic_log_height(P) == pytest.approx(classic)
    assert arakelov_log_height(P) == pytest.approx(arakelov)


def test_exact_radicand():
    assert arakelov_log_height_exact(ProjPoint((3, 4, 0))).radicand == 25


def test_comparison_examples():
    r = height_comparison(ProjPoint((3, 4, 0)))
    assert r.bound_gap == pytest.approx(math.log(5 / 4))
    assert r.within_bound
    assert height_comparison(ProjPoint((1, 0, 0))).bound_gap == 0
    r = height_comparison(ProjPoint((1, 1, 1)))
    assert r.bound_gap == pytest.approx(0.5 * math.log(3))
    assert r.bound == pytest.approx(0.5 * math.log(3))


def test_comparison_random_points():
    rng = random.Random(7)
    for nv in (3, 4):
        for _ in range(500):
            v = [rng.randint(-1000, 1000) for _ in range(nv)]
            if any(v):
                assert height_comparison(ProjPoint(tuple(v))).within_bound


@given(st.lists(st.integers(-50, 50), min_size=3, max_size=4), st.integers(-20, 20))
def test_scaling_invariance(v, lam):
    if not any(v) or lam == 0:
        return
    P, Q = ProjPoint(tuple(v)), ProjPoint(tuple(lam * x for x in v))
    assert P == Q
    assert arakelov_log_height(P) == arakelov_log_height(Q)


@pytest.mark.parametrize("text, value", [
    ("x*z - y^2", 0.0), ("3*x^2 + 5*y*z", math.log(5)), ("y^2*z - x^3", 0.0),
])
def test_naive_form_height(text, value):
    assert naive_form_height(Form.parse(text)) == pytest.approx(value)


def test_naive_form_height_requires_primitive():
    with pytest.raises(ValueError):
        naive_form_height(Form.parse("2*x*z - 4*y^2"))


def test_height_at_most_and_sup():
    P = ProjPoint((3, 4, 0))
    assert height_at_most(P, 5) and not height_at_most(P, Fraction(49, 10))
    assert sup_log_height([P, ProjPoint((1, 1, 1))]) >= math.log(5)
    assert sup_log_height([]) == 0.0
