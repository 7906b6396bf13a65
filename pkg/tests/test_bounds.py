import math
from fractions import Fraction

import pytest

from detmethod.bounds import (A3_from, BoundInputs, C3_from, I_closed_form, I_lower_bound,
                              chardin_upper_bound, constants_C123, count_bound, count_exponent,
                              cubic_remark_coefficient, explicit_R_lower_bound, full_report,
                              large_height_threshold, log_N0, part_one_degree, places_count,
                              prime_plan, sombra_lower_bound)
from detmethod.exactmath import is_prime
from detmethod.jets import filtration_profile, graded_piece
from detmethod.varieties import Hypersurface

E = math.e


def conic_inputs(**kw):
    base = dict(n=2, d=1, delta=2, epsilon=Fraction(1), B=E, I_value=Fraction(2))
    base.update(kw)
    return BoundInputs(**base)


class TestHilbertBounds:
    @pytest.mark.parametrize("args, value", [((2, 1, 2, 3), 7), ((2, 1, 2, 1), 3), ((3, 2, 3, 3), 19)])
    def test_sombra(self, args, value):
        assert sombra_lower_bound(*args) == value

    def test_sombra_matches_graded_piece(self):
        X = Hypersurface.parse("x^3 + y^3 - z^3")
        for D in range(1, 11):
            assert sombra_lower_bound(2, 1, 3, D) == graded_piece(X, D).r1

    @pytest.mark.parametrize("args, value", [((2, 1, 3), 8), ((1, 1, 1), 2), ((3, 2, 3), 30)])
    def test_chardin(self, args, value):
        assert chardin_upper_bound(*args)[0] == value

    def test_chardin_at_least_rank(self):
        for D in range(1, 8):
            assert chardin_upper_bound(2, 1, D)[0] >= sombra_lower_bound(2, 1, 2, D)
            assert chardin_upper_bound(2, 1, D)[1] >= chardin_upper_bound(2, 1, D)[0]

    def test_explicit_R_examples(self):
        r = explicit_R_lower_bound(1, 2, 2)
        assert r.dominant_coefficient == pytest.approx(2)
        assert r.L <= 10
        assert explicit_R_lower_bound(1, 1, 5).dominant_coefficient == pytest.approx(0.5)
        with pytest.raises(ValueError):
            explicit_R_lower_bound(1, 3, 2)

    def test_explicit_R_below_exact_curves(self):
        curves = {1: ("x + y + z", (1, -1, 0)), 2: ("x*z - y^2", (0, 0, 1)),
                  3: ("x^3 + y^3 - z^3", (1, 0, 1)), 4: ("x^4 + y^4 - z^4", (1, 0, 1))}
        for delta, (eq, eta) in curves.items():
            X = Hypersurface.parse(eq)
            for D in range(delta, 9):
                bound = explicit_R_lower_bound(1, delta, D)
                assert bound.L <= filtration_profile(X, D, eta).R
                assert bound.asymptotic_value() <= float(bound.L) + 1e-9


class TestI:
    def test_closed_forms(self):
        assert I_closed_form("curve", 2) == 2
        assert I_closed_form("curve", 1) == Fraction(1, 2)
        assert I_closed_form("linear_subspace", 2) == Fraction(2, 3)
        with pytest.raises(ValueError):
            I_closed_form("surface", 3)

    def test_lower_bound(self):
        assert I_lower_bound(1, 2) == 2 and I_lower_bound(1, 1) == Fraction(1, 2)
        assert I_lower_bound(2, 3) == pytest.approx(2 * math.sqrt(3))
        assert I_lower_bound(2, 1) == I_closed_form("linear_subspace", 2)
        for delta in range(1, 8):
            assert I_lower_bound(1, delta) == I_closed_form("curve", delta)

    def test_cubic_remark(self):
        assert cubic_remark_coefficient(3, 3) == pytest.approx(1.75)
        assert cubic_remark_coefficient(3, 2) == pytest.approx(1)
        assert cubic_remark_coefficient(3, 3) > I_lower_bound(2, 3) / 2
        with pytest.raises(ValueError):
            cubic_remark_coefficient(3, 5)


class TestConstants:
    def test_C3_instantiation(self):
        assert C3_from(1, 5, 2) == 7

    def test_C1(self):
        rep = constants_C123(conic_inputs(mu_max_bound=0.5 * math.log(6)))
        assert rep["C_1"] == pytest.approx(3 * math.log(6) + 3 * math.log(3))
        assert rep["C_1"] == pytest.approx(8.671, abs=1e-3)

    def test_C1_monotone_in_delta(self):
        values = [constants_C123(conic_inputs(delta=k, mu_max_bound=1.0))["C_1"] for k in range(1, 8)]
        assert values == sorted(values)

    def test_defaults_recorded(self):
        inp = BoundInputs(2, 1, 2, Fraction(1), 10.0)
        assert inp.I_value == 2 and "I_lower_bound" in inp.sources["I_value"]
        assert inp.mu_max_bound == pytest.approx(0.5 * math.log(6))

    def test_input_validation(self):
        with pytest.raises(ValueError):
            BoundInputs(2, 2, 2, Fraction(1), 10.0)
        with pytest.raises(ValueError):
            BoundInputs(2, 1, 2, Fraction(0), 10.0)


class TestPrimePlan:
    def test_places_count(self):
        assert places_count(50, 5) == 11
        assert places_count(0, 5) == 1

    def test_first_prime(self):
        inp = conic_inputs()
        assert log_N0(inp) == pytest.approx(2 * (1 + 0.5 * math.log(6)))
        plan = prime_plan(inp)
        assert plan.N0 == pytest.approx(44.35, abs=0.05) and plan.primes[0] == 47

    @pytest.mark.parametrize("B, hX", [(E, 0.0), (100.0, 3.0), (1e6, 10.0)])
    def test_windows(self, B, hX):
        plan = prime_plan(conic_inputs(B=B, h_X=hX))
        assert len(plan.primes) == plan.r
        for i, p in enumerate(plan.primes):
            assert is_prime(p) and 2 ** i * plan.N0 < p <= 2 ** (i + 1) * plan.N0
        assert list(plan.primes) == sorted(set(plan.primes))

    def test_regime(self):
        with pytest.raises(ValueError):
            prime_plan(conic_inputs(B=2.0))


class TestCountBound:
    def test_toy_C4(self):
        inp = BoundInputs(2, 1, 1, Fraction(1), E, I_value=Fraction(1, 2))
        cb = count_bound(inp, A3_override=1)
        assert cb.C4pp == pytest.approx(144) and cb.C4 == pytest.approx(145)

    def test_A3_and_exponent(self):
        assert A3_from(Fraction(1, 2), 1, 2, 3, 1) == pytest.approx(3.5)
        assert count_exponent(conic_inputs()) == pytest.approx(2)

    def test_monotone_in_I_for_large_B(self):
        for B in (1e100, 1e300):
            vals = [count_bound(conic_inputs(I_value=I, B=B)).log_value
                    for I in (Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3))]
            assert vals == sorted(vals, reverse=True)

    def test_C4_grows_with_I(self):
        # A_3 is linear in I, so for small B the constant outweighs the power saving
        vals = [count_bound(conic_inputs(I_value=I, B=10.0)).log_value
                for I in (Fraction(1), Fraction(2), Fraction(3))]
        assert vals == sorted(vals)

    def test_monotone_in_B(self):
        vals = [count_bound(conic_inputs(B=B)).log_value for B in (E, 10.0, 1e3, 1e9)]
        assert vals == sorted(vals)

    def test_large_height_threshold(self):
        inp = BoundInputs(2, 1, 1, Fraction(1), E)
        assert large_height_threshold(inp) == pytest.approx(74.37, abs=0.01)
        assert large_height_threshold(inp.with_(B=1.0)) == pytest.approx(58.37, abs=0.01)
        assert large_height_threshold(inp.with_(B=100.0)) > large_height_threshold(inp)
        assert part_one_degree(2, 1, 2) == 5

    def test_full_report_labels(self):
        rep = full_report(conic_inputs(B=50.0))
        out = rep.to_json()
        for key in ("C_1", "C_2", "C_3", "r", "primes", "A_3", "large_height_threshold"):
            assert key in out and out[key]["formula"]
