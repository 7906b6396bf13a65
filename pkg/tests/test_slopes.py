import math
from fractions import Fraction

import pytest

from detmethod.jets import binom
from detmethod.poly import monomial_basis
from detmethod.slopes import (CriterionInput, SlopeInterval, criterion_holds, criterion_threshold,
                              slope_F_D, sym_gram, symmetric_power_degree)
from detmethod.varieties import Hypersurface
from detmethod.exactmath import LogValue

CONIC = Hypersurface.parse("x*z - y^2")


def diag(G):
    return [G[i][i] for i in range(len(G))]


class TestSymGram:
    def test_examples(self):
        assert diag(sym_gram(1, 1)) == [1, 1]
        assert diag(sym_gram(1, 2)) == [1, Fraction(1, 2), 1]
        mons = monomial_basis(2, 2)
        for a, g in zip(mons, diag(sym_gram(2, 2))):
            assert g == (1 if max(a) == 2 else Fraction(1, 2))

    def test_off_diagonal_zero(self):
        G = sym_gram(2, 3)
        assert all(G[i][j] == 0 for i in range(len(G)) for j in range(len(G)) if i != j)

    @pytest.mark.parametrize("n, D", [(1, 4), (2, 3), (3, 3), (2, 6)])
    def test_multinomial_product(self, n, D):
        prod = math.prod(1 / g for g in diag(sym_gram(n, D)))
        expected = math.prod(math.factorial(D) // math.prod(math.factorial(x) for x in a)
                             for a in monomial_basis(n, D))
        assert prod == expected

    def test_rejects_degenerate(self):
        with pytest.raises(ValueError):
            sym_gram(1, 0)


class TestSlope:
    def test_conic_degree_one(self):
        s = slope_F_D(CONIC, 1)
        assert s.mu_sym == 0
        assert s.lower == pytest.approx(-0.5 * math.log(3))

    def test_binary_quadrics(self):
        X = Hypersurface.parse("x^3 - 2*y^3")
        s = slope_F_D(X, 2)
        assert s.mu_sym == pytest.approx(math.log(2) / 6)
        assert s.degree.radicand == symmetric_power_degree(1, 2).radicand

    def test_full_space_matches_symmetric_power(self):
        X = Hypersurface.parse("x^4 + y^4 - 3*z^4")
        for D in (1, 2, 3):
            assert slope_F_D(X, D).degree.radicand == symmetric_power_degree(2, D).radicand

    def test_trivial_lower_bound_on_conic(self):
        for D in range(1, 5):
            assert slope_F_D(CONIC, D).upper >= -0.5 * D * math.log(3)

    def test_interval_width(self):
        for D in range(1, 5):
            s = slope_F_D(CONIC, D)
            assert s.upper - s.lower == pytest.approx(0.5 * math.log(binom(2 + D, D)))
            assert s.lower <= s.upper

    def test_json(self):
        out = slope_F_D(CONIC, 2).to_json()
        assert set(out) >= {"mu_sym_radicand", "lower", "upper", "r1"} and out["r1"] == 5


class TestCriterion:
    slope = SlopeInterval(LogValue(Fraction(1)), 3, 2, 1)

    def test_examples(self):
        inp = CriterionInput(1, 3, self.slope, ((3, 23),), 1.0)
        assert criterion_threshold(inp) == pytest.approx(math.log(23 / 3))
        assert criterion_holds(inp)
        assert not criterion_holds(CriterionInput(1, 3, self.slope, ((3, 23),), 3.0))
        for D in (1, 2, 5):
            assert not criterion_holds(CriterionInput(D, 3, self.slope, (), 0.0))

    def test_validation(self):
        with pytest.raises(ValueError):
            CriterionInput(1, 3, self.slope, ((3, 5), (2, 5)), 0.0)
        with pytest.raises(ValueError):
            CriterionInput(1, 3, self.slope, ((-1, 5),), 0.0)
