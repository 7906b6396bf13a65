import itertools
import math
from fractions import Fraction

import pytest

from detmethod.heights import ProjPoint
from detmethod.varieties import (Hypersurface, NotOnVariety, enumerate_points, multiplicity,
                                 partition_into_classes, reduce_mod_p, singular_points_mod_p)

CONIC = Hypersurface.parse("x*z - y^2")
CUSP = Hypersurface.parse("y^2*z - x^3")
LINE = Hypersurface.parse("x + y + z")


def brute_force(X, B):
    R = math.floor(B)
    found = set()
    for v in itertools.product(range(-R, R + 1), repeat=X.f.nvars):
        if any(v) and X.contains(v) and sum(x * x for x in v) <= B * B:
            found.add(ProjPoint(v))
    return found


class TestHypersurface:
    def test_basic(self):
        assert (CONIC.n, CONIC.delta, CONIC.d) == (2, 2, 1)
        assert str(CONIC) == "x*z - y^2"

    def test_rejects_reducible(self):
        with pytest.raises(ValueError):
            Hypersurface.parse("x*y")

    def test_rejects_non_primitive(self):
        from detmethod.poly import Form

        with pytest.raises(ValueError):
            Hypersurface(Form.parse("2*x*z - 2*y^2"))

    def test_parse_keeps_sign(self):
        assert CUSP.f.coeffs[(0, 2, 1)] == 1

    def test_json_roundtrip(self, tmp_path):
        p = tmp_path / "x.json"
        import json

        p.write_text(json.dumps(CUSP.to_json()))
        assert Hypersurface.from_json(p) == CUSP
        assert Hypersurface.from_json({"equation": "x - y", "n": 2}).n == 2


class TestEnumeration:
    def test_conic_B2(self):
        pts = enumerate_points(CONIC, 2)
        assert set(pts) == {ProjPoint(c) for c in [(1, 0, 0), (0, 0, 1), (1, 1, 1), (1, -1, 1)]}

    def test_small_bound_empty(self):
        assert enumerate_points(CONIC, Fraction(1, 2)) == []

    def test_line(self):
        pts = enumerate_points(LINE, Fraction(3, 2))
        assert set(pts) == {ProjPoint(c) for c in [(1, -1, 0), (1, 0, -1), (0, 1, -1)]}

    @pytest.mark.parametrize("X, B", [(CONIC, 7), (CUSP, 6), (LINE, 4),
                                      (Hypersurface.parse("x*y - z*w"), 3)])
    def test_against_brute_force(self, X, B):
        pts = enumerate_points(X, B)
        assert set(pts) == brute_force(X, B)
        assert len(set(pts)) == len(pts)
        for P in pts:
            assert X.contains(P.coords) and P.norm_squared() <= B * B

    def test_northcott_monotone(self):
        counts = [len(enumerate_points(CONIC, B)) for B in (1, 2, 5, 10, 20)]
        assert counts == sorted(counts)

    def test_deterministic_order(self):
        assert enumerate_points(CONIC, 20) == enumerate_points(CONIC, 20)


class TestMultiplicity:
    def test_examples(self):
        assert multiplicity(CONIC, (1, 1, 1)) == 1
        assert multiplicity(CUSP, (0, 0, 1)) == 2
        with pytest.raises(NotOnVariety):
            multiplicity(CONIC, (1, 2, 3))

    @pytest.mark.parametrize("X", [CONIC, CUSP, LINE, Hypersurface.parse("x^3 + y^3 - z^3"),
                                   Hypersurface.parse("y^2*z - x^3 - x^2*z")])
    def test_multiplicity_one_iff_regular(self, X):
        for P in enumerate_points(X, 6):
            assert (multiplicity(X, P.coords) == 1) == X.is_regular(P.coords)


class TestReduction:
    def test_singular_points(self):
        assert singular_points_mod_p(CUSP, 5) == [(0, 0, 1)]
        assert singular_points_mod_p(CONIC, 3) == []

    def test_conic_mod_2_follows_postcondition(self):
        # [0:1:0] kills the gradient mod 2 but is not on the fiber
        assert CONIC.f.mod_p(2).evaluate((0, 1, 0)) != 0
        assert singular_points_mod_p(CONIC, 2) == []

    @pytest.mark.parametrize("P, Q", [((16, 4, 1), (1, 1, 1)), ((4, -2, 1), (1, 1, 1)),
                                      ((3, 4, 0), (0, 1, 0))])
    def test_reduce(self, P, Q):
        assert reduce_mod_p(P, 3) == Q

    def test_partition_example(self):
        pts = [ProjPoint(c) for c in [(1, 1, 1), (16, 4, 1), (4, -2, 1), (0, 0, 1)]]
        classes = partition_into_classes(CONIC, pts, 3)
        assert [(c.point_mod_p, len(c.members), c.regular) for c in classes] == [
            ((1, 1, 1), 3, True), ((0, 0, 1), 1, True)]
        assert partition_into_classes(CONIC, [], 3) == []
        (cusp,) = partition_into_classes(CUSP, [ProjPoint((0, 0, 1))], 5)
        assert not cusp.regular

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_partition_is_partition(self, p):
        pts = enumerate_points(CONIC, 15)
        classes = partition_into_classes(CONIC, pts, p)
        members = [P for c in classes for P in c.members]
        assert sorted(members) == sorted(pts)
        for c in classes:
            assert all(reduce_mod_p(P.coords, p) == c.point_mod_p for P in c.members)

    def test_partition_rejects_off_points(self):
        with pytest.raises(NotOnVariety):
            partition_into_classes(CONIC, [ProjPoint((1, 2, 3))], 3)
