import pytest

from epq_descent.curve import INFINITY, Curve, Point, add, is_integral, negate, scalar_mul
from epq_descent.family import FamilyParams, curve_of, scan_pairs
from epq_descent.torsion import (
    TorsionClassificationError,
    TorsionStructure,
    nagell_lutz_bound,
    point_order,
    torsion_candidates,
    torsion_subgroup,
)

import oracles

CORPUS = [1, -1, 2, -2, 4, -4, 9, -9, -25, 16, -36]


@pytest.mark.parametrize("b", CORPUS)
def test_torsion_matches_brute_force(b):
    pts = oracles.integral_points(0, b, 10**4) | {(0, 0)}
    finite = {P for P in pts if oracles.finite_order(0, b, P) is not None}
    got = torsion_subgroup(Curve(0, b))
    assert {(p.x, p.y) for p in got.points if not p.is_infinity} == finite
    assert got.order == len(finite) + 1


@pytest.mark.parametrize("b,expected", [
    (-2555, "Z/2"), (-1, "Z/2 x Z/2"), (4, "Z/4"), (-4, "Z/2 x Z/2"), (-36, "Z/2 x Z/2"),
    (1, "Z/2"), (-9, "Z/2 x Z/2"), (-25, "Z/2 x Z/2"),
])
def test_torsion_structure_examples(b, expected):
    assert str(torsion_subgroup(Curve(0, b))) == expected


def test_torsion_generators():
    assert torsion_subgroup(Curve(0, -2555)).generators == (Point(0, 0),)
    assert torsion_subgroup(Curve(0, 4)).generators == (Point(2, 4),)
    t = torsion_subgroup(Curve(0, -1))
    assert t.kind == "product" and t.n == 1 and len(t.generators) == 2


def test_general_a_torsion():
    # curves with a != 0, compared with the brute-force oracle
    for a, b in [(1, -1), (-3, 2), (2, -3), (-1, -6), (5, 4)]:
        try:
            c = Curve(a, b)
        except ValueError:
            continue
        pts = oracles.integral_points(a, b, 2000) | {(0, 0)}
        finite = {P for P in pts if oracles.finite_order(a, b, P) is not None}
        got = torsion_subgroup(c)
        assert {(p.x, p.y) for p in got.points if not p.is_infinity} == finite


def test_candidates_examples():
    cands = torsion_candidates(Curve(0, -2555))
    assert Point(0, 0) in cands
    assert all(p.x * p.x != 2555 for p in cands)
    assert {Point(0, 0), Point(1, 0), Point(-1, 0)} <= set(torsion_candidates(Curve(0, -1)))
    assert {Point(0, 0), Point(2, 4), Point(2, -4)} <= set(torsion_candidates(Curve(0, 4)))


def test_nagell_lutz_bound_for_family():
    p, q = 73, 7
    assert nagell_lutz_bound(Curve(0, -5 * p * q)) == 500 * p**3 * q**3


def test_point_order():
    c = Curve(0, 4)
    assert point_order(c, INFINITY) == 1
    assert point_order(c, Point(0, 0)) == 2
    assert point_order(c, Point(2, 4)) == 4


def test_non_torsion_point_rejected():
    cbar = Curve(0, 241820)
    assert point_order(cbar, Point(226, 8136)) is None


def test_mazur_validation():
    with pytest.raises(TorsionClassificationError):
        TorsionStructure("cyclic", 11, ())
    with pytest.raises(TorsionClassificationError):
        TorsionStructure("product", 5, ())
    assert TorsionStructure("cyclic", 12, ()).order == 12
    assert TorsionStructure("product", 4, ()).order == 16


@pytest.mark.parametrize("b", CORPUS + [-2555, -60455])
def test_torsion_group_closed(b):
    c = Curve(0, b)
    t = torsion_subgroup(c)
    pts = set(t.points)
    for p in pts:
        assert is_integral(p)
        assert negate(c, p) in pts
        assert scalar_mul(c, t.order, p) == INFINITY
        for q in pts:
            assert add(c, p, q) in pts


def test_family_torsion_z2_below_500():
    pairs = scan_pairs("1.1", 500)
    assert len(pairs) >= 20
    for fp in pairs:
        t = torsion_subgroup(curve_of(fp))
        assert (t.kind, t.n, t.generators) == ("cyclic", 2, (Point(0, 0),))
