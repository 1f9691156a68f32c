from __future__ import annotations

from fractions import Fraction

import pytest

from curvemirror import amodel, mirror_core
from curvemirror.amodel import VanishingCycleId as V
from curvemirror.matfac import ObjectId, basic_object_ids

GRID = [
    (fam, p, q, ell)
    for fam in mirror_core.FAMILIES
    for p in range(2, 10)
    for q in range(2, 10)
    for ell in mirror_core.admissible_indices(fam, p, q)
]


def test_inventory_examples():
    assert amodel.critical_inventory("loop", 5, 3, 2).counts == {"i": 2, "ii": 1, "iii": 2, "iv": 4}
    inv = amodel.critical_inventory("chain", 4, 3, 2)
    assert inv.counts == {"i": 1, "ii": 2, "iii": 3} and inv.total == 6
    inv = amodel.critical_inventory("bp", 4, 4, 2)
    assert inv.counts["i"] == 2 and inv.counts["iv"] == 4 and inv.total == 6


def test_bp_regrouping_is_flagged():
    inv = amodel.critical_inventory("bp", 6, 3, 3)
    assert inv.total == 6 and len(inv.flagged) == 2


def test_chain_p2_reports_reduction():
    with pytest.raises(amodel.UnsupportedCase) as exc:
        amodel.critical_inventory("chain", 2, 5, 2)
    assert exc.value.reduction == ("loop", 2, 3, 1)


@pytest.mark.parametrize("case", GRID)
def test_counts_equal_tilting_length(case):
    fam, p, q, ell = case
    t = mirror_core.tilting_length(mirror_core.make(fam, p, q), ell)["tilting_length"]
    assert amodel.cycle_count(*case) == t
    if amodel.reduction_target(*case) is None:
        assert amodel.critical_inventory(*case).total == t
        order = amodel.distinguished_order(*case)
        assert sorted(order, key=str) == sorted(amodel.cycle_ids(*case), key=str)
        matched = {amodel.object_match(*case, v) for v in order}
        assert matched == set(basic_object_ids(*case))


def test_theta_examples():
    assert amodel.theta("loop", 5, 3, 2, 0, 0) == 0
    assert amodel.theta("loop", 5, 3, 2, 1, 1) == Fraction(3, 4)
    assert amodel.theta("bp", 4, 4, 2, 1, 0) == Fraction(1, 4)


@pytest.mark.parametrize("case", GRID)
def test_order_decreasing_theta(case):
    if amodel.reduction_target(*case) is not None:
        return
    order = amodel.distinguished_order(*case)
    v0 = [v for v in order if v.kind == "V0"]
    assert order[: len(v0)] == v0
    keys = [(-amodel.theta(*case, *v.index), v.index) for v in v0]
    assert keys == sorted(keys)


def test_loop53_order():
    order = amodel.distinguished_order("loop", 5, 3, 2)
    assert order[0] == V("V0", (1, 1)) and order[3] == V("V0", (0, 0))


def test_intersection_examples():
    assert amodel.intersection_count("loop", 5, 5, 2, V("V0", (1, 1)), V("V0", (0, 0))) == 1
    for r in (1, 2):
        for mn in [(0, 0), (1, 1)]:
            assert amodel.intersection_count("loop", 5, 3, 2, V("V0", mn), V("Vlammu", (r,))) == 1
    assert amodel.intersection_count("loop", 5, 3, 2, V("Vmuw", (0,)), V("Vlammu", (1,))) == 0


def test_intersection_symmetric():
    case = ("loop", 7, 4, 3)
    cyc = amodel.cycle_ids(*case)
    for a in cyc:
        for b in cyc:
            if a != b:
                assert amodel.intersection_count(*case, a, b) == amodel.intersection_count(*case, b, a)


def test_degenerate_pair_matches_b_side():
    case = ("loop", 5, 3, 2)
    a, b = V("V0", (0, 1)), V("V0", (1, 1))
    assert amodel.is_degenerate(*case, a, b)
    rep = amodel.compare_ab(*case)
    pair = next(r for r in rep.pairs if {r.a, r.b} == {a, b} and r.count_A)
    assert pair.match and pair.degenerate


@pytest.mark.parametrize("p,q,ell", [(5, 3, 2), (7, 4, 3), (5, 5, 4)])
def test_loop_winding(p, q, ell):
    for v in amodel.cycle_ids("loop", p, q, ell):
        if v.kind == "V0":
            m, n = v.index
            w = amodel.winding_data("loop", p, q, ell, v).winding
            assert w == Fraction(ell * m, p - 1) + Fraction(ell * n, q - 1)


def test_surface_examples():
    inv = amodel.surface_invariants("loop", 5, 3, 2)
    assert (inv.genus, inv.punctures, inv.rankH1, inv.euler) == (3, 3, 8, -7)
    inv = amodel.surface_invariants("loop", 3, 3, 1)
    assert (inv.genus, inv.punctures) == (3, 4)
    inv = amodel.surface_invariants("chain", 4, 3, 2)
    assert (inv.genus, inv.punctures) == (1, 4)


@pytest.mark.parametrize("case", GRID)
def test_euler_consistency(case):
    inv = amodel.surface_invariants(*case)
    assert inv.rankH1 == 2 * inv.genus + inv.punctures - 1


def test_object_match_examples():
    assert amodel.object_match("loop", 5, 3, 2, V("V0", (0, 0))) == ObjectId("K0", (4, 2))
    assert amodel.object_match("loop", 5, 3, 2, V("Vlammu", (2,))) == ObjectId("Kw", (2,), 3)


@pytest.mark.parametrize("case", [("loop", 5, 3, 2), ("chain", 6, 5, 2), ("bp", 6, 3, 3), ("bp", 5, 4, 1), ("chain", 2, 5, 1)])
def test_compare_ab(case):
    rep = amodel.compare_ab(*case)
    assert rep.ok, [r.to_json() for r in rep.mismatches]
    data = rep.to_json()
    assert {"family", "p", "q", "ell", "cycles", "pairs", "invariants"} <= set(data)
    assert set(data["pairs"][0]) == {"a", "b", "count_A", "dim_B", "match", "degenerate_flag"}


def test_compare_ab_reduced():
    rep = amodel.compare_ab("chain", 2, 5, 2)
    assert rep.reduction == ("loop", 2, 3, 1) and rep.reduction_ok and rep.ok


def test_matrix_isomorphism():
    A = [[1, 2, 0], [0, 1, 1], [0, 0, 1]]
    perm = [2, 0, 1]
    B = [[0] * 3 for _ in range(3)]
    for s in range(3):
        for t in range(3):
            B[perm[s]][perm[t]] = A[s][t]
    found = amodel.matrix_isomorphism(A, B)
    assert found is not None and all(A[s][t] == B[found[s]][found[t]] for s in range(3) for t in range(3))
    assert amodel.matrix_isomorphism(A, [[1, 1, 0], [0, 1, 1], [0, 0, 1]]) is None
