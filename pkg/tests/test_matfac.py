from __future__ import annotations

import pytest

from curvemirror import mirror_core
from curvemirror.galg import graded_piece_basis
from curvemirror.matfac import (
    IndexOutOfRange,
    NotClosed,
    ObjectId,
    adjugate,
    basic_object_ids,
    build_basic_object,
    coker_module,
    cone,
    corrupt,
    determinant,
    identity_morphism,
    k0_rank_parameter,
    matmul,
    mcm_module,
    same_structure,
    setting,
    shift,
    suspend,
    verify_mf,
    zero_morphism,
)

CASES = [("loop", 5, 3, 2), ("loop", 3, 3, 2), ("chain", 4, 3, 2), ("chain", 9, 4, 3), ("bp", 4, 4, 2), ("bp", 6, 3, 3)]


def test_object_counts_match_tilting_length():
    for fam, p, q, ell in CASES:
        t = mirror_core.tilting_length(mirror_core.make(fam, p, q), ell)["tilting_length"]
        assert len(basic_object_ids(fam, p, q, ell)) == t


def test_loop_kx_rank_one_product():
    K = build_basic_object("loop", 5, 3, 2, "Kx(4)")
    S = K.setting
    assert K.rank == 1
    assert K.d1[0][0] == S.mono(1, 0)
    assert K.d0[0][0] * K.d1[0][0] == S.w


def test_loop_k0_rank():
    assert k0_rank_parameter("loop", 5, 3, 2, 4, 2) == 1
    assert build_basic_object("loop", 5, 3, 2, "K0(4,2)").rank == 3


def test_bp_rank_k_plus_one():
    K = build_basic_object("bp", 4, 4, 2, "K0(2,3)")
    assert K.rank == k0_rank_parameter("bp", 4, 4, 2, 2, 3) + 1


def test_adjugate_small():
    S = setting("loop", 5, 3, 2)
    F = S.field
    a, b, c, d = S.mono(1, 0), S.mono(0, 1), S.mono(2, 0), S.mono(1, 1, 3)
    assert adjugate([[a]], F) == [[S.mono(0, 0)]]
    assert adjugate([[a, b], [c, d]], F) == [[d, -b], [-c, a]]


def test_adjugate_identity():
    K = build_basic_object("loop", 5, 3, 2, "K0(4,2)")
    F = K.setting.field
    det = determinant(K.d0, F)
    assert det == K.setting.w
    adj = adjugate(K.d0, F)
    for M in (matmul(K.d0, adj, F), matmul(adj, K.d0, F)):
        for i, row in enumerate(M):
            for j, e in enumerate(row):
                assert e == (det if i == j else K.setting.zero())


@pytest.mark.parametrize("case", CASES)
def test_verify_all_objects(case):
    for o in basic_object_ids(*case, shifted=False):
        rep = verify_mf(build_basic_object(*case, o))
        assert rep.ok, rep.to_json()
        if o.kind == "K0":
            assert rep.checks["det(d0) = w"] and rep.checks["d1 = Adj(d0)"]


def test_corrupt_fails():
    K = build_basic_object("loop", 3, 3, 2, "K0(2,1)")
    rep = verify_mf(corrupt(K))
    assert not rep.ok
    assert not rep.checks["d0*d1 = w*Id"]


def test_shift_identities():
    S = setting("loop", 5, 3, 2)
    K = build_basic_object("loop", 5, 3, 2, "K0(3,1)")
    assert same_structure(shift(K, S.L.zero), K)
    assert same_structure(suspend(suspend(K)), shift(K, S.c))
    base = build_basic_object("loop", 5, 3, 2, "Kx(4)")
    for i in range(1, 5):
        Ki = build_basic_object("loop", 5, 3, 2, f"Kx({i})")
        assert same_structure(Ki, shift(base, S.deg(i + 1 - 5, 0)))


def test_index_out_of_range():
    with pytest.raises(IndexOutOfRange):
        build_basic_object("loop", 5, 3, 2, "Kw(3)")
    with pytest.raises(IndexOutOfRange):
        build_basic_object("bp", 4, 4, 2, "Ky(1)")
    with pytest.raises(IndexOutOfRange):
        build_basic_object("chain", 4, 3, 2, "Kx(1)")


def test_object_id_roundtrip():
    for text in ("K0(3,1)", "Kw(2)[3]", "Kx(4)"):
        assert str(ObjectId.parse(text)) == text


@pytest.mark.parametrize("case", CASES)
def test_coker_dimensions(case):
    # presentation vs direct standard monomials of the defining cyclic module
    S = setting(*case)
    degrees = [S.deg(a, b) for a in range(-3, 8) for b in range(-2, 4)]
    for o in basic_object_ids(*case, shifted=False):
        K = build_basic_object(*case, o)
        M = coker_module(K)
        for l in degrees:
            assert graded_piece_basis(M, l).dim == len(K.defining.basis(l))


@pytest.mark.parametrize("case", CASES)
def test_rank_one_modules_are_mcm(case):
    # R/(f) for a factor f of w is maximal Cohen-Macaulay, hence coker(d1)
    S = setting(*case)
    degrees = [S.deg(a, b) for a in range(-3, 8) for b in range(-2, 4)]
    for o in basic_object_ids(*case, shifted=False):
        K = build_basic_object(*case, o)
        if K.rank != 1:
            continue
        for l in degrees:
            assert graded_piece_basis(coker_module(K), l).dim == graded_piece_basis(mcm_module(K), l).dim


def test_coker_kx_is_R_mod_x():
    K = build_basic_object("loop", 5, 3, 2, "Kx(4)")
    M = coker_module(K)
    S = K.setting
    assert M.twists == (S.L.zero,)
    assert M.relations[0][0] == S.mono(1, 0)


def test_cone_identity_and_zero():
    K = build_basic_object("loop", 3, 3, 2, "K0(2,1)")
    K2 = build_basic_object("loop", 3, 3, 2, "Kw(1)")
    C = cone(identity_morphism(K))
    assert verify_mf(C, check_det=False).ok
    Z = cone(zero_morphism(K, K2))
    assert verify_mf(Z, check_det=False).ok
    assert Z.rank == K.rank + K2.rank


def test_cone_rejects_open_morphism():
    K = build_basic_object("loop", 3, 3, 2, "K0(2,1)")
    f = identity_morphism(K)
    bad = type(f)(K, K, 0, f.f_even, tuple(tuple(e * K.setting.mono(1, 0) for e in r) for r in f.f_odd))
    with pytest.raises(NotClosed):
        cone(bad)
