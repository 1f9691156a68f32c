from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from curvemirror.galg import (
    CycField,
    CycScalar,
    DivisionByZero,
    GradedModulePresentation,
    GradedPolynomial,
    GradingGroup,
    graded_piece_basis,
    poly_product,
)
from curvemirror.matfac import setting, w_factors


def test_roots_of_unity():
    for ell in (1, 2, 3, 4, 6):
        F = CycField(2 * ell)
        eta = F.root(2)  # primitive ell-th root
        assert eta**ell == F.one
        assert F.root(1) ** ell == -F.one


def test_gaussian_integers():
    F = CycField(4)
    i = F.root(1)
    assert (F.one + i) * (F.one - i) == F(2)
    assert i * i == F(-1)


def test_inverse_and_division_by_zero():
    F = CycField(12)
    rng = random.Random(7)
    for _ in range(20):
        a = CycScalar(12, [rng.randint(-5, 5) for _ in range(F.phi)], rng.randint(1, 4))
        if a == F.zero:
            continue
        assert a * a.inverse() == F.one
    with pytest.raises(DivisionByZero):
        F.zero.inverse()


def test_scalar_json_roundtrip():
    a = CycScalar(10, [1, -2, 0, 3], 5)
    assert CycScalar.from_json(a.to_json()) == a
    assert CycScalar.from_rational(6, Fraction(3, 4)).to_fraction() == Fraction(3, 4)


def test_monomials_of_degree():
    L = GradingGroup(1, 1)  # loop(3,3;2): x = y
    assert L.monomials_of_degree(L.x * 2) == [(0, 2), (1, 1), (2, 0)]
    L = GradingGroup(2, 1)  # loop(5,3;2): 2x = y
    assert sorted(L.monomials_of_degree(L.x * 2)) == [(0, 1), (2, 0)]
    assert L.monomials_of_degree(L.zero) == [(0, 0)]


def test_canonicalisation():
    L = GradingGroup(3, 2)
    rng = random.Random(1)
    for _ in range(50):
        u, v, s, t = (rng.randint(-9, 9) for _ in range(4))
        d = L.canon(u, v)
        assert L.canonicalize(d) == d
        assert L.canon(u, v) + L.canon(s, t) == L.canon(u + s, v + t)
    assert L.x * 3 - L.y * 2 == L.zero


def _ring(family, p, q, ell, twist=None, extra=()):
    S = setting(family, p, q, ell)
    twist = S.L.zero if twist is None else twist
    rels = tuple((g,) for g in extra) + ((S.w,),)
    return S, GradedModulePresentation(S.L, S.field, (twist,), rels)


def test_graded_piece_of_R():
    S, R = _ring("loop", 3, 3, 2)
    assert graded_piece_basis(R, S.c).dim == 4  # five quartics minus w
    S, skyscraper = _ring("loop", 3, 3, 2, extra=(S.mono(1, 0), S.mono(0, 1)))
    assert graded_piece_basis(skyscraper, S.L.zero).dim == 1
    assert all(graded_piece_basis(skyscraper, S.L.canon(k, 0)).dim == 0 for k in range(1, 5))


def test_graded_piece_shift_law():
    S, R = _ring("chain", 4, 3, 2)
    _, Rc = _ring("chain", 4, 3, 2, twist=S.c)
    for k in range(-3, 8):
        l = S.L.canon(k, 0)
        assert graded_piece_basis(Rc, l).dim == graded_piece_basis(R, l + S.c).dim


def test_R_eventually_periodic():
    # Krull dimension one: the Hilbert function of R = S/(w) is eventually
    # periodic, with period the lcm of the weights in the free direction
    for family, p, q, ell in [("loop", 5, 3, 2), ("chain", 4, 3, 2), ("bp", 6, 3, 3)]:
        S, R = _ring(family, p, q, ell)
        period = S.L.wx * S.L.wy // math.gcd(S.L.wx, S.L.wy)
        dims = [graded_piece_basis(R, S.L.canon(k, 0)).dim for k in range(20, 60)]
        assert all(dims[k] == dims[k + period] for k in range(len(dims) - period))


@pytest.mark.parametrize("family", ["loop", "chain", "bp"])
def test_w_factors_multiply_to_w(family):
    for p in range(2, 9):
        for q in range(2, 9):
            from curvemirror.mirror_core import admissible_indices

            for ell in admissible_indices(family, p, q):
                S = setting(family, p, q, ell)
                fs = w_factors(family, p, q, ell)
                assert all(f.is_homogeneous(S.L) for f in fs)
                unit = GradedPolynomial.monomial(S.field, *S.unit)
                assert poly_product([unit, *fs], S.field) == S.w


def test_loop_33_factors_are_x_plus_minus_iy():
    S = setting("loop", 3, 3, 2)
    i = S.field.root(1)
    expected = {
        frozenset({((1, 0), S.field.one), ((0, 1), c)}) for c in (i, -i)
    }
    got = {frozenset(f.terms.items()) for f in w_factors("loop", 3, 3, 2)}
    assert got == expected
