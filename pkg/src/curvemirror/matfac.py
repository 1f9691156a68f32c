"""L-graded matrix factorisations of x^p y + x y^q, x^p y + y^q and x^p + y^q.

Conventions: a factorisation is the two-periodic complex

    ... -> K^{-1} --d1--> K^0 --d0--> K^1 = K^{-1}(c) -> ...

with K^0 = sum S(e_s) and K^{-1} = sum S(o_t).  The generator of S(a) sits
in degree -a, so an entry from S(a) to S(b) is homogeneous of degree b - a.
``d0`` has rows indexed by the odd summands (twisted by c) and columns by
the even ones; ``d1`` the other way round.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from . import mirror_core
from .galg import (
    CycField,
    CycScalar,
    GradedModulePresentation,
    GradedPolynomial,
    GradingGroup,
    LDegree,
    Monomial,
    poly_product,
)

Matrix = list[list[GradedPolynomial]]


class IndexOutOfRange(ValueError):
    pass


class NotClosed(ValueError):
    pass


# ---------------------------------------------------------------------------
# the ring data for one (family, p, q, ell)


@dataclass(frozen=True)
class Setting:
    family: str
    p: int
    q: int
    ell: int
    field: CycField
    L: GradingGroup
    c: LDegree
    P: int  # x-exponent in w_r
    Q: int  # y-exponent in w_r
    w: GradedPolynomial
    factors: tuple[GradedPolynomial, ...]
    unit: Monomial  # w = x^unit[0] y^unit[1] * prod w_r

    def xi(self, r: int) -> CycScalar:
        """e^{pi i/ell} eta^r with eta = e^{2 pi i/ell}."""
        return self.field.root(2 * r + 1)

    def mono(self, a: int, b: int, coeff: object = 1) -> GradedPolynomial:
        return GradedPolynomial.monomial(self.field, a, b, coeff)

    def deg(self, a: int, b: int) -> LDegree:
        return self.L.canon(a, b)

    def zero(self) -> GradedPolynomial:
        return GradedPolynomial(self.field)

    def label(self) -> str:
        return f"{self.family}({self.p},{self.q};{self.ell})"


@lru_cache(maxsize=None)
def setting(family: str, p: int, q: int, ell: int) -> Setting:
    if family not in mirror_core.FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if p < 2 or q < 2:
        raise IndexOutOfRange("exponents must be at least 2")
    L = mirror_core.grading_group(family, p, q, ell)
    F = CycField(2 * ell)
    cu, cv = mirror_core.c_vector(family, p, q)
    if family == "loop":
        w = {(p, 1): 1, (1, q): 1}
        P, Q, unit = (p - 1) // ell, (q - 1) // ell, (1, 1)
    elif family == "chain":
        w = {(p, 1): 1, (0, q): 1}
        P, Q, unit = p // ell, (q - 1) // ell, (0, 1)
    else:
        w = {(p, 0): 1, (0, q): 1}
        P, Q, unit = p // ell, q // ell, (0, 0)
    wpoly = GradedPolynomial(F, {m: F(c) for m, c in w.items()})
    factors = tuple(
        GradedPolynomial(F, {(P, 0): F.one, (0, Q): -F.root(2 * r + 1)}) for r in range(1, ell + 1)
    )
    return Setting(family, p, q, ell, F, L, L.canon(cu, cv), P, Q, wpoly, factors, unit)


def w_factors(family: str, p: int, q: int, ell: int) -> list[GradedPolynomial]:
    return list(setting(family, p, q, ell).factors)


# ---------------------------------------------------------------------------
# object identifiers and index ranges


@dataclass(frozen=True, order=True)
class ObjectId:
    kind: str  # "K0" | "Kx" | "Ky" | "Kw"
    index: tuple[int, ...]
    shift: int = 0  # cohomological shift [n]

    def __str__(self) -> str:
        body = f"{self.kind}({','.join(map(str, self.index))})"
        return body + (f"[{self.shift}]" if self.shift else "")

    def unshifted(self) -> ObjectId:
        return ObjectId(self.kind, self.index)

    def with_shift(self, n: int) -> ObjectId:
        return ObjectId(self.kind, self.index, n)

    @classmethod
    def parse(cls, text: str) -> ObjectId:
        text = text.strip()
        shift = 0
        if text.endswith("]"):
            text, s = text[:-1].split("[")
            shift = int(s)
        kind, rest = text.split("(")
        idx = tuple(int(v) for v in rest.rstrip(")").split(",") if v)
        return cls(kind, idx, shift)


def k0_indices(family: str, p: int, q: int, ell: int) -> list[tuple[int, int]]:
    S = setting(family, p, q, ell)
    if family == "loop":
        return [(i, j) for j in range(1, q) for i in range(p - S.P, p)]
    if family == "chain":
        return [(i, j) for j in range(q - S.Q, q) for i in range(1, p)]
    out = [((ell - 1) * S.P, j) for j in range(S.Q + 1, q)]
    out += [(i, j) for j in range(1, q) for i in range((ell - 1) * S.P + 1, p)]
    return sorted(out, key=lambda ij: (ij[1], ij[0]))


def boundary_ids(family: str, p: int, q: int, ell: int) -> list[ObjectId]:
    S = setting(family, p, q, ell)
    out: list[ObjectId] = []
    if family == "loop":
        out += [ObjectId("Kx", (i,)) for i in range(p - S.P, p)]
    if family in ("loop", "chain"):
        out += [ObjectId("Ky", (j,)) for j in range(q - S.Q, q)]
    if not (family == "bp" and ell == 1):
        out += [ObjectId("Kw", (r,)) for r in range(1, ell + 1)]
    return out


def basic_object_ids(family: str, p: int, q: int, ell: int, shifted: bool = True) -> list[ObjectId]:
    """K0 objects by increasing degree of their generator, then the rest."""
    S = setting(family, p, q, ell)
    k0 = [ObjectId("K0", ij) for ij in k0_indices(family, p, q, ell)]
    k0.sort(key=lambda o: (_k0_shift(S, *o.index).free, o.index))
    rest = boundary_ids(family, p, q, ell)
    if shifted:
        rest = [o.with_shift(3) for o in rest]
    return k0 + rest


# ---------------------------------------------------------------------------
# matrix factorisations


@dataclass(frozen=True)
class CyclicModule:
    """S(twist)/J for a monomial ideal J or J = (x^P - xi y^Q)."""

    setting: Setting
    twist: LDegree
    monomial_gens: tuple[Monomial, ...] = ()
    binomial: tuple[int, int, CycScalar] | None = None  # (P, Q, xi)

    def basis(self, l: LDegree) -> list[Monomial]:
        monos = self.setting.L.monomials_of_degree(l + self.twist)
        if self.binomial is not None:
            P = self.binomial[0]
            return [m for m in monos if m[0] < P]
        gens = self.monomial_gens
        return [m for m in monos if not any(m[0] >= a and m[1] >= b for a, b in gens)]

    def normal_form(self, m: Monomial) -> tuple[Monomial, CycScalar] | None:
        """Standard monomial and coefficient representing m, or None if m = 0."""
        if self.binomial is not None:
            P, Q, xi = self.binomial
            t = m[0] // P
            return (m[0] - t * P, m[1] + t * Q), xi**t
        for a, b in self.monomial_gens:
            if m[0] >= a and m[1] >= b:
                return None
        return m, self.setting.field.one

    def generators(self) -> list[GradedPolynomial]:
        S = self.setting
        if self.binomial is not None:
            P, Q, xi = self.binomial
            return [GradedPolynomial(S.field, {(P, 0): S.field.one, (0, Q): -xi})]
        return [S.mono(a, b) for a, b in self.monomial_gens]

    def presentation(self) -> GradedModulePresentation:
        S = self.setting
        rels = [(g,) for g in self.generators()] + [(S.w,)]
        return GradedModulePresentation(S.L, S.field, (self.twist,), tuple(rels))


@dataclass(frozen=True)
class MatrixFactorisation:
    setting: Setting
    name: str
    even: tuple[LDegree, ...]
    odd: tuple[LDegree, ...]
    d0: tuple[tuple[GradedPolynomial, ...], ...]
    d1: tuple[tuple[GradedPolynomial, ...], ...]
    defining: CyclicModule | None = None

    @property
    def rank(self) -> int:
        return len(self.even)

    @property
    def w(self) -> GradedPolynomial:
        return self.setting.w

    def twists(self, m: int) -> tuple[LDegree, ...]:
        """Twists of the summands of K^m."""
        c = self.setting.c
        if m % 2 == 0:
            return tuple(e + c * (m // 2) for e in self.even)
        return tuple(o + c * ((m + 1) // 2) for o in self.odd)

    def differential(self, m: int) -> tuple[tuple[GradedPolynomial, ...], ...]:
        """Matrix of K^m -> K^{m+1}."""
        return self.d0 if m % 2 == 0 else self.d1

    def key(self) -> tuple[object, ...]:
        return (self.name, self.even, self.odd)

    def to_json(self) -> dict[str, object]:
        return {
            "name": self.name,
            "rank": self.rank,
            "even_twists": [d.to_json() for d in self.even],
            "odd_twists": [d.to_json() for d in self.odd],
            "d0": [[e.to_json() for e in row] for row in self.d0],
            "d1": [[e.to_json() for e in row] for row in self.d1],
        }


def _freeze(M: Sequence[Sequence[GradedPolynomial]]) -> tuple[tuple[GradedPolynomial, ...], ...]:
    return tuple(tuple(row) for row in M)


def matmul(A: Sequence[Sequence[GradedPolynomial]], B: Sequence[Sequence[GradedPolynomial]], field: CycField) -> Matrix:
    n, m = len(A), len(B[0]) if B else 0
    out: Matrix = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = GradedPolynomial(field)
            for k in range(len(B)):
                a = A[i][k]
                if a:
                    b = B[k][j]
                    if b:
                        acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def _det_rows(M: Sequence[Sequence[GradedPolynomial]], rows: tuple[int, ...], cols: tuple[int, ...], field: CycField) -> GradedPolynomial:
    # Laplace expansion along columns with memoisation on the remaining rows
    memo: dict[tuple[int, ...], GradedPolynomial] = {}

    def rec(k: int, remaining: tuple[int, ...]) -> GradedPolynomial:
        if k == len(cols):
            return GradedPolynomial.monomial(field, 0, 0)
        hit = memo.get(remaining)
        if hit is not None:
            return hit
        c = cols[k]
        acc = GradedPolynomial(field)
        for pos, r in enumerate(remaining):
            e = M[r][c]
            if not e:
                continue
            sub = rec(k + 1, remaining[:pos] + remaining[pos + 1 :])
            if not sub:
                continue
            term = e * sub
            acc = acc + (term if pos % 2 == 0 else -term)
        memo[remaining] = acc
        return acc

    return rec(0, rows)


def determinant(M: Sequence[Sequence[GradedPolynomial]], field: CycField) -> GradedPolynomial:
    n = len(M)
    return _det_rows(M, tuple(range(n)), tuple(range(n)), field)


def adjugate(M: Sequence[Sequence[GradedPolynomial]], field: CycField) -> Matrix:
    n = len(M)
    if n == 1:
        return [[GradedPolynomial.monomial(field, 0, 0)]]
    out: Matrix = [[GradedPolynomial(field) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        rows = tuple(r for r in range(n) if r != i)
        for j in range(n):
            cols = tuple(c for c in range(n) if c != j)
            minor = _det_rows(M, rows, cols, field)
            out[j][i] = minor if (i + j) % 2 == 0 else -minor
    return out


# ---------------------------------------------------------------------------
# constructors


def _rank_one(S: Setting, name: str, d1: GradedPolynomial, d0: GradedPolynomial, odd: LDegree, module: CyclicModule) -> MatrixFactorisation:
    return MatrixFactorisation(S, name, (S.L.zero,), (odd,), ((d0,),), ((d1,),), module)


def _kx(S: Setting) -> MatrixFactorisation:
    rest = S.mono(S.unit[0] - 1, S.unit[1]) * poly_product(S.factors, S.field)
    return _rank_one(S, "Kx", S.mono(1, 0), rest, -S.L.x, CyclicModule(S, S.L.zero, ((1, 0),)))


def _ky(S: Setting) -> MatrixFactorisation:
    rest = S.mono(S.unit[0], S.unit[1] - 1) * poly_product(S.factors, S.field)
    return _rank_one(S, "Ky", S.mono(0, 1), rest, -S.L.y, CyclicModule(S, S.L.zero, ((0, 1),)))


def _kw(S: Setting, r: int) -> MatrixFactorisation:
    others = [f for k, f in enumerate(S.factors, start=1) if k != r]
    rest = S.mono(*S.unit) * poly_product(others, S.field)
    module = CyclicModule(S, S.L.zero, (), (S.P, S.Q, S.xi(r)))
    return _rank_one(S, f"Kw({r})", S.factors[r - 1], rest, -S.L.x * S.P, module)


def _k0_data(S: Setting, i: int, j: int) -> tuple[LDegree, list[Monomial], int]:
    """Shift, staircase generators and k for K0(i, j)."""
    p, q, ell, P, Q = S.p, S.q, S.ell, S.P, S.Q
    fam = S.family
    if fam == "loop":
        if not (p - P <= i <= p - 1 and 1 <= j <= q - 1):
            raise IndexOutOfRange(f"K0({i},{j}) outside the loop range")
        k = (j - 1) * ell // (q - 1)
        gens = [(i - (ell - 1 - k) * P, 0)]
        gens += [(i - (ell - t) * P, j - t * Q) for t in range(k, 0, -1)]
        gens += [(0, j)]
        shift = S.deg(i + 1, j + 1)
    elif fam == "chain":
        if not (1 <= i <= p - 1 and q - Q <= j <= q - 1):
            raise IndexOutOfRange(f"K0({i},{j}) outside the chain range")
        k = (i - 1) * ell // p
        gens = [(i, 0)]
        gens += [(i - t * P, j - (ell - t) * Q) for t in range(1, k + 1)]
        gens += [(0, j - (ell - k - 1) * Q)]
        shift = S.deg(i, j + 1)
    else:
        k = (j - 1) * ell // q
        if (ell - 1) * P + 1 <= i <= p - 1 and 1 <= j <= q - 1:
            gens = [(i - (ell - k - 1) * P, 0)]
            gens += [(i - (ell - t) * P, j - t * Q) for t in range(k, 0, -1)]
            gens += [(0, j)]
        elif i == (ell - 1) * P and Q + 1 <= j <= q - 1:
            gens = [(k * P, 0)]
            gens += [((k - s) * P, j - (k - s + 1) * Q) for s in range(1, k + 1)]
        else:
            raise IndexOutOfRange(f"K0({i},{j}) outside the Brieskorn-Pham range")
        shift = S.deg(i, j)
    return shift, gens, k


def _staircase(S: Setting, name: str, shift: LDegree, gens: list[Monomial]) -> MatrixFactorisation:
    m = len(gens) - 1
    for t in range(m):
        if not (gens[t][0] > gens[t + 1][0] and gens[t][1] < gens[t + 1][1]):
            raise ValueError(f"{name}: generators {gens} are not a staircase")
    if gens[0][1] != 0 or gens[-1][0] != 0:
        raise ValueError(f"{name}: staircase must start at a pure x-power and end at a pure y-power")
    (wa, wb) = _w_split(S)
    if not (wa[0] >= gens[0][0] and wb[1] >= gens[-1][1] and wa[1] >= gens[0][1] and wb[0] >= gens[-1][0]):
        raise ValueError(f"{name}: w is not in the ideal")
    Z = S.zero
    d0: Matrix = [[Z() for _ in range(m + 1)] for _ in range(m + 1)]
    for s in range(m):
        d0[s][s] = S.mono(0, gens[s + 1][1] - gens[s][1])
        d0[s + 1][s] = S.mono(gens[s][0] - gens[s + 1][0], 0, -1)
    d0[0][m] = S.mono(wa[0] - gens[0][0], wa[1] - gens[0][1])
    d0[m][m] = d0[m][m] + S.mono(wb[0] - gens[m][0], wb[1] - gens[m][1])
    if m == 0:
        d0[0][0] = S.mono(wa[0] - gens[0][0], wa[1]) + S.mono(wb[0], wb[1] - gens[0][1])
    c = S.c
    odd = tuple(shift - S.deg(*g) for g in gens)
    even = tuple(
        shift + c - S.deg(gens[s][0], gens[s + 1][1]) for s in range(m)
    ) + (shift,)
    d1 = adjugate(d0, S.field)
    module = CyclicModule(S, shift, tuple(gens))
    return MatrixFactorisation(S, name, even, odd, _freeze(d0), _freeze(d1), module)


def _w_split(S: Setting) -> tuple[Monomial, Monomial]:
    """The two monomials of w: the one used against x-powers, then y-powers."""
    p, q = S.p, S.q
    if S.family == "loop":
        return (p, 1), (1, q)
    if S.family == "chain":
        return (p, 1), (0, q)
    return (p, 0), (0, q)


def _k0_shift(S: Setting, i: int, j: int) -> LDegree:
    return _k0_data(S, i, j)[0]


def k0_rank_parameter(family: str, p: int, q: int, ell: int, i: int, j: int) -> int:
    return _k0_data(setting(family, p, q, ell), i, j)[2]


@lru_cache(maxsize=None)
def _build(family: str, p: int, q: int, ell: int, kind: str, index: tuple[int, ...]) -> MatrixFactorisation:
    S = setting(family, p, q, ell)
    if kind == "Kx":
        if family != "loop":
            raise IndexOutOfRange("Kx objects exist for the loop family only")
        (i,) = index
        return shift(_kx(S), S.deg(i + 1 - p, 0), f"Kx({i})")
    if kind == "Ky":
        if family == "bp":
            raise IndexOutOfRange("Ky objects do not occur for Brieskorn-Pham")
        (j,) = index
        return shift(_ky(S), S.deg(0, j + 1 - q), f"Ky({j})")
    if kind == "Kw":
        (r,) = index
        if not 1 <= r <= ell:
            raise IndexOutOfRange(f"Kw({r}) needs 1 <= r <= {ell}")
        return _kw(S, r)
    if kind == "K0":
        i, j = index
        shift0, gens, _ = _k0_data(S, i, j)
        return _staircase(S, f"K0({i},{j})", shift0, gens)
    raise IndexOutOfRange(f"unknown object kind {kind!r}")


def build_basic_object(family: str, p: int, q: int, ell: int, obj: ObjectId | str) -> MatrixFactorisation:
    if isinstance(obj, str):
        obj = ObjectId.parse(obj)
    return _build(family, p, q, ell, obj.kind, obj.index)


# ---------------------------------------------------------------------------
# operations


def shift(K: MatrixFactorisation, l: LDegree, name: str | None = None) -> MatrixFactorisation:
    module = K.defining
    if module is not None:
        module = CyclicModule(module.setting, module.twist + l, module.monomial_gens, module.binomial)
    return MatrixFactorisation(
        K.setting,
        name or (K.name if l == K.setting.L.zero else f"{K.name}({l})"),
        tuple(e + l for e in K.even),
        tuple(o + l for o in K.odd),
        K.d0,
        K.d1,
        module,
    )


def suspend(K: MatrixFactorisation) -> MatrixFactorisation:
    c = K.setting.c
    neg = lambda M: tuple(tuple(-e for e in row) for row in M)  # noqa: E731
    return MatrixFactorisation(
        K.setting,
        f"{K.name}[1]",
        tuple(o + c for o in K.odd),
        K.even,
        neg(K.d1),
        neg(K.d0),
        None,
    )


def same_structure(A: MatrixFactorisation, B: MatrixFactorisation) -> bool:
    return A.even == B.even and A.odd == B.odd and A.d0 == B.d0 and A.d1 == B.d1


def coker_module(K: MatrixFactorisation) -> GradedModulePresentation:
    """Presentation of the defining module, or of coker(d1) when there is none."""
    if K.defining is not None:
        return K.defining.presentation()
    rels = []
    for t in range(len(K.odd)):
        rels.append(tuple(K.d1[s][t] for s in range(len(K.even))))
    return GradedModulePresentation(K.setting.L, K.setting.field, K.even, tuple(rels))


def mcm_module(K: MatrixFactorisation) -> GradedModulePresentation:
    rels = []
    for t in range(len(K.odd)):
        rels.append(tuple(K.d1[s][t] for s in range(len(K.even))))
    return GradedModulePresentation(K.setting.L, K.setting.field, K.even, tuple(rels))


# ---------------------------------------------------------------------------
# morphisms and cones


@dataclass(frozen=True)
class MFMorphism:
    """Degree-n map: f_even : K^0 -> K'^n and f_odd : K^{-1} -> K'^{n-1}."""

    source: MatrixFactorisation
    target: MatrixFactorisation
    degree: int
    f_even: tuple[tuple[GradedPolynomial, ...], ...]
    f_odd: tuple[tuple[GradedPolynomial, ...], ...]

    def component(self, i: int) -> tuple[tuple[GradedPolynomial, ...], ...]:
        """Matrix of K^i -> K'^{i+n}."""
        return self.f_even if i % 2 == 0 else self.f_odd


def zero_morphism(K: MatrixFactorisation, K2: MatrixFactorisation, degree: int = 0) -> MFMorphism:
    F = K.setting.field
    z = lambda r, c: tuple(tuple(GradedPolynomial(F) for _ in range(c)) for _ in range(r))  # noqa: E731
    rows_even = len(K2.twists(degree))
    rows_odd = len(K2.twists(degree - 1))
    return MFMorphism(K, K2, degree, z(rows_even, K.rank), z(rows_odd, K.rank))


def identity_morphism(K: MatrixFactorisation) -> MFMorphism:
    F = K.setting.field
    n = K.rank
    eye = tuple(
        tuple(GradedPolynomial.monomial(F, 0, 0) if i == j else GradedPolynomial(F) for j in range(n)) for i in range(n)
    )
    return MFMorphism(K, K, 0, eye, eye)


def differential_of(f: MFMorphism) -> tuple[Matrix, Matrix]:
    """(delta f)^0 and (delta f)^{-1} for the dg Hom differential."""
    K, K2, n = f.source, f.target, f.degree
    F = K.setting.field
    sign = -1 if n % 2 else 1
    top = matmul(K2.differential(n), f.f_even, F)
    t2 = matmul(f.f_odd, K.d0, F)
    even = [[a - b * sign for a, b in zip(r1, r2)] for r1, r2 in zip(top, t2)]
    bot = matmul(K2.differential(n - 1), f.f_odd, F)
    b2 = matmul(f.f_even, K.d1, F)
    odd = [[a - b * sign for a, b in zip(r1, r2)] for r1, r2 in zip(bot, b2)]
    return even, odd


def is_closed(f: MFMorphism) -> bool:
    even, odd = differential_of(f)
    return all(not e for row in even for e in row) and all(not e for row in odd for e in row)


def cone(f: MFMorphism) -> MatrixFactorisation:
    if f.degree != 0:
        raise NotClosed("cone needs a degree-zero morphism")
    if not is_closed(f):
        raise NotClosed("morphism is not a chain map")
    K, K2 = f.source, f.target
    S = K.setting
    F = S.field
    c = S.c
    n, n2 = K.rank, K2.rank
    Z = lambda: GradedPolynomial(F)  # noqa: E731
    even = tuple(o + c for o in K.odd) + K2.even
    odd = K.even + K2.odd
    # d0: C^0 = K^1 + K'^0 -> C^1 = K^2 + K'^1
    d0 = [[Z() for _ in range(n + n2)] for _ in range(n + n2)]
    d1 = [[Z() for _ in range(n + n2)] for _ in range(n + n2)]
    for a in range(n):
        for b in range(n):
            d0[a][b] = -K.d1[a][b]
            d1[a][b] = -K.d0[a][b]
    for a in range(n2):
        for b in range(n2):
            d0[n + a][n + b] = K2.d0[a][b]
            d1[n + a][n + b] = K2.d1[a][b]
    for a in range(n2):
        for b in range(n):
            d0[n + a][b] = f.f_odd[a][b]
            d1[n + a][b] = f.f_even[a][b]
    return MatrixFactorisation(S, f"Cone({K.name}->{K2.name})", even, odd, _freeze(d0), _freeze(d1), None)


# ---------------------------------------------------------------------------
# verification


@dataclass
class MFReport:
    name: str
    checks: dict[str, bool] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict[str, object]:
        return {"name": self.name, "ok": self.ok, "checks": self.checks, "notes": self.notes}


def _is_scalar_identity(M: Matrix, w: GradedPolynomial) -> bool:
    for i, row in enumerate(M):
        for j, e in enumerate(row):
            if i == j:
                if e != w:
                    return False
            elif e:
                return False
    return True


def homogeneity_defects(K: MatrixFactorisation) -> list[str]:
    S = K.setting
    L, c = S.L, S.c
    bad = []
    for name, M, src, tgt in (
        ("d0", K.d0, K.even, tuple(o + c for o in K.odd)),
        ("d1", K.d1, K.odd, K.even),
    ):
        for a, row in enumerate(M):
            for b, e in enumerate(row):
                for m in e.terms:
                    if L.monomial_degree(m) + src[b] - tgt[a] != L.zero:
                        bad.append(f"{name}[{a}][{b}] term {m}")
    return bad


def verify_mf(K: MatrixFactorisation, check_det: bool | None = None) -> MFReport:
    S = K.setting
    F = S.field
    rep = MFReport(K.name)
    rep.checks["d0*d1 = w*Id"] = _is_scalar_identity(matmul(K.d0, K.d1, F), S.w)
    rep.checks["d1*d0 = w*Id"] = _is_scalar_identity(matmul(K.d1, K.d0, F), S.w)
    defects = homogeneity_defects(K)
    rep.checks["homogeneous"] = not defects
    rep.notes.extend(defects[:5])
    twice = suspend(suspend(K))
    rep.checks["K[2] = K(c)"] = same_structure(twice, shift(K, S.c))
    if check_det is None:
        check_det = K.name.startswith("K0")
    if check_det:
        rep.checks["det(d0) = w"] = determinant(K.d0, F) == S.w
        rep.checks["d1 = Adj(d0)"] = _freeze(adjugate(K.d0, F)) == K.d1
    return rep


def corrupt(K: MatrixFactorisation) -> MatrixFactorisation:
    """Negative control: perturb one entry of d0."""
    d0 = [list(row) for row in K.d0]
    d0[0][0] = d0[0][0] + K.setting.mono(0, 0)
    return MatrixFactorisation(K.setting, K.name + "*", K.even, K.odd, _freeze(d0), K.d1, K.defining)
