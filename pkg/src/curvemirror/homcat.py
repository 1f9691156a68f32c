"""Stable Hom spaces between matrix factorisations.

Two independent computations of dim Hom^k(K, K'):

route A  the dg Hom complex of the factorisations,
         Hom^n = Hom(K^0, K'^n)_0 + Hom(K^{-1}, K'^{n-1})_0,
         with (delta f) = d' f - (-1)^n f d;
route B  the complex Hom_R(K, M') for a module M' whose stabilisation is K'
         (the defining module of a basic object, else coker d1').

Both are finite dimensional in every degree because w has an isolated
singularity.  Morphisms are manipulated in route A; route B fixes the
normalisation of the arrow representatives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

from .galg import CycScalar, Echelon, GradedPolynomial, LDegree, Monomial, Vector, graded_piece_basis
from .matfac import (
    CyclicModule,
    MatrixFactorisation,
    MFMorphism,
    NotClosed,
    ObjectId,
    basic_object_ids,
    build_basic_object,
    differential_of,
    matmul,
    mcm_module,
    setting,
    shift,
)

WINDOW = range(-5, 6)
TWIST_WINDOW = range(-3, 4)


class RouteMismatch(RuntimeError):
    pass


class NotComposable(ValueError):
    pass


Entries = list[tuple[int, list[tuple[Monomial, CycScalar]]]]


def _by_col(M: tuple[tuple[GradedPolynomial, ...], ...], ncols: int, sign: int = 1) -> list[Entries]:
    out: list[Entries] = [[] for _ in range(ncols)]
    for r, row in enumerate(M):
        for c, e in enumerate(row):
            if e:
                out[c].append((r, [(m, v if sign == 1 else -v) for m, v in e.terms.items()]))
    return out


def _by_row(M: tuple[tuple[GradedPolynomial, ...], ...], sign: int = 1) -> list[Entries]:
    out: list[Entries] = []
    for row in M:
        out.append([(c, [(m, v if sign == 1 else -v) for m, v in e.terms.items()]) for c, e in enumerate(row) if e])
    return out


def _acc(vec: Vector, i: int, c: CycScalar) -> None:
    cur = vec.get(i)
    if cur is None:
        vec[i] = c
    else:
        s = cur + c
        if s:
            vec[i] = s
        else:
            del vec[i]


class _Complex:
    """A cochain complex given by basis(n) and images of basis vectors."""

    def __init__(self) -> None:
        self._basis: dict[int, tuple[list[tuple], dict[tuple, int]]] = {}
        self._delta: dict[int, list[Vector]] = {}
        self._rank: dict[int, int] = {}
        self._bound: dict[int, Echelon] = {}

    # subclasses
    def _make_basis(self, n: int) -> list[tuple]:
        raise NotImplementedError

    def _image(self, n: int, key: tuple, index: dict[tuple, int]) -> Vector:
        raise NotImplementedError

    # generic
    def basis(self, n: int) -> tuple[list[tuple], dict[tuple, int]]:
        hit = self._basis.get(n)
        if hit is None:
            keys = self._make_basis(n)
            hit = (keys, {k: i for i, k in enumerate(keys)})
            self._basis[n] = hit
        return hit

    def dim(self, n: int) -> int:
        return len(self.basis(n)[0])

    def delta(self, n: int) -> list[Vector]:
        hit = self._delta.get(n)
        if hit is None:
            keys, _ = self.basis(n)
            if not keys or not self.dim(n + 1):
                hit = [{} for _ in keys]
            else:
                index = self.basis(n + 1)[1]
                hit = [self._image(n, k, index) for k in keys]
            self._delta[n] = hit
        return hit

    def boundaries(self, n: int) -> Echelon:
        """Echelon basis of the image of delta^{n-1} inside C^n."""
        hit = self._bound.get(n)
        if hit is None:
            hit = Echelon()
            for v in self.delta(n - 1):
                if v:
                    hit.add(v)
            self._bound[n] = hit
            self._rank[n - 1] = hit.rank
        return hit

    def rank(self, n: int) -> int:
        hit = self._rank.get(n)
        if hit is None:
            if not self.dim(n) or not self.dim(n + 1):
                hit = 0
            else:
                hit = self.boundaries(n + 1).rank
            self._rank[n] = hit
        return hit

    def cohomology_dim(self, n: int) -> int:
        d = self.dim(n)
        if not d:
            return 0
        return d - self.rank(n) - self.rank(n - 1)

    def cocycles(self, n: int) -> list[Vector]:
        keys, _ = self.basis(n)
        if not keys:
            return []
        one = None
        out: list[Vector] = []
        ech = Echelon(track=True)
        for i, img in enumerate(self.delta(n)):
            if one is None:
                one = self._one()
            dep = ech.insert(img, i, one)
            if dep is not None:
                out.append(dep)
        return out

    def cohomology_basis(self, n: int) -> list[Vector]:
        """Cocycles whose classes form a basis of H^n."""
        span = Echelon()
        for v in self.delta(n - 1):
            if v:
                span.add(v)
        reps = []
        for z in self.cocycles(n):
            if span.add(z):
                reps.append(z)
        return reps

    def is_coboundary(self, vec: Vector, n: int) -> bool:
        return self.boundaries(n).contains(vec)

    def _one(self) -> CycScalar:
        raise NotImplementedError


class RouteA(_Complex):
    def __init__(self, K: MatrixFactorisation, K2: MatrixFactorisation) -> None:
        super().__init__()
        if K.setting is not K2.setting:
            raise ValueError("objects live over different rings")
        self.K, self.K2 = K, K2
        self.L = K.setting.L
        n1, n2 = K.rank, K2.rank
        self._d0p = _by_col(K2.d0, n2)
        self._d1p = _by_col(K2.d1, n2)
        self._d0_row = {1: _by_row(K.d0), -1: _by_row(K.d0, -1)}
        self._d1_row = {1: _by_row(K.d1), -1: _by_row(K.d1, -1)}
        self.field = K.setting.field

    def _one(self) -> CycScalar:
        return self.field.one

    def _make_basis(self, n: int) -> list[tuple]:
        L, K, K2 = self.L, self.K, self.K2
        keys: list[tuple] = []
        for t, a in enumerate(K2.twists(n)):
            for s, e in enumerate(K.even):
                for m in L.monomials_of_degree(a - e):
                    keys.append((0, t, s, m))
        for t, a in enumerate(K2.twists(n - 1)):
            for s, o in enumerate(K.odd):
                for m in L.monomials_of_degree(a - o):
                    keys.append((1, t, s, m))
        return keys

    def _image(self, n: int, key: tuple, index: dict[tuple, int]) -> Vector:
        block, t, s, (ma, mb) = key
        neg = -1 if n % 2 == 0 else 1  # -(-1)^n
        vec: Vector = {}
        if block == 0:
            Dn = self._d0p if n % 2 == 0 else self._d1p
            for u, terms in Dn[t]:
                for (a, b), c in terms:
                    _acc(vec, index[(0, u, s, (ma + a, mb + b))], c)
            for v, terms in self._d1_row[neg][s]:
                for (a, b), c in terms:
                    _acc(vec, index[(1, t, v, (ma + a, mb + b))], c)
        else:
            for v, terms in self._d0_row[neg][s]:
                for (a, b), c in terms:
                    _acc(vec, index[(0, t, v, (ma + a, mb + b))], c)
            Dm = self._d1p if n % 2 == 0 else self._d0p
            for u, terms in Dm[t]:
                for (a, b), c in terms:
                    _acc(vec, index[(1, u, s, (ma + a, mb + b))], c)
        return vec

    # morphisms <-> vectors
    def to_morphism(self, vec: Vector, n: int) -> MFMorphism:
        K, K2 = self.K, self.K2
        F = self.field
        keys, _ = self.basis(n)
        fe = [[GradedPolynomial(F) for _ in range(K.rank)] for _ in range(K2.rank)]
        fo = [[GradedPolynomial(F) for _ in range(K.rank)] for _ in range(K2.rank)]
        for i, c in vec.items():
            block, t, s, m = keys[i]
            target = fe if block == 0 else fo
            target[t][s] = target[t][s] + GradedPolynomial(F, {m: c})
        return MFMorphism(K, K2, n, tuple(map(tuple, fe)), tuple(map(tuple, fo)))

    def to_vector(self, f: MFMorphism) -> Vector:
        _, index = self.basis(f.degree)
        vec: Vector = {}
        for block, M in ((0, f.f_even), (1, f.f_odd)):
            for t, row in enumerate(M):
                for s, e in enumerate(row):
                    for m, c in e.terms.items():
                        key = (block, t, s, m)
                        if key not in index:
                            raise ValueError(f"entry {key} has the wrong degree")
                        _acc(vec, index[key], c)
        return vec


class _CyclicTarget:
    def __init__(self, M: CyclicModule) -> None:
        self.M = M

    def basis(self, l: LDegree) -> list[tuple]:
        return [(0, m) for m in self.M.basis(l)]

    def multiply(self, key: tuple, mm: Monomial) -> Iterator[tuple[tuple, CycScalar]]:
        m = key[1]
        nf = self.M.normal_form((m[0] + mm[0], m[1] + mm[1]))
        if nf is not None:
            yield (0, nf[0]), nf[1]


class _CokerTarget:
    """coker(d1) of an arbitrary factorisation, reduced degree by degree."""

    def __init__(self, K: MatrixFactorisation) -> None:
        self.P = mcm_module(K)
        self.L = K.setting.L
        self._pieces: dict[LDegree, tuple] = {}

    def _piece(self, l: LDegree) -> tuple:
        hit = self._pieces.get(l)
        if hit is None:
            piece = graded_piece_basis(self.P, l)
            index = {gm: i for i, gm in enumerate(piece.ambient)}
            ech = Echelon()
            # rebuild the relation span to reduce products
            for rel in self.P.relations:
                e = self.P.relation_degree(rel)
                for mult in self.L.monomials_of_degree(l - e):
                    vec: Vector = {}
                    for g, pol in enumerate(rel):
                        for (a, b), c in pol.terms.items():
                            _acc(vec, index[(g, (a + mult[0], b + mult[1]))], c)
                    if vec:
                        ech.add(vec)
            hit = (piece, index, ech)
            self._pieces[l] = hit
        return hit

    def basis(self, l: LDegree) -> list[tuple]:
        return list(self._piece(l)[0].basis)

    def multiply(self, key: tuple, mm: Monomial) -> Iterator[tuple[tuple, CycScalar]]:
        g, m = key
        prod = (m[0] + mm[0], m[1] + mm[1])
        l = self.L.monomial_degree(prod) - self.P.twists[g]
        piece, index, ech = self._piece(l)
        F = self.P.field
        r, _ = ech.reduce({index[(g, prod)]: F.one})
        for i, c in r.items():
            yield piece.ambient[i], c


class RouteB(_Complex):
    def __init__(self, K: MatrixFactorisation, K2: MatrixFactorisation) -> None:
        super().__init__()
        if K.setting is not K2.setting:
            raise ValueError("objects live over different rings")
        self.K, self.K2 = K, K2
        self.target = _CyclicTarget(K2.defining) if K2.defining is not None else _CokerTarget(K2)
        self.field = K.setting.field
        self._rows = {0: _by_row(K.d0), 1: _by_row(K.d1)}

    def _one(self) -> CycScalar:
        return self.field.one

    def _make_basis(self, m: int) -> list[tuple]:
        keys: list[tuple] = []
        for s, a in enumerate(self.K.twists(-m)):
            for key in self.target.basis(-a):
                keys.append((s, key))
        return keys

    def _image(self, m: int, key: tuple, index: dict[tuple, int]) -> Vector:
        # phi -> phi o d, d : K^{-m-1} -> K^{-m}
        s, elt = key
        rows = self._rows[(-m - 1) % 2]
        vec: Vector = {}
        for u, terms in rows[s]:
            for mm, c in terms:
                for k2, c2 in self.target.multiply(elt, mm):
                    _acc(vec, index[(u, k2)], c * c2)
        return vec

    def projection(self, f: MFMorphism) -> Vector:
        """Route A -> route B: last row of f on K^{-n}, reduced in the module."""
        if self.K2.defining is None:
            raise ValueError("projection needs a basic target")
        n = f.degree
        M = f.component(-n)
        last = M[-1]
        _, index = self.basis(n)
        vec: Vector = {}
        for s, e in enumerate(last):
            for mm, c in e.terms.items():
                for k2, c2 in self.target.multiply((0, (0, 0)), mm):
                    _acc(vec, index[(s, k2)], c * c2)
        return vec


# ---------------------------------------------------------------------------
# the engine


@dataclass
class HomTable:
    label: str
    objects: list[ObjectId]
    dims: dict[tuple[int, int, int], int]
    relations_verified: list[dict[str, object]] = field(default_factory=list)
    representatives: dict[tuple[int, int, str], MFMorphism] = field(default_factory=dict)

    def degree_zero(self) -> list[list[int]]:
        n = len(self.objects)
        return [[self.dims.get((a, b, 0), 0) for b in range(n)] for a in range(n)]

    def concentrated_in_degree_zero(self) -> bool:
        return all(d == 0 for (a, b, k), d in self.dims.items() if k != 0)

    def to_json(self) -> dict[str, object]:
        return {
            "label": self.label,
            "objects": [str(o) for o in self.objects],
            "dims": {f"({a},{b},{k})": d for (a, b, k), d in sorted(self.dims.items()) if d},
            "relations_verified": self.relations_verified,
        }


class HomEngine:
    """Caches factorisations and Hom complexes for one (family, p, q, ell)."""

    def __init__(self, family: str, p: int, q: int, ell: int, cross_check: bool = True) -> None:
        self.family, self.p, self.q, self.ell = family, p, q, ell
        self.setting = setting(family, p, q, ell)
        self.cross_check = cross_check
        self._A: dict[tuple, RouteA] = {}
        self._B: dict[tuple, RouteB] = {}

    def obj(self, o: ObjectId | str) -> MatrixFactorisation:
        if isinstance(o, str):
            o = ObjectId.parse(o)
        return build_basic_object(self.family, self.p, self.q, self.ell, o)

    @cached_property
    def objects(self) -> list[ObjectId]:
        return basic_object_ids(self.family, self.p, self.q, self.ell)

    def route_a(self, K: MatrixFactorisation, K2: MatrixFactorisation) -> RouteA:
        key = (K.key(), K2.key())
        hit = self._A.get(key)
        if hit is None:
            hit = self._A[key] = RouteA(K, K2)
        return hit

    def route_b(self, K: MatrixFactorisation, K2: MatrixFactorisation) -> RouteB:
        key = (K.key(), K2.key())
        hit = self._B.get(key)
        if hit is None:
            hit = self._B[key] = RouteB(K, K2)
        return hit

    def hom_dim(self, K: MatrixFactorisation, K2: MatrixFactorisation, k: int, routes: str = "AB") -> int:
        dims = {}
        if "A" in routes:
            dims["A"] = self.route_a(K, K2).cohomology_dim(k)
        if "B" in routes:
            dims["B"] = self.route_b(K, K2).cohomology_dim(k)
        vals = set(dims.values())
        if len(vals) != 1:
            raise RouteMismatch(f"Hom^{k}({K.name}, {K2.name}): {dims}")
        return vals.pop()

    def hom_ids(self, a: ObjectId, b: ObjectId, k: int, routes: str | None = None) -> int:
        """dim Hom^k(a, b) for shifted basic objects."""
        if routes is None:
            routes = "AB" if self.cross_check else "B"
        return self.hom_dim(self.obj(a), self.obj(b), k + b.shift - a.shift, routes)

    # morphisms
    def lift(self, K: MatrixFactorisation, K2: MatrixFactorisation, n: int, phi: Vector) -> MFMorphism:
        """A route-A cocycle whose module-side projection is cohomologous to phi."""
        A, B = self.route_a(K, K2), self.route_b(K, K2)
        Z = A.cocycles(n)
        F = self.setting.field
        ech = Echelon(track=True)
        labels = []
        for i, z in enumerate(Z):
            ech.insert(B.projection(A.to_morphism(z, n)), i, F.one)
            labels.append(("z", i))
        off = len(Z)
        for j, v in enumerate(B.delta(n - 1)):
            ech.insert(v, off + j, F.one)
        # solve phi = sum c_i proj(z_i) + boundary
        r, combo = ech.reduce(phi, {})
        if r:
            raise ValueError("class is not in the image of the projection")
        vec: Vector = {}
        for label, c in combo.items():
            if label < off:
                for k, v in Z[label].items():
                    _acc(vec, k, -c * v)
        f = A.to_morphism(vec, n)
        if not B.is_coboundary(_sub(B.projection(f), phi), n):
            raise AssertionError("lift failed")
        return f

    def module_vector(self, K: MatrixFactorisation, K2: MatrixFactorisation, n: int, entries: dict[int, GradedPolynomial]) -> Vector:
        """Route-B cochain with the given polynomial in slot s of K^{-n}."""
        B = self.route_b(K, K2)
        _, index = B.basis(n)
        vec: Vector = {}
        for s, pol in entries.items():
            for mm, c in pol.terms.items():
                for k2, c2 in B.target.multiply((0, (0, 0)), mm):
                    if (s, k2) not in index:
                        raise ValueError(f"slot {s} of {K.name} -> {K2.name} has the wrong degree")
                    _acc(vec, index[(s, k2)], c * c2)
        return vec

    def representative(self, a: ObjectId, b: ObjectId, entries: dict[int, GradedPolynomial]) -> MFMorphism:
        """Degree-0 morphism a -> b (shifted objects) with a module-side normal form."""
        K, K2 = self.obj(a), self.obj(b)
        n = b.shift - a.shift
        phi = self.module_vector(K, K2, n, entries)
        B = self.route_b(K, K2)
        if _apply(B.delta(n), phi):
            raise ValueError(f"{a}->{b}: representative is not a cocycle")
        return self.lift(K, K2, n, phi)

    def is_coboundary(self, h: MFMorphism) -> bool:
        even, odd = differential_of(h)
        if any(e for row in even for e in row) or any(e for row in odd for e in row):
            raise NotClosed("morphism is not closed")
        A = self.route_a(h.source, h.target)
        return A.is_coboundary(A.to_vector(h), h.degree)


def _sub(a: Vector, b: Vector) -> Vector:
    out = dict(a)
    for k, v in b.items():
        _acc(out, k, -v)
    return out


def _apply(images: list[Vector], vec: Vector) -> Vector:
    out: Vector = {}
    for i, c in vec.items():
        for k, v in images[i].items():
            _acc(out, k, c * v)
    return out


def compose(f: MFMorphism, g: MFMorphism) -> MFMorphism:
    """g after f."""
    if f.target.key() != g.source.key():
        raise NotComposable(f"{f.target.name} is not {g.source.name}")
    F = f.source.setting.field
    m = f.degree
    fe = matmul(g.component(m), f.f_even, F)
    fo = matmul(g.component(m - 1), f.f_odd, F)
    return MFMorphism(f.source, g.target, m + g.degree, tuple(map(tuple, fe)), tuple(map(tuple, fo)))


def add_morphisms(f: MFMorphism, g: MFMorphism, coeff: object = 1) -> MFMorphism:
    """f + coeff * g."""
    if (f.source.key(), f.target.key(), f.degree) != (g.source.key(), g.target.key(), g.degree):
        raise NotComposable("morphisms have different shapes")
    F = f.source.setting.field
    c = F(coeff)
    fe = tuple(tuple(a + b * c for a, b in zip(r1, r2)) for r1, r2 in zip(f.f_even, g.f_even))
    fo = tuple(tuple(a + b * c for a, b in zip(r1, r2)) for r1, r2 in zip(f.f_odd, g.f_odd))
    return MFMorphism(f.source, f.target, f.degree, fe, fo)


def scale(f: MFMorphism, coeff: object) -> MFMorphism:
    c = f.source.setting.field(coeff)
    fe = tuple(tuple(a * c for a in row) for row in f.f_even)
    fo = tuple(tuple(a * c for a in row) for row in f.f_odd)
    return MFMorphism(f.source, f.target, f.degree, fe, fo)


def hom_dim(K: MatrixFactorisation, K2: MatrixFactorisation, k: int) -> int:
    S = K.setting
    return HomEngine(S.family, S.p, S.q, S.ell).hom_dim(K, K2, k)


def is_coboundary(h: MFMorphism) -> bool:
    S = h.source.setting
    return HomEngine(S.family, S.p, S.q, S.ell).is_coboundary(h)


# ---------------------------------------------------------------------------
# Serre duality


@dataclass
class SerreReport:
    pair: tuple[str, str]
    rows: list[tuple[int, int, int]]  # (k, dim Hom^k(M,N), dim Hom^{-k}(N, M(-alpha)))

    @property
    def ok(self) -> bool:
        return all(a == b for _, a, b in self.rows)


def serre_check(engine: HomEngine, M: MatrixFactorisation, N: MatrixFactorisation, window: Iterable[int] = WINDOW) -> SerreReport:
    S = engine.setting
    alpha = S.L.canon(1, 1) - S.c
    Mt = shift(M, -alpha)
    rows = [(k, engine.hom_dim(M, N, k), engine.hom_dim(N, Mt, -k)) for k in window]
    return SerreReport((M.name, N.name), rows)


# ---------------------------------------------------------------------------
# endomorphism table


def assemble_endomorphism_table(engine: HomEngine, window: Iterable[int] = WINDOW, with_arrows: bool = True) -> HomTable:
    objs = engine.objects
    dims: dict[tuple[int, int, int], int] = {}
    window = list(window)
    for a, oa in enumerate(objs):
        for b, ob in enumerate(objs):
            for k in window:
                d = engine.hom_ids(oa, ob, k)
                if d:
                    dims[(a, b, k)] = d
    table = HomTable(engine.setting.label(), objs, dims)
    if with_arrows:
        from .quiverlab import attach_arrow_representatives

        attach_arrow_representatives(engine, table)
    return table
