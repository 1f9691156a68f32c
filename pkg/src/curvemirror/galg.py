"""Exact arithmetic: cyclotomic scalars, L-degrees, graded polynomials,
sparse echelon forms and graded pieces of cyclic modules."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

Monomial = tuple[int, int]


class DivisionByZero(ZeroDivisionError):
    pass


# ---------------------------------------------------------------------------
# cyclotomic fields


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _exact_divide(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _exact_divide(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1] // den[-1]
        out[k] = c
        for i, d in enumerate(den):
            num[k + i] -= c * d
    assert not any(num), "non-exact polynomial division"
    return out


@lru_cache(maxsize=None)
def _reduction_table(n: int) -> tuple[tuple[int, ...], ...]:
    # row k: coefficients of t^k modulo Phi_n, for k < 2*phi - 1
    phi_poly = cyclotomic_poly(n)
    phi = len(phi_poly) - 1
    rows: list[tuple[int, ...]] = []
    cur = [0] * phi
    for k in range(max(2 * phi - 1, 1)):
        if k < phi:
            cur = [0] * phi
            cur[k] = 1
        else:
            top = cur[-1]
            cur = [0] + cur[:-1]
            for i in range(phi):
                cur[i] -= top * phi_poly[i]
        rows.append(tuple(cur))
    return tuple(rows)


def euler_phi(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


class CycScalar:
    """Element of Q(zeta_n) stored as integer coefficients over a common
    denominator in the power basis 1, zeta, ..., zeta^(phi-1)."""

    __slots__ = ("n", "num", "den")

    def __init__(self, n: int, num: Iterable[int], den: int = 1) -> None:
        num = tuple(num)
        if den == 0:
            raise DivisionByZero("zero denominator")
        if den < 0:
            num = tuple(-c for c in num)
            den = -den
        g = math.gcd(den, *num)
        if g > 1:
            num = tuple(c // g for c in num)
            den //= g
        self.n = n
        self.num = num
        self.den = den

    # constructors
    @classmethod
    def from_rational(cls, n: int, value: int | Fraction) -> CycScalar:
        value = Fraction(value)
        phi = euler_phi(n)
        return cls(n, (value.numerator,) + (0,) * (phi - 1), value.denominator)

    @classmethod
    def root(cls, n: int, k: int) -> CycScalar:
        """zeta_n^k with zeta_n = exp(2 pi i / n)."""
        return cls(n, _root_vec(n, k % n))

    # protocol
    def _coerce(self, other: object) -> CycScalar | None:
        if isinstance(other, CycScalar):
            if other.n != self.n:
                raise ValueError(f"conductor mismatch {self.n} vs {other.n}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycScalar.from_rational(self.n, other)
        return None

    def __add__(self, other: object) -> CycScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return CycScalar(self.n, (a + b for a, b in zip(self.num, o.num)), self.den)
        return CycScalar(
            self.n,
            (a * o.den + b * self.den for a, b in zip(self.num, o.num)),
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self) -> CycScalar:
        return CycScalar(self.n, (-a for a in self.num), self.den)

    def __sub__(self, other: object) -> CycScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> CycScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> CycScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.num, o.num
        phi = len(a)
        if phi == 1:
            return CycScalar(self.n, (a[0] * b[0],), self.den * o.den)
        prod = [0] * (2 * phi - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        table = _reduction_table(self.n)
        out = prod[:phi]
        for k in range(phi, 2 * phi - 1):
            c = prod[k]
            if c:
                row = table[k]
                for i in range(phi):
                    out[i] += c * row[i]
        return CycScalar(self.n, out, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> CycScalar:
        if not self:
            raise DivisionByZero("inverse of zero")
        num, den = _inverse_vec(self.n, self.num)
        return CycScalar(self.n, num, den) * self.den

    def __truediv__(self, other: object) -> CycScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> CycScalar:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> CycScalar:
        if k < 0:
            return self.inverse() ** (-k)
        acc = CycScalar.from_rational(self.n, 1)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def __bool__(self) -> bool:
        return any(self.num)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CycScalar):
            return self.n == other.n and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            o = Fraction(other)
            return (
                self.num[0] * o.denominator == o.numerator * self.den
                and not any(self.num[1:])
            )
        return NotImplemented

    def __hash__(self) -> int:
        if not any(self.num[1:]):
            return hash(Fraction(self.num[0], self.den))
        return hash((self.n, self.num, self.den))

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not rational")
        return Fraction(self.num[0], self.den)

    def lift(self, m: int) -> CycScalar:
        """Image under Q(zeta_n) -> Q(zeta_m), n | m."""
        if m % self.n:
            raise ValueError("conductor must divide target")
        step = m // self.n
        acc = CycScalar.from_rational(m, 0)
        for k, c in enumerate(self.num):
            if c:
                acc = acc + CycScalar.root(m, k * step) * c
        return acc * Fraction(1, self.den)

    def to_json(self) -> dict[str, object]:
        return {"n": self.n, "num": list(self.num), "den": self.den}

    @classmethod
    def from_json(cls, data: Mapping[str, object]) -> CycScalar:
        return cls(int(data["n"]), [int(c) for c in data["num"]], int(data["den"]))

    def __repr__(self) -> str:
        terms = []
        for k, c in enumerate(self.num):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*z^{k}")
        body = " + ".join(terms) if terms else "0"
        if self.den != 1:
            body = f"({body})/{self.den}"
        return f"Cyc{self.n}[{body}]"


@lru_cache(maxsize=None)
def _root_vec(n: int, k: int) -> tuple[int, ...]:
    phi_poly = cyclotomic_poly(n)
    phi = len(phi_poly) - 1
    vec = [1] + [0] * (phi - 1)
    for _ in range(k):
        top = vec[-1]
        vec = [0] + vec[:-1]
        for i in range(phi):
            vec[i] -= top * phi_poly[i]
    return tuple(vec)


@lru_cache(maxsize=4096)
def _inverse_vec(n: int, num: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    phi = len(num)
    if phi == 1:
        return (1,), num[0]
    # columns: num * t^k reduced
    x = CycScalar(n, num)
    cols = []
    for k in range(phi):
        e = [0] * phi
        e[k] = 1
        cols.append((x * CycScalar(n, e)).num)
    mat = [[Fraction(cols[c][r]) for c in range(phi)] + [Fraction(int(r == 0))] for r in range(phi)]
    for c in range(phi):
        piv = next(r for r in range(c, phi) if mat[r][c])
        mat[c], mat[piv] = mat[piv], mat[c]
        inv = 1 / mat[c][c]
        mat[c] = [v * inv for v in mat[c]]
        for r in range(phi):
            if r != c and mat[r][c]:
                f = mat[r][c]
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[c])]
    sol = [mat[r][phi] for r in range(phi)]
    den = math.lcm(*(s.denominator for s in sol))
    return tuple(int(s * den) for s in sol), den


class CycField:
    """The field Q(zeta_n); hands out constants of matching conductor."""

    def __init__(self, n: int) -> None:
        self.n = n
        self.phi = euler_phi(n)
        self.zero = CycScalar.from_rational(n, 0)
        self.one = CycScalar.from_rational(n, 1)

    def __call__(self, value: int | Fraction | CycScalar) -> CycScalar:
        if isinstance(value, CycScalar):
            if value.n != self.n:
                return value.lift(self.n)
            return value
        return CycScalar.from_rational(self.n, value)

    def root(self, k: int) -> CycScalar:
        return CycScalar.root(self.n, k)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CycField) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("CycField", self.n))

    def __repr__(self) -> str:
        return f"CycField({self.n})"


def scalar_ops(a: CycScalar, b: CycScalar) -> dict[str, CycScalar | bool]:
    """Sum, product, quotient and equality of two scalars."""
    out: dict[str, CycScalar | bool] = {"add": a + b, "mul": a * b, "eq": a == b}
    if b:
        out["div"] = a / b
    return out


# ---------------------------------------------------------------------------
# the grading group L = Z x + Z y / (a x - b y)


@dataclass(frozen=True, order=True)
class LDegree:
    free: int
    tors: int
    mod: int

    def __add__(self, other: LDegree) -> LDegree:
        return LDegree(self.free + other.free, (self.tors + other.tors) % self.mod, self.mod)

    def __neg__(self) -> LDegree:
        return LDegree(-self.free, (-self.tors) % self.mod, self.mod)

    def __sub__(self, other: LDegree) -> LDegree:
        return self + (-other)

    def __mul__(self, k: int) -> LDegree:
        return LDegree(self.free * k, (self.tors * k) % self.mod, self.mod)

    __rmul__ = __mul__

    def to_json(self) -> list[int]:
        return [self.free, self.tors]

    def __repr__(self) -> str:
        if self.mod == 1:
            return f"L({self.free})"
        return f"L({self.free};{self.tors} mod {self.mod})"


def _bezout(a: int, b: int) -> tuple[int, int]:
    # s*a + t*b = gcd(a, b)
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_s, old_t


class GradingGroup:
    """L generated by x, y modulo a*x = b*y; canonical form Z + Z/gcd(a,b)."""

    def __init__(self, a: int, b: int) -> None:
        if a <= 0 or b <= 0:
            raise ValueError("relation coefficients must be positive")
        self.a = a
        self.b = b
        self.g = math.gcd(a, b)
        self.wx = b // self.g
        self.wy = a // self.g
        s, t = _bezout(a // self.g, b // self.g)
        self._s, self._t = s, t
        self.x = self.canon(1, 0)
        self.y = self.canon(0, 1)
        self.zero = self.canon(0, 0)

    def canon(self, u: int, v: int) -> LDegree:
        return LDegree(u * self.wx + v * self.wy, (self._s * u - self._t * v) % self.g, self.g)

    def canonicalize(self, d: LDegree | tuple[int, int]) -> LDegree:
        if isinstance(d, LDegree):
            return LDegree(d.free, d.tors % self.g, self.g)
        return self.canon(*d)

    def monomial_degree(self, m: Monomial) -> LDegree:
        return self.canon(m[0], m[1])

    def torsion_order(self) -> int:
        return self.g

    def monomials_of_degree(self, l: LDegree) -> list[Monomial]:
        return list(_monomials(self.wx, self.wy, self._s, self._t, self.g, l.free, l.tors))

    def presentation(self) -> dict[str, int]:
        return {"a": self.a, "b": self.b, "torsion": self.g}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GradingGroup) and (self.a, self.b) == (other.a, other.b)

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __repr__(self) -> str:
        return f"GradingGroup({self.a}x = {self.b}y)"


@lru_cache(maxsize=200000)
def _monomials(wx: int, wy: int, s: int, t: int, g: int, free: int, tors: int) -> tuple[Monomial, ...]:
    if free < 0:
        return ()
    out = []
    for u in range(free // wx + 1):
        rest = free - u * wx
        if rest % wy:
            continue
        v = rest // wy
        if (s * u - t * v) % g == tors:
            out.append((u, v))
    return tuple(out)


def monomials_of_degree(L: GradingGroup, l: LDegree) -> list[Monomial]:
    return L.monomials_of_degree(l)


# ---------------------------------------------------------------------------
# polynomials


class GradedPolynomial:
    """Sparse polynomial in x, y with cyclotomic coefficients."""

    __slots__ = ("terms", "field", "_deg")

    def __init__(self, field: CycField, terms: Mapping[Monomial, CycScalar] | None = None) -> None:
        self.field = field
        self.terms: dict[Monomial, CycScalar] = {}
        if terms:
            for m, c in terms.items():
                c = field(c)
                if c:
                    self.terms[m] = c
        self._deg: object = None

    @classmethod
    def monomial(cls, field: CycField, a: int, b: int, coeff: int | Fraction | CycScalar = 1) -> GradedPolynomial:
        return cls(field, {(a, b): field(coeff)})

    def copy(self) -> GradedPolynomial:
        return GradedPolynomial(self.field, self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: GradedPolynomial) -> GradedPolynomial:
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return GradedPolynomial(self.field, out)

    def __neg__(self) -> GradedPolynomial:
        return GradedPolynomial(self.field, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: GradedPolynomial) -> GradedPolynomial:
        return self + (-other)

    def __mul__(self, other: GradedPolynomial | CycScalar | int | Fraction) -> GradedPolynomial:
        if not isinstance(other, GradedPolynomial):
            s = self.field(other)
            return GradedPolynomial(self.field, {m: c * s for m, c in self.terms.items()})
        out: dict[Monomial, CycScalar] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                m = (a1 + a2, b1 + b2)
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return GradedPolynomial(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> GradedPolynomial:
        acc = GradedPolynomial.monomial(self.field, 0, 0)
        for _ in range(k):
            acc = acc * self
        return acc

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GradedPolynomial):
            return self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms.items(), key=lambda t: t[0])))

    def degree(self, L: GradingGroup) -> LDegree | None:
        """Common L-degree of the terms, or None if zero or inhomogeneous."""
        degs = {L.monomial_degree(m) for m in self.terms}
        if len(degs) != 1:
            return None
        return degs.pop()

    def is_homogeneous(self, L: GradingGroup) -> bool:
        return not self.terms or self.degree(L) is not None

    def divide_monomial(self, m: Monomial) -> GradedPolynomial:
        out = {}
        for (a, b), c in self.terms.items():
            if a < m[0] or b < m[1]:
                raise ValueError("not divisible")
            out[(a - m[0], b - m[1])] = c
        return GradedPolynomial(self.field, out)

    def sorted_terms(self) -> list[tuple[Monomial, CycScalar]]:
        return sorted(self.terms.items())

    def to_json(self) -> list[list[object]]:
        return [[list(m), c.to_json()] for m, c in self.sorted_terms()]

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in self.sorted_terms():
            mono = "*".join(
                s for s in ((f"x^{a}" if a > 1 else "x" if a == 1 else ""), (f"y^{b}" if b > 1 else "y" if b == 1 else "")) if s
            )
            coeff = repr(c) if not c.is_rational() else str(c.to_fraction())
            parts.append(f"{coeff}*{mono}" if mono else coeff)
        return " + ".join(parts)


def poly_product(polys: Iterable[GradedPolynomial], field: CycField) -> GradedPolynomial:
    acc = GradedPolynomial.monomial(field, 0, 0)
    for p in polys:
        acc = acc * p
    return acc


# ---------------------------------------------------------------------------
# sparse exact linear algebra

Vector = dict  # index -> CycScalar, zero entries never stored


def vec_axpy(target: Vector, coeff: CycScalar, src: Vector) -> None:
    """target += coeff * src, in place."""
    for k, v in src.items():
        cur = target.get(k)
        nv = coeff * v if cur is None else cur + coeff * v
        if nv:
            target[k] = nv
        else:
            del target[k]


class Echelon:
    """Incrementally built row-echelon basis of a span of sparse vectors.

    Pivot rows are normalised to have leading coefficient one at their
    smallest index.  When ``track`` is set, every pivot row also records the
    combination of inserted vectors it came from, so membership queries can
    return an explicit preimage.
    """

    def __init__(self, track: bool = False) -> None:
        self.rows: dict[int, Vector] = {}
        self.combos: dict[int, Vector] = {}
        self.track = track
        self._count = 0

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Vector, combo: Vector | None = None) -> tuple[Vector, Vector | None]:
        r = dict(vec)
        rows = self.rows
        heap = [k for k in r if k in rows]
        heapq.heapify(heap)
        queued = set(heap)
        while heap:
            k = heapq.heappop(heap)
            c = r.get(k)
            if c is None:
                continue
            c = -c
            for kk, v in rows[k].items():
                cur = r.get(kk)
                nv = c * v if cur is None else cur + c * v
                if nv:
                    r[kk] = nv
                    if kk in rows and kk not in queued:
                        queued.add(kk)
                        heapq.heappush(heap, kk)
                else:
                    del r[kk]
            if combo is not None:
                vec_axpy(combo, c, self.combos[k])
        return r, combo

    def add(self, vec: Vector) -> bool:
        """Insert a vector; returns True if it enlarged the span."""
        if not vec:
            self._count += 1
            return False
        idx = self._count
        self._count += 1
        combo = {idx: vec_one(vec)} if self.track else None
        r, combo = self.reduce(vec, combo)
        if not r:
            return False
        lead = min(r)
        inv = r[lead].inverse()
        r = {k: v * inv for k, v in r.items()}
        self.rows[lead] = r
        if self.track:
            self.combos[lead] = {k: v * inv for k, v in combo.items()}
        return True

    def insert(self, vec: Vector, label: int, one: CycScalar) -> Vector | None:
        """Insert ``vec`` tagged by ``label``.

        Returns None if the span grew, else a dependency: coefficients on
        labels whose combination vanishes, with coefficient ``one`` on
        ``label``.  Combos are tracked by label rather than insertion count.
        """
        r, combo = self.reduce(vec, {label: one})
        if not r:
            return combo
        lead = min(r)
        inv = r[lead].inverse()
        self.rows[lead] = {k: v * inv for k, v in r.items()}
        self.combos[lead] = {k: v * inv for k, v in combo.items()}
        return None

    def contains(self, vec: Vector) -> bool:
        r, _ = self.reduce(vec)
        return not r

    def solve(self, vec: Vector) -> Vector | None:
        """Coefficients c with sum c_i * inserted_i = vec, or None."""
        if not self.track:
            raise ValueError("echelon built without tracking")
        if not vec:
            return {}
        r, combo = self.reduce(vec, {})
        if r:
            return None
        return {k: -v for k, v in combo.items()} if combo else {}

    def pivots(self) -> list[int]:
        return sorted(self.rows)


def vec_one(vec: Vector) -> CycScalar:
    for v in vec.values():
        return CycScalar.from_rational(v.n, 1)
    raise ValueError("cannot infer field of an empty vector")


def rank_of(vectors: Iterable[Vector]) -> int:
    e = Echelon()
    for v in vectors:
        if v:
            e.add(v)
    return e.rank


# ---------------------------------------------------------------------------
# graded modules


@dataclass(frozen=True)
class GradedModulePresentation:
    """Quotient of a graded free S-module by homogeneous relations.

    ``twists`` are the a in S(a); the generator of S(a) sits in degree -a.
    Each relation is a tuple of polynomials, one per generator.
    """

    group: GradingGroup
    field: CycField
    twists: tuple[LDegree, ...]
    relations: tuple[tuple[GradedPolynomial, ...], ...]

    def relation_degree(self, rel: tuple[GradedPolynomial, ...]) -> LDegree:
        degs = set()
        for g, p in enumerate(rel):
            for m in p.terms:
                degs.add(self.group.monomial_degree(m) - self.twists[g])
        if len(degs) != 1:
            raise ValueError("inhomogeneous relation")
        return degs.pop()

    def check_homogeneous(self) -> bool:
        try:
            for rel in self.relations:
                self.relation_degree(rel)
        except ValueError:
            return False
        return True


@dataclass
class GradedPiece:
    degree: LDegree
    basis: list[tuple[int, Monomial]]  # standard (generator, monomial) pairs
    ambient: list[tuple[int, Monomial]]
    relation_rank: int

    @property
    def dim(self) -> int:
        return len(self.basis)


def graded_piece_basis(M: GradedModulePresentation, l: LDegree) -> GradedPiece:
    """Standard-monomial basis of M_l by row reduction of the relation span."""
    L = M.group
    ambient: list[tuple[int, Monomial]] = []
    for g, a in enumerate(M.twists):
        for m in L.monomials_of_degree(l + a):
            ambient.append((g, m))
    index = {gm: i for i, gm in enumerate(ambient)}
    ech = Echelon()
    for rel in M.relations:
        e = M.relation_degree(rel)
        for mult in L.monomials_of_degree(l - e):
            vec: Vector = {}
            for g, p in enumerate(rel):
                for (a, b), c in p.terms.items():
                    key = (g, (a + mult[0], b + mult[1]))
                    i = index[key]
                    cur = vec.get(i)
                    nv = c if cur is None else cur + c
                    if nv:
                        vec[i] = nv
                    else:
                        vec.pop(i, None)
            if vec:
                ech.add(vec)
    piv = set(ech.pivots())
    basis = [gm for i, gm in enumerate(ambient) if i not in piv]
    return GradedPiece(l, basis, ambient, ech.rank)
