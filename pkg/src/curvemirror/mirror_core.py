"""Invertible polynomials: atoms, transpose, weights, Milnor numbers,
symmetry data and the cardinality formulas attached to them."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .galg import CycField, CycScalar, Echelon, GradingGroup, LDegree


class NotInvertible(ValueError):
    pass


class OracleMismatch(AssertionError):
    pass


class BadIndex(ValueError):
    pass


FAMILIES = ("loop", "chain", "bp")


@dataclass(frozen=True)
class Atom:
    kind: str  # "fermat" | "loop" | "chain"
    exponents: tuple[int, ...]
    variables: tuple[int, ...]

    def __str__(self) -> str:
        names = ",".join(_var_name(v) for v in self.variables)
        return f"{self.kind.capitalize()}({','.join(map(str, self.exponents))}) on ({names})"


def _var_name(i: int) -> str:
    return "xyzuvw"[i] if i < 6 else f"x{i}"


@dataclass(frozen=True)
class InvertiblePolynomial:
    matrix: tuple[tuple[int, ...], ...]
    atoms: tuple[Atom, ...]

    @property
    def nvars(self) -> int:
        return len(self.matrix)

    def monomials(self) -> list[tuple[int, ...]]:
        return [tuple(row) for row in self.matrix]

    def __str__(self) -> str:
        terms = []
        for row in self.matrix:
            parts = []
            for i, e in enumerate(row):
                if e == 1:
                    parts.append(_var_name(i))
                elif e > 1:
                    parts.append(f"{_var_name(i)}^{e}")
            terms.append("*".join(parts))
        return " + ".join(terms)

    def family(self) -> tuple[str, int, int, tuple[int, int]]:
        """(family, p, q, variable order) for two-variable polynomials."""
        if self.nvars != 2:
            raise NotInvertible("the matrix factorisation pipeline is two-variable only")
        if len(self.atoms) == 2:
            a, b = self.atoms
            return ("bp", a.exponents[0], b.exponents[0], (a.variables[0], b.variables[0]))
        atom = self.atoms[0]
        p, q = atom.exponents
        return (atom.kind, p, q, atom.variables)


@dataclass(frozen=True)
class WeightSystem:
    d: tuple[int, ...]
    h: int
    d0: int


@dataclass(frozen=True)
class SymmetryData:
    family: str
    p: int
    q: int
    d_max: int
    ell: int
    L: GradingGroup
    c: LDegree
    alpha: LDegree
    quotient_order: int
    torsion_order: int

    def to_json(self) -> dict[str, object]:
        return {
            "d_max": self.d_max,
            "ell": self.ell,
            "relation": f"{self.L.a}x = {self.L.b}y",
            "torsion_order": self.torsion_order,
            "quotient_order": self.quotient_order,
            "c": self.c.to_json(),
            "alpha": self.alpha.to_json(),
        }


# ---------------------------------------------------------------------------
# construction and classification


def _check_matrix(matrix: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    rows = tuple(tuple(int(v) for v in row) for row in matrix)
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise NotInvertible("exponent matrix must be square and non-empty")
    if any(v < 0 for r in rows for v in r):
        raise NotInvertible("exponents must be non-negative")
    if any(not any(r) for r in rows):
        raise NotInvertible("a row of zeros is not a monomial of positive degree")
    if _det(rows) == 0:
        raise NotInvertible("exponent matrix is singular")
    return rows


def _det(rows: Sequence[Sequence[int]]) -> Fraction:
    m = [[Fraction(v) for v in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def classify(matrix: Sequence[Sequence[int]]) -> InvertiblePolynomial:
    """Split an exponent matrix into Fermat, loop and chain atoms.

    Each row must be x_i^{a} (a >= 2) or x_i^{a} x_j (a >= 2, j != i), with
    distinct main variables, and each variable may appear in at most two
    monomials.
    """
    rows = _check_matrix(matrix)
    n = len(rows)
    main: list[int] = []
    pointer: list[int | None] = []
    for r in rows:
        support = [i for i, v in enumerate(r) if v]
        if len(support) == 1:
            i = support[0]
            if r[i] < 2:
                raise NotInvertible("a Fermat monomial needs exponent at least 2")
            main.append(i)
            pointer.append(None)
        elif len(support) == 2:
            i, j = support
            if r[i] >= 2 and r[j] == 1:
                main.append(i)
                pointer.append(j)
            elif r[j] >= 2 and r[i] == 1:
                main.append(j)
                pointer.append(i)
            else:
                raise NotInvertible(f"row {r} is not of the form x^a*y with a >= 2")
        else:
            raise NotInvertible(f"row {r} has more than two variables")
    if sorted(main) != list(range(n)):
        raise NotInvertible("main variables must be distinct")
    count = [0] * n
    for r in rows:
        for i, v in enumerate(r):
            if v:
                count[i] += 1
    if any(c > 2 for c in count):
        raise NotInvertible("a variable appears in more than two monomials")

    row_of = {main[k]: k for k in range(n)}
    nxt = {main[k]: pointer[k] for k in range(n)}
    incoming = {v for v in nxt.values() if v is not None}
    seen: set[int] = set()
    atoms: list[Atom] = []
    # chains start at variables nobody points to
    for start in range(n):
        if start in incoming or start in seen:
            continue
        path = [start]
        while nxt[path[-1]] is not None:
            path.append(nxt[path[-1]])
        seen.update(path)
        exps = tuple(rows[row_of[v]][v] for v in path)
        if len(path) == 1:
            atoms.append(Atom("fermat", exps, tuple(path)))
        else:
            atoms.append(Atom("chain", exps, tuple(path)))
    for start in range(n):
        if start in seen:
            continue
        path = [start]
        while nxt[path[-1]] != start:
            path.append(nxt[path[-1]])
        seen.update(path)
        exps = tuple(rows[row_of[v]][v] for v in path)
        atoms.append(Atom("loop", exps, tuple(path)))
    atoms.sort(key=lambda a: min(a.variables))
    return InvertiblePolynomial(rows, tuple(atoms))


def loop(p: int, q: int) -> InvertiblePolynomial:
    """x^p y + y^q x."""
    return classify([[p, 1], [1, q]])


def chain(p: int, q: int) -> InvertiblePolynomial:
    """x^p y + y^q."""
    return classify([[p, 1], [0, q]])


def bp(p: int, q: int) -> InvertiblePolynomial:
    """x^p + y^q."""
    return classify([[p, 0], [0, q]])


def make(family: str, p: int, q: int) -> InvertiblePolynomial:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    return {"loop": loop, "chain": chain, "bp": bp}[family](p, q)


def transpose(poly: InvertiblePolynomial) -> InvertiblePolynomial:
    m = poly.matrix
    return classify([[m[j][i] for j in range(len(m))] for i in range(len(m))])


# ---------------------------------------------------------------------------
# weights and Milnor numbers


def weight_system(poly: InvertiblePolynomial) -> WeightSystem:
    n = poly.nvars
    aug = [[Fraction(v) for v in row] + [Fraction(1)] for row in poly.matrix]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c])
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    q = [aug[r][n] for r in range(n)]  # d_i / h
    if any(v <= 0 for v in q):
        raise NotInvertible("weights are not positive")
    den = math.lcm(*(v.denominator for v in q))
    d = [int(v * den) for v in q]
    h = den
    g = math.gcd(h, *d)
    d = tuple(v // g for v in d)
    h //= g
    for row in poly.matrix:
        assert sum(a * b for a, b in zip(row, d)) == h
    return WeightSystem(d, h, h - sum(d))


def milnor_closed_form(poly: InvertiblePolynomial) -> int:
    ws = weight_system(poly)
    val = Fraction(1)
    for di in ws.d:
        val *= Fraction(ws.h, di) - 1
    assert val.denominator == 1
    return int(val)


def _weighted_monomials(d: Sequence[int], k: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []

    def rec(i: int, rest: int, acc: list[int]) -> None:
        if i == len(d) - 1:
            if rest % d[i] == 0:
                out.append(tuple(acc + [rest // d[i]]))
            return
        for e in range(rest // d[i] + 1):
            rec(i + 1, rest - e * d[i], acc + [e])

    if k >= 0:
        rec(0, k, [])
    return sorted(out)


def jacobian_basis(poly: InvertiblePolynomial) -> list[tuple[int, ...]]:
    """Standard monomials of C[x]/(dw/dx_i), graded piece by graded piece."""
    ws = weight_system(poly)
    n = poly.nvars
    partials: list[dict[tuple[int, ...], int]] = []
    for i in range(n):
        terms: dict[tuple[int, ...], int] = {}
        for row in poly.matrix:
            if row[i]:
                m = list(row)
                m[i] -= 1
                terms[tuple(m)] = terms.get(tuple(m), 0) + row[i]
        partials.append(terms)
    socle = sum(ws.h - 2 * di for di in ws.d)
    basis: list[tuple[int, ...]] = []
    for k in range(socle + 1):
        monos = _weighted_monomials(ws.d, k)
        index = {m: j for j, m in enumerate(monos)}
        ech = Echelon()
        for i in range(n):
            for mult in _weighted_monomials(ws.d, k - (ws.h - ws.d[i])):
                vec = {}
                for m, c in partials[i].items():
                    key = tuple(a + b for a, b in zip(m, mult))
                    vec[index[key]] = CycScalar.from_rational(1, c)
                ech.add(vec)
        piv = set(ech.pivots())
        basis.extend(m for j, m in enumerate(monos) if j not in piv)
    # nothing survives above the socle degree of a finite Jacobian ring
    return basis


def milnor_number(poly: InvertiblePolynomial) -> int:
    closed = milnor_closed_form(poly)
    oracle = len(jacobian_basis(poly))
    if closed != oracle:
        raise OracleMismatch(f"closed form {closed} != Jacobian dimension {oracle}")
    return closed


# ---------------------------------------------------------------------------
# symmetry data


def d_max(family: str, p: int, q: int) -> int:
    if family == "loop":
        return math.gcd(p - 1, q - 1)
    if family == "chain":
        return math.gcd(p, q - 1)
    if family == "bp":
        return math.gcd(p, q)
    raise ValueError(family)


def admissible_indices(family: str, p: int, q: int) -> list[int]:
    d = d_max(family, p, q)
    return [l for l in range(1, d + 1) if d % l == 0]


def grading_group(family: str, p: int, q: int, ell: int) -> GradingGroup:
    if d_max(family, p, q) % ell:
        raise BadIndex(f"index {ell} does not divide {d_max(family, p, q)}")
    if family == "loop":
        return GradingGroup((p - 1) // ell, (q - 1) // ell)
    if family == "chain":
        return GradingGroup(p // ell, (q - 1) // ell)
    return GradingGroup(p // ell, q // ell)


def c_vector(family: str, p: int, q: int) -> tuple[int, int]:
    """Coordinates of the degree of w in the basis x, y."""
    return (p, 0) if family == "bp" else (p, 1)


def symmetry_data(poly: InvertiblePolynomial, ell: int) -> SymmetryData:
    family, p, q, (vx, vy) = poly.family()
    dm = d_max(family, p, q)
    if ell < 1 or dm % ell:
        raise BadIndex(f"index {ell} does not divide d_max = {dm}")
    L = grading_group(family, p, q, ell)
    cu, cv = c_vector(family, p, q)
    c = L.canon(cu, cv)
    for row in poly.matrix:
        assert L.canon(row[vx], row[vy]) == c
    alpha = L.canon(1 - cu, 1 - cv)
    qo = abs(L.a * cv + L.b * cu)
    ws = weight_system(poly)
    # the free coordinate of L is the primitive weight grading
    assert (L.wx, L.wy) == (ws.d[vx], ws.d[vy]) and c.free == ws.h
    assert alpha.free == -ws.d0
    assert L.g * ell == dm
    return SymmetryData(family, p, q, dm, ell, L, c, alpha, qo, L.g)


# ---------------------------------------------------------------------------
# cardinalities


def family_object_count(family: str, p: int, q: int, ell: int) -> int:
    if family == "loop":
        num = p * q - 1
    elif family == "chain":
        num = p * (q - 1)
    else:
        num = (p - 1) * (q - 1) - 1
    assert num % ell == 0
    return num // ell + ell


def tilting_length(poly: InvertiblePolynomial, ell: int) -> dict[str, int]:
    family, p, q, _ = poly.family()
    symmetry_data(poly, ell)
    mu = milnor_number(transpose(poly))
    assert (mu - 1) % ell == 0
    value = (mu - 1) // ell + ell
    count = family_object_count(family, p, q, ell)
    if value != count:
        raise OracleMismatch(f"tilting length {value} != object count {count}")
    return {"tilting_length": value, "object_count": count, "mu_transpose": mu}


def fjrw_dimension(poly_check: InvertiblePolynomial, ell: int) -> dict[str, object]:
    """State-space dimension for the diagonal action (xi, xi^-1) of mu_ell."""
    if poly_check.nvars != 2:
        raise NotInvertible("two-variable polynomials only")
    for row in poly_check.matrix:
        if (row[0] - row[1]) % ell:
            raise BadIndex(f"mu_{ell} does not preserve {poly_check}")
    basis = jacobian_basis(poly_check)
    invariant = [m for m in basis if (m[0] - m[1]) % ell == 0]
    sectors: list[dict[str, object]] = [
        {"element": 0, "kind": "broad", "dim": len(invariant), "basis": [list(m) for m in invariant]}
    ]
    for k in range(1, ell):
        sectors.append({"element": k, "kind": "narrow", "dim": 1})
    total = sum(int(s["dim"]) for s in sectors)
    return {"total": total, "sectors": sectors}
