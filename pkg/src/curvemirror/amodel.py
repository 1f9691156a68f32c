"""Combinatorial A-model for the transposed curve singularities.

The Morsification -εxy pulled back to the crepant resolution of C²/μ_ℓ has
critical points of a few kinds; each gives a vanishing cycle in the smooth
fibre. Everything here is bookkeeping with exact rationals: angles are stored
as multiples of 2π, intersection numbers come from counting how often the
argument difference of two cycles crosses a multiple of 2π.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING

from .matfac import ObjectId, _k0_data, basic_object_ids, setting
from .mirror_core import BadIndex, d_max, family_object_count

if TYPE_CHECKING:
    from .homcat import HomEngine

KINDS = ("V0", "Vmuw", "Vlamw", "Vlammu")
_SYMBOL = {"V0": "V0", "Vmuw": "Vμw", "Vlamw": "Vλw", "Vlammu": "Vλμ"}


class UnsupportedCase(ValueError):
    """Raised for parameters whose A-model is obtained by reduction to another family."""

    def __init__(self, message: str, reduction: tuple[str, int, int, int] | None = None) -> None:
        super().__init__(message)
        self.reduction = reduction


class InconsistentInvariants(AssertionError):
    pass


def _check(family: str, p: int, q: int, ell: int) -> None:
    if family not in ("loop", "chain", "bp"):
        raise ValueError(f"unknown family {family!r}")
    if ell < 1 or d_max(family, p, q) % ell:
        raise BadIndex(f"index {ell} does not divide {d_max(family, p, q)}")


def reduction_target(family: str, p: int, q: int, ell: int) -> tuple[str, int, int, int] | None:
    """Family whose A-model computes this one, when the generic recipe does not apply.

    For the chain x²y + y^q with ℓ = 2 the pulled-back Morsification is singular
    on a single chart, where it is the maximally graded loop with exponents
    (2, (q-1)/2 + 1).
    """
    if family == "chain" and p == 2 and ell == 2:
        return ("loop", 2, (q - 1) // 2 + 1, 1)
    return None


def _require_generic(family: str, p: int, q: int, ell: int) -> None:
    _check(family, p, q, ell)
    target = reduction_target(family, p, q, ell)
    if target is not None:
        f, a, b, l = target
        raise UnsupportedCase(f"{family}({p},{q};{ell}) reduces to {f}({a},{b};{l})", target)


# ---------------------------------------------------------------------------
# critical points


@dataclass(frozen=True)
class CriticalPoint:
    kind: str  # "i" | "ii" | "iii" | "iv"
    chart: int
    coordinates: tuple[str, str]  # (λ, μ) in the chart
    value: str
    index: tuple[int, ...] = ()
    phase: Fraction | None = None  # argument of the critical value over c_crit, in units of 2π

    def to_json(self) -> dict[str, object]:
        out: dict[str, object] = {
            "kind": self.kind,
            "chart": self.chart,
            "coordinates": list(self.coordinates),
            "value": self.value,
            "index": list(self.index),
        }
        if self.phase is not None:
            out["phase"] = str(self.phase)
        return out


@dataclass
class CriticalInventory:
    family: str
    p: int
    q: int
    ell: int
    points: list[CriticalPoint]
    counts: dict[str, int]
    flagged: list[str] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def _root(k: int | Fraction, n: int) -> str:
    k = Fraction(k) % n if n else Fraction(0)
    return "1" if k == 0 else f"e^(2πi·{k}/{n})"


def critical_inventory(family: str, p: int, q: int, ell: int) -> CriticalInventory:
    _require_generic(family, p, q, ell)
    P, Q = setting(family, p, q, ell).P, setting(family, p, q, ell).Q
    pts: list[CriticalPoint] = []
    flagged: list[str] = []
    if family == "loop":
        for k in range(P):
            pts.append(CriticalPoint("i", 1, (f"{_root(k, P)}·ε^(1/{P})", "0"), "0", (k,)))
        for k in range(Q):
            pts.append(CriticalPoint("ii", ell, ("0", f"{_root(k, Q)}·ε^(1/{Q})"), "0", (k,)))
        for i in range(1, ell + 1):
            pts.append(CriticalPoint("iii", i, ("0", "0"), "0", (i,)))
        for m, n in _v0_indices(family, p, q, ell):
            lam = f"{_root(m * ell, p - 1)}·λ⁺"
            mu = f"{_root(Fraction(m * (1 - ell), p - 1) + Fraction(n, q - 1), 1)}·μ⁺"
            t = theta(family, p, q, ell, m, n)
            pts.append(CriticalPoint("iv", 1, (lam, mu), f"{_root(t, 1)}·c_crit", (m, n), t))
        c_crit = "-ε·μ⁺·λ⁺/(pq-1)"
    elif family == "chain":
        for k in range(Q):
            pts.append(CriticalPoint("i", ell, ("0", f"{_root(k, Q)}·ε^(1/{Q})"), "0", (k,)))
        for i in range(1, ell + 1):
            pts.append(CriticalPoint("ii", i, ("0", "0"), "0", (i,)))
        for m, n in _v0_indices(family, p, q, ell):
            lam_phase = Fraction(m, p - 1) + Fraction(n * (1 - ell), q - 1) + Fraction(n, (p - 1) * (q - 1))
            lam = f"{_root(lam_phase, 1)}·λ⁺"
            mu = f"{_root(n * ell, q - 1)}·μ⁺"
            t = theta(family, p, q, ell, m, n)
            pts.append(CriticalPoint("iii", ell, (lam, mu), f"{_root(t, 1)}·c_crit", (m, n), t))
        c_crit = "-ε·μ⁺·λ⁺·(p-1)(q-1)/(pq)"
    else:
        charts = list(range(1, ell + 1))
        if q == ell and p > q:
            charts = charts[:-1]
            flagged.append("p > q = ℓ: one origin replaced by a point at infinity of the last chart")
        elif q == ell and p == q:
            charts = charts[1:-1]
            flagged.append("p = q = ℓ: two origins replaced by points at infinity of the end charts")
        for i in charts:
            pts.append(CriticalPoint("i", i, ("0", "0"), "0", (i,)))
        if q == ell:
            pts.append(CriticalPoint("ii" if p > q else "iii", ell, ("1/ε", "0"), "0", (ell,)))
            if p == q:
                pts.append(CriticalPoint("iii", 1, ("0", "1/ε"), "0", (1,)))
        D = max(p * q - p - q, 1)
        for m, n in _v0_indices(family, p, q, ell):
            if ell == 1 and (m, n) == (p - 2, q - 2):
                continue  # without a resolution the origin is this orbit's last point
            lam = f"{_root(Fraction(ell * (n + m * (q - 1)), D), 1)}·λ⁺"
            mu_phase = Fraction(ell * (n * (P - 1) + m - m * (ell - 1) * Q), D)
            mu = f"{_root(mu_phase, 1)}·μ⁺"
            t = theta(family, p, q, ell, m, n)
            pts.append(CriticalPoint("iv", 1, (lam, mu), f"{_root(t, 1)}·c_crit", (m, n), t))
        c_crit = "-ε·μ⁺·λ⁺·((p-1)(q-1)-1)/(pq)"
    counts: dict[str, int] = {}
    for pt in pts:
        counts[pt.kind] = counts.get(pt.kind, 0) + 1
    inv = CriticalInventory(family, p, q, ell, pts, counts, flagged)
    inv.flagged.insert(0, f"c_crit = {c_crit}")
    return inv


# ---------------------------------------------------------------------------
# vanishing cycles


@dataclass(frozen=True, order=True)
class VanishingCycleId:
    kind: str
    index: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.kind}({','.join(map(str, self.index))})"

    def pretty(self) -> str:
        return f"{_SYMBOL[self.kind]}({','.join(map(str, self.index))})"

    @classmethod
    def parse(cls, text: str) -> VanishingCycleId:
        kind, rest = text.strip().split("(")
        return cls(kind, tuple(int(v) for v in rest.rstrip(")").split(",") if v))


def _v0_indices(family: str, p: int, q: int, ell: int) -> list[tuple[int, int]]:
    S = setting(family, p, q, ell)
    if family == "loop":
        return [(m, n) for m in range(S.P) for n in range(q - 1)]
    if family == "chain":
        return [(m, n) for m in range(p - 1) for n in range(S.Q)]
    out = [(m, n) for m in range(S.P - 1) for n in range(q - 1)]
    return out + [(S.P - 1, n) for n in range(q - 1 - S.Q)]


def cycle_ids(family: str, p: int, q: int, ell: int) -> list[VanishingCycleId]:
    _require_generic(family, p, q, ell)
    S = setting(family, p, q, ell)
    out = [VanishingCycleId("V0", mn) for mn in _v0_indices(family, p, q, ell)]
    if family == "loop":
        out += [VanishingCycleId("Vmuw", (m,)) for m in range(S.P)]
    if family in ("loop", "chain"):
        out += [VanishingCycleId("Vlamw", (n,)) for n in range(S.Q)]
    if not (family == "bp" and ell == 1):
        out += [VanishingCycleId("Vlammu", (r,)) for r in range(1, ell + 1)]
    return out


def theta(family: str, p: int, q: int, ell: int, m: int, n: int) -> Fraction:
    """Angle of the circular arc of the vanishing path of V0(m, n), in units of 2π."""
    if family == "loop":
        return Fraction(m, p - 1) + Fraction(n, q - 1)
    if family == "chain":
        return Fraction(m, p - 1) + Fraction(p * n, (p - 1) * (q - 1))
    if p * q == p + q:  # x² + y²: a single cycle
        return Fraction(0)
    return Fraction(n * p + m * q, ell * (p * q - p - q))


def distinguished_order(family: str, p: int, q: int, ell: int) -> list[VanishingCycleId]:
    """V0 cycles by decreasing θ (ties: m ascending), then the boundary cycles."""
    cycles = cycle_ids(family, p, q, ell)
    v0 = [v for v in cycles if v.kind == "V0"]
    v0.sort(key=lambda v: (-theta(family, p, q, ell, *v.index), v.index))
    rest = [v for v in cycles if v.kind != "V0"]
    rest.sort(key=lambda v: (KINDS.index(v.kind), v.index))
    return v0 + rest


@dataclass(frozen=True)
class WindingData:
    entry: Fraction
    exit: Fraction

    @property
    def winding(self) -> Fraction:
        return self.exit - self.entry


def winding_data(family: str, p: int, q: int, ell: int, V: VanishingCycleId) -> WindingData:
    """Arguments (units of 2π) at which V0(m, n) enters and leaves the middle cylinder."""
    if V.kind != "V0":
        raise ValueError(f"{V} does not cross the middle cylinder")
    m, n = V.index
    if family == "loop":
        return WindingData(Fraction(-ell * n, q - 1), Fraction(ell * m, p - 1))
    if family == "chain":
        return WindingData(Fraction(-ell * m, p - 1), Fraction(ell * n, q - 1))
    D = p * q - p - q
    if D == 0:
        return WindingData(Fraction(0), Fraction(0))
    return WindingData(Fraction(-ell * (n * (p - 1) + m), D), Fraction(ell * (m * (q - 1) + n), D))


def _integers_strictly_between(a: Fraction, b: Fraction) -> int:
    lo, hi = min(a, b), max(a, b)
    return max(0, math.ceil(hi) - math.floor(lo) - 1)


def is_degenerate(family: str, p: int, q: int, ell: int, V: VanishingCycleId, W: VanishingCycleId) -> bool:
    """True when two V0 cycles overlap along segments before isotopy."""
    if V.kind != "V0" or W.kind != "V0" or V == W:
        return False
    a, b = winding_data(family, p, q, ell, V), winding_data(family, p, q, ell, W)
    return (a.entry - b.entry).denominator == 1 or (a.exit - b.exit).denominator == 1


def span_formula(family: str, p: int, q: int, ell: int, source: tuple[int, int], target: tuple[int, int]) -> list[tuple[int, int]]:
    """Monomials spanning Hom⁰(K0(i,j), K0(I,J)) by the module description R/I_{I,J}.

    The degree (I-i)x⃗ + (J-j)y⃗ is met by the monomials on one line of slope
    -Q/P through (I-i, J-j); keep those with non-negative exponents that are
    not killed by the staircase ideal of the target.
    """
    S = setting(family, p, q, ell)
    (i, j), (I, J) = source, target
    _, gens, _ = _k0_data(S, I, J)
    a0, b0 = I - i, J - j
    out = []
    for t in range(-(a0 // S.P), b0 // S.Q + 1):
        a, b = a0 + t * S.P, b0 - t * S.Q
        if any(a >= ga and b >= gb for ga, gb in gens):
            continue
        out.append((a, b))
    return sorted(out)


def intersection_count(family: str, p: int, q: int, ell: int, V: VanishingCycleId, W: VanishingCycleId) -> int:
    """Number of transverse intersections of two distinct vanishing cycles (symmetric).

    Degenerate V0 pairs are resolved by the span-formula count of the matched
    pair; `is_degenerate` reports which pairs those are.
    """
    _require_generic(family, p, q, ell)
    if V == W:
        raise ValueError("self-intersection is not defined for a single cycle")
    if V.kind == "V0" and W.kind == "V0":
        if is_degenerate(family, p, q, ell, V, W):
            a = object_match(family, p, q, ell, V).index
            b = object_match(family, p, q, ell, W).index
            return len(span_formula(family, p, q, ell, a, b)) + len(span_formula(family, p, q, ell, b, a))
        x, y = winding_data(family, p, q, ell, V), winding_data(family, p, q, ell, W)
        return _integers_strictly_between(x.entry - y.entry, x.exit - y.exit)
    if V.kind != "V0" and W.kind != "V0":
        return 0
    if W.kind == "V0":
        V, W = W, V
    m, n = V.index
    if W.kind == "Vlammu":
        return 1
    if W.kind == "Vmuw":
        return int(W.index[0] == m)
    Q = setting(family, p, q, ell).Q
    return int(W.index[0] == n % Q)


def object_match(family: str, p: int, q: int, ell: int, V: VanishingCycleId) -> ObjectId:
    if V.kind == "V0":
        m, n = V.index
        return ObjectId("K0", (p - 1 - m, q - 1 - n))
    if V.kind == "Vmuw":
        return ObjectId("Kx", (p - 1 - V.index[0],), 3)
    if V.kind == "Vlamw":
        return ObjectId("Ky", (q - 1 - V.index[0],), 3)
    if V.kind == "Vlammu":
        return ObjectId("Kw", V.index, 3)
    raise ValueError(f"unknown cycle kind {V.kind!r}")


# ---------------------------------------------------------------------------
# topology of the fibre


@dataclass(frozen=True)
class SurfaceInvariants:
    genus: int
    punctures: int
    rankH1: int

    @property
    def euler(self) -> int:
        return 2 - 2 * self.genus - self.punctures

    def to_json(self) -> dict[str, int]:
        return {"genus": self.genus, "punctures": self.punctures, "rankH1": self.rankH1, "euler": self.euler}


def _exact_div(num: int, den: int, what: str) -> int:
    if num % den:
        raise InconsistentInvariants(f"{what} = {num}/{den} is not an integer")
    return num // den


def surface_invariants(family: str, p: int, q: int, ell: int) -> SurfaceInvariants:
    """Genus, punctures and first Betti number of the smooth fibre.

    The rank of H1 is the number of vanishing cycles minus the ℓ - 1
    exceptional curves of the resolution (the total space retracts onto them).
    """
    _check(family, p, q, ell)
    g2 = 2 * ell
    if family == "loop":
        genus = _exact_div(p * q - 1 - math.gcd(ell * (p - 1), p + q - 2), g2, "genus")
        punctures = 2 + math.gcd(p - 1, _exact_div(p + q - 2, ell, "(p+q-2)/ℓ"))
    elif family == "chain":
        genus = _exact_div(p * q - p + ell - math.gcd(ell * q, p + q - 1), g2, "genus")
        punctures = 1 + math.gcd(q, _exact_div(p + q - 1, ell, "(p+q-1)/ℓ"))
    else:
        genus = _exact_div(2 * ell - 1 + (p - 1) * (q - 1) - math.gcd(ell * q, p + q), g2, "genus")
        punctures = math.gcd(p, _exact_div(p + q, ell, "(p+q)/ℓ"))
    rank = family_object_count(family, p, q, ell) - ell + 1
    inv = SurfaceInvariants(genus, punctures, rank)
    if inv.euler != 1 - rank:
        raise InconsistentInvariants(
            f"{family}({p},{q};{ell}): 2-2g-b = {inv.euler} but 1 - rank H1 = {1 - rank}"
        )
    return inv


# ---------------------------------------------------------------------------
# A = B


@dataclass
class PairResult:
    a: VanishingCycleId
    b: VanishingCycleId
    count_A: int
    dim_B: int
    degenerate: bool

    @property
    def match(self) -> bool:
        return self.count_A == self.dim_B

    def to_json(self) -> dict[str, object]:
        return {
            "a": str(self.a),
            "b": str(self.b),
            "count_A": self.count_A,
            "dim_B": self.dim_B,
            "match": self.match,
            "degenerate_flag": self.degenerate,
        }


@dataclass
class ABReport:
    family: str
    p: int
    q: int
    ell: int
    cycles: list[VanishingCycleId]
    objects: list[ObjectId]
    pairs: list[PairResult]
    invariants: SurfaceInvariants
    reduction: tuple[str, int, int, int] | None = None
    reduction_ok: bool | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.match for r in self.pairs) and self.reduction_ok is not False

    @property
    def mismatches(self) -> list[PairResult]:
        return [r for r in self.pairs if not r.match]

    def to_json(self) -> dict[str, object]:
        out: dict[str, object] = {
            "family": self.family,
            "p": self.p,
            "q": self.q,
            "ell": self.ell,
            "cycles": [
                {"id": str(v), "object": str(o)} for v, o in zip(self.cycles, self.objects)
            ],
            "pairs": [r.to_json() for r in self.pairs],
            "invariants": self.invariants.to_json(),
            "ok": self.ok,
        }
        if self.reduction is not None:
            f, a, b, l = self.reduction
            out["reduction"] = {"family": f, "p": a, "q": b, "ell": l, "ok": self.reduction_ok}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def a_matrix(family: str, p: int, q: int, ell: int) -> tuple[list[VanishingCycleId], list[list[int]], list[list[bool]]]:
    """Directed intersection matrix: identity on the diagonal, counts forwards, zero backwards."""
    order = distinguished_order(family, p, q, ell)
    n = len(order)
    M = [[0] * n for _ in range(n)]
    deg = [[False] * n for _ in range(n)]
    for s in range(n):
        M[s][s] = 1
        for t in range(s + 1, n):
            M[s][t] = intersection_count(family, p, q, ell, order[s], order[t])
            deg[s][t] = deg[t][s] = is_degenerate(family, p, q, ell, order[s], order[t])
    return order, M, deg


def b_matrix(engine: HomEngine, objects: list[ObjectId]) -> list[list[int]]:
    return [[engine.hom_ids(a, b, 0) for b in objects] for a in objects]


def compare_ab(family: str, p: int, q: int, ell: int, engine: HomEngine | None = None) -> ABReport:
    """Intersection counts against B-side Hom⁰ dimensions for every ordered pair."""
    from .homcat import HomEngine

    _check(family, p, q, ell)
    target = reduction_target(family, p, q, ell)
    if target is not None:
        return _compare_reduced(family, p, q, ell, target, engine)
    if engine is None:
        engine = HomEngine(family, p, q, ell, cross_check=False)
    order, M, deg = a_matrix(family, p, q, ell)
    objs = [object_match(family, p, q, ell, v) for v in order]
    B = b_matrix(engine, objs)
    pairs = [
        PairResult(order[s], order[t], M[s][t], B[s][t], deg[s][t])
        for s in range(len(order))
        for t in range(len(order))
    ]
    return ABReport(family, p, q, ell, order, objs, pairs, surface_invariants(family, p, q, ell))


def _compare_reduced(family: str, p: int, q: int, ell: int, target: tuple[str, int, int, int], engine: HomEngine | None) -> ABReport:
    """Run the target family's comparison and match its matrix to ours up to relabelling."""
    from .homcat import HomEngine

    inner = compare_ab(*target)
    if engine is None:
        engine = HomEngine(family, p, q, ell, cross_check=False)
    objs = basic_object_ids(family, p, q, ell)
    B = b_matrix(engine, objs)
    n = len(inner.cycles)
    A = [[inner.pairs[s * n + t].count_A for t in range(n)] for s in range(n)]
    perm = matrix_isomorphism(A, B)
    report = ABReport(
        family, p, q, ell, inner.cycles, inner.objects, inner.pairs,
        surface_invariants(family, p, q, ell), target, perm is not None,
    )
    if perm is not None:
        report.notes.append(
            "object relabelling: " + ", ".join(f"{v}->{objs[perm[s]]}" for s, v in enumerate(inner.cycles))
        )
    return report


def matrix_isomorphism(A: list[list[int]], B: list[list[int]]) -> list[int] | None:
    """A permutation π with A[s][t] = B[π s][π t] for all s, t, or None."""
    n = len(A)
    if len(B) != n:
        return None

    def profile(M: list[list[int]], s: int) -> tuple:
        return (M[s][s], sorted(M[s]), sorted(r[s] for r in M))

    pa = [profile(A, s) for s in range(n)]
    pb = [profile(B, s) for s in range(n)]
    if sorted(pa) != sorted(pb):
        return None
    perm = [-1] * n
    used = [False] * n

    def extend(s: int) -> bool:
        if s == n:
            return True
        for t in range(n):
            if used[t] or pb[t] != pa[s]:
                continue
            if all(A[s][u] == B[t][perm[u]] and A[u][s] == B[perm[u]][t] for u in range(s)):
                perm[s], used[t] = t, True
                if extend(s + 1):
                    return True
                used[t] = False
        perm[s] = -1
        return False

    return perm if extend(0) else None


@lru_cache(maxsize=None)
def cycle_count(family: str, p: int, q: int, ell: int) -> int:
    target = reduction_target(family, p, q, ell)
    if target is not None:
        return cycle_count(*target)
    return len(cycle_ids(family, p, q, ell))
