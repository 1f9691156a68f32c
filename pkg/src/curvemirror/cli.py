"""Command-line front end.

    curvemirror analyze loop:5,3 --index 2 --json
    curvemirror verify chain:9,4 --index 3
    curvemirror compare bp:4,4 --index 2 --dot out.dot
    curvemirror export loop:3,3 --index 2 --format dot
    curvemirror grid --max 7

Exit codes: 0 pass, 1 failed check, 2 usage error, 3 invalid mathematical input.
"""

from __future__ import annotations

import argparse
import ast
import configparser
import json
import sys
import time
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import TextIO

from . import amodel, homcat, matfac, mirror_core, quiverlab

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BAD_INPUT = 0, 1, 2, 3
COMMANDS = ("analyze", "verify", "compare", "export", "grid")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str = "analyze"
    family: str = ""
    index: int = 1
    json: bool = False
    format: str = "json"
    window: int = 5
    max: int = 7
    dot: str = ""
    out: str = ""
    corrupt: str = ""
    jobs: int = 1

    def to_text(self) -> str:
        return "".join(f"{f.name} = {getattr(self, f.name)}\n" for f in fields(self))

    @classmethod
    def from_text(cls, text: str) -> RunConfig:
        parser = configparser.ConfigParser()
        parser.read_string("[run]\n" + text)
        return cls()._merged(dict(parser["run"]))

    def _merged(self, values: dict[str, object]) -> RunConfig:
        data = asdict(self)
        types = {f.name: f.type for f in fields(self)}
        for key, raw in values.items():
            key = key.replace("-", "_")
            if key not in data:
                raise UsageError(f"unknown config key {key!r}")
            if types[key] == "bool" and isinstance(raw, str):
                if raw.lower() not in ("true", "false", "1", "0", "yes", "no"):
                    raise UsageError(f"{key} expects a boolean, got {raw!r}")
                data[key] = raw.lower() in ("true", "1", "yes")
            elif types[key] == "int":
                try:
                    data[key] = int(raw)
                except ValueError:
                    raise UsageError(f"{key} expects an integer, got {raw!r}") from None
            else:
                data[key] = raw if raw is not None else ""
        return RunConfig(**data)


# ---------------------------------------------------------------------------
# input grammar


def parse_family(spec: str) -> mirror_core.InvertiblePolynomial:
    """`loop:p,q`, `chain:p,q`, `bp:p,q`, or an exponent matrix `[[..],[..]]`."""
    spec = spec.strip()
    if spec.startswith("["):
        try:
            matrix = ast.literal_eval(spec)
        except (ValueError, SyntaxError):
            raise UsageError(f"cannot parse matrix {spec!r}") from None
        if not (isinstance(matrix, list) and all(isinstance(r, list) and all(isinstance(e, int) for e in r) for r in matrix)):
            raise UsageError(f"matrix must be a list of integer lists: {spec!r}")
        return mirror_core.classify(matrix)
    try:
        name, rest = spec.split(":")
        p, q = (int(v) for v in rest.split(","))
    except ValueError:
        raise UsageError(f"expected family:p,q or a matrix, got {spec!r}") from None
    if name not in mirror_core.FAMILIES:
        raise UsageError(f"unknown family {name!r}")
    return mirror_core.make(name, p, q)


def _family_params(poly: mirror_core.InvertiblePolynomial, ell: int) -> tuple[str, int, int, int]:
    family, p, q, _ = poly.family()
    mirror_core.symmetry_data(poly, ell)
    return family, p, q, ell


# ---------------------------------------------------------------------------
# commands


def run_analyze(cfg: RunConfig) -> tuple[int, dict[str, object], str]:
    poly = parse_family(cfg.family)
    ws = mirror_core.weight_system(poly)
    report: dict[str, object] = {
        "polynomial": str(poly),
        "matrix": [list(r) for r in poly.matrix],
        "atoms": [str(a) for a in poly.atoms],
        "transpose": str(mirror_core.transpose(poly)),
        "weights": {"d": list(ws.d), "h": ws.h},
        "milnor_number": mirror_core.milnor_number(poly),
    }
    lines = [
        f"polynomial      {report['polynomial']}",
        f"transpose       {report['transpose']}",
        f"weights         d = {list(ws.d)}, h = {ws.h}",
        f"milnor number   {report['milnor_number']}",
    ]
    if poly.nvars == 2:
        sym = mirror_core.symmetry_data(poly, cfg.index)
        tl = mirror_core.tilting_length(poly, cfg.index)
        fj = mirror_core.fjrw_dimension(mirror_core.transpose(poly), cfg.index)
        report.update(
            {
                "index": cfg.index,
                "grading_group": sym.to_json(),
                "gorenstein_parameter": {"class": sym.alpha.to_json(), "free_part": sym.alpha.free},
                "tilting_length": tl["tilting_length"],
                "fjrw": fj,
            }
        )
        lines += [
            f"index           {cfg.index} (d_max = {sym.d_max})",
            f"grading group   L = <x, y | {sym.L.a}x = {sym.L.b}y>, c = {sym.c!r}",
            f"gorenstein      alpha = {sym.alpha!r} (free part {sym.alpha.free})",
            f"tilting length  {tl['tilting_length']}",
            "fjrw            total {} = {}".format(
                fj["total"], " + ".join(f"{s['dim']} ({s['kind']} {s['element']})" for s in fj["sectors"])
            ),
        ]
    return EXIT_OK, report, "\n".join(lines) + "\n"


def run_verify(cfg: RunConfig) -> tuple[int, dict[str, object], str]:
    family, p, q, ell = _family_params(parse_family(cfg.family), cfg.index)
    engine = homcat.HomEngine(family, p, q, ell, cross_check=False)
    window = range(-cfg.window, cfg.window + 1)
    checks: dict[str, bool] = {}
    failures: list[str] = []

    objects = [engine.obj(o) for o in engine.objects]
    if cfg.corrupt:
        if cfg.corrupt != "demo":
            raise UsageError(f"unknown corruption {cfg.corrupt!r} (only 'demo')")
        objects[0] = matfac.corrupt(objects[0])
    for K in objects:
        rep = matfac.verify_mf(K)
        if not rep.ok:
            failures.append(f"mf {K.name}: " + ", ".join(k for k, v in rep.checks.items() if not v))
    checks["matrix_factorisations"] = not failures
    if not checks["matrix_factorisations"]:
        return _finish_verify(family, p, q, ell, checks, failures)

    table = homcat.assemble_endomorphism_table(engine, window, with_arrows=False)
    n = len(table.objects)
    D = table.degree_zero()
    checks["exceptional"] = all(D[a][a] == 1 for a in range(n))
    checks["directed"] = all(D[b][a] == 0 for a in range(n) for b in range(a + 1, n) if D[a][b])
    checks["degree_zero"] = table.concentrated_in_degree_zero()
    if not checks["degree_zero"]:
        failures += [f"Hom^{k}({table.objects[a]}, {table.objects[b]}) = {d}" for (a, b, k), d in table.dims.items() if k]

    serre_ok = True
    for M in objects:
        for N in objects:
            rep = homcat.serre_check(engine, M, N, window)
            if not rep.ok:
                serre_ok = False
                failures.append(f"serre {rep.pair}: {rep.rows}")
    checks["serre"] = serre_ok

    Qv = quiverlab.expected_quiver(family, p, q, ell)
    comp = quiverlab.compare_with_homcat(Qv, table, engine)
    checks["quiver"] = comp.dims_match
    checks["relations"] = all(r["ok"] for r in comp.relations)
    failures += [f"quiver {m}" for m in comp.mismatches]
    failures += [f"relation {r}" for r in comp.relations if not r["ok"]]
    return _finish_verify(family, p, q, ell, checks, failures)


def _finish_verify(family: str, p: int, q: int, ell: int, checks: dict[str, bool], failures: list[str]) -> tuple[int, dict[str, object], str]:
    ok = all(checks.values())
    report = {"family": family, "p": p, "q": q, "ell": ell, "ok": ok, "checks": checks, "failures": failures}
    lines = [f"verify {family}({p},{q};{ell})"]
    lines += [f"  {'PASS' if v else 'FAIL'}  {k}" for k, v in checks.items()]
    lines += [f"  ! {f}" for f in failures]
    return (EXIT_OK if ok else EXIT_FAIL), report, "\n".join(lines) + "\n"


def incidence_dot(report: amodel.ABReport) -> str:
    name = f"{report.family}({report.p},{report.q};{report.ell})"
    lines = [f'digraph "{name}" {{', "  rankdir=LR;"]
    for v, o in zip(report.cycles, report.objects):
        lines.append(f'  "{v}" [label="{v.pretty()}\\n{o}"];')
    for r in report.pairs:
        if r.a != r.b and r.count_A:
            style = ", style=dashed" if r.degenerate else ""
            lines.append(f'  "{r.a}" -> "{r.b}" [label="{r.count_A}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def run_compare(cfg: RunConfig) -> tuple[int, dict[str, object], str]:
    family, p, q, ell = _family_params(parse_family(cfg.family), cfg.index)
    rep = amodel.compare_ab(family, p, q, ell)
    if cfg.dot:
        with open(cfg.dot, "w", encoding="utf-8") as fh:
            fh.write(incidence_dot(rep))
    n = len(rep.cycles)
    lines = [f"compare {family}({p},{q};{ell}): {n} vanishing cycles"]
    if rep.reduction is not None:
        f, a, b, l = rep.reduction
        lines.append(f"  A-model reduces to {f}({a},{b};{l}); B-side match up to relabelling: {rep.reduction_ok}")
    width = max(len(str(v)) for v in rep.cycles)
    lines.append(" " * (width + 2) + " ".join(f"{s:>5}" for s in range(n)))
    for s, v in enumerate(rep.cycles):
        cells = []
        for t in range(n):
            r = rep.pairs[s * n + t]
            cell = str(r.count_A) if r.match else f"{r.count_A}/{r.dim_B}"
            cells.append(f"{cell + ('*' if r.degenerate else ''):>5}")
        lines.append(f"{s:>2} {str(v):<{width}} " + " ".join(cells))
    inv = rep.invariants
    lines.append(f"  genus {inv.genus}, punctures {inv.punctures}, rank H1 {inv.rankH1}")
    degenerate = sum(r.degenerate for r in rep.pairs) // 2
    lines.append(f"  {'PASS' if rep.ok else 'FAIL'}: {len(rep.mismatches)} mismatches, {degenerate} degenerate pairs (*)")
    return (EXIT_OK if rep.ok else EXIT_FAIL), rep.to_json(), "\n".join(lines) + "\n"


def run_export(cfg: RunConfig) -> tuple[int, dict[str, object] | None, str]:
    family, p, q, ell = _family_params(parse_family(cfg.family), cfg.index)
    if cfg.format not in ("json", "dot"):
        raise UsageError(f"unknown export format {cfg.format!r}")
    Qv = quiverlab.expected_quiver(family, p, q, ell)
    return EXIT_OK, None, quiverlab.export(Qv, cfg.format)


def grid_cell(family: str, p: int, q: int, ell: int) -> dict[str, object]:
    """All checks for one grid point; pure so it can run in a worker process."""
    start = time.perf_counter()
    engine = homcat.HomEngine(family, p, q, ell, cross_check=False)
    mf_ok = all(matfac.verify_mf(engine.obj(o)).ok for o in engine.objects)
    table = homcat.assemble_endomorphism_table(engine, range(-3, 4), with_arrows=False)
    comp = quiverlab.compare_with_homcat(quiverlab.expected_quiver(family, p, q, ell), table, engine)
    ab = amodel.compare_ab(family, p, q, ell, engine)
    return {
        "family": family,
        "p": p,
        "q": q,
        "ell": ell,
        "objects": len(engine.objects),
        "mf": mf_ok,
        "quiver": comp.ok,
        "degree_zero": table.concentrated_in_degree_zero(),
        "a_equals_b": ab.ok,
        "ok": mf_ok and comp.ok and table.concentrated_in_degree_zero() and ab.ok,
        "seconds": round(time.perf_counter() - start, 3),
    }


def grid_points(max_pq: int) -> list[tuple[str, int, int, int]]:
    return [
        (fam, p, q, ell)
        for fam in mirror_core.FAMILIES
        for p in range(2, max_pq + 1)
        for q in range(2, max_pq + 1)
        for ell in mirror_core.admissible_indices(fam, p, q)
    ]


def run_grid(cfg: RunConfig) -> tuple[int, dict[str, object], str]:
    points = grid_points(cfg.max)
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            cells = list(pool.map(grid_cell, *zip(*points)))
    else:
        cells = [grid_cell(*pt) for pt in points]
    ok = all(c["ok"] for c in cells)
    lines = [
        f"{'PASS' if c['ok'] else 'FAIL'}  {c['family']}({c['p']},{c['q']};{c['ell']})  objects={c['objects']}"
        + ("" if c["ok"] else f"  mf={c['mf']} quiver={c['quiver']} deg0={c['degree_zero']} A=B={c['a_equals_b']}")
        for c in cells
    ]
    lines.append(f"{sum(c['ok'] for c in cells)}/{len(cells)} grid points pass")
    return (EXIT_OK if ok else EXIT_FAIL), {"max": cfg.max, "ok": ok, "cells": cells}, "\n".join(lines) + "\n"


RUNNERS = {
    "analyze": run_analyze,
    "verify": run_verify,
    "compare": run_compare,
    "export": run_export,
    "grid": run_grid,
}


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="curvemirror", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="flat key = value file supplying defaults for any flag")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        if name != "grid":
            sp.add_argument("family", help="loop:p,q | chain:p,q | bp:p,q | [[a,b],[c,d]]")
        sp.add_argument("--index", type=int, help="index ℓ of the grading group (default 1)")
        sp.add_argument("--json", action="store_true", default=None, help="emit JSON")
        sp.add_argument("--out", help="write the report to this file instead of stdout")
        if name in ("verify", "grid"):
            sp.add_argument("--window", type=int, help="cohomological degrees -N..N (default 5)")
        if name == "verify":
            sp.add_argument("--corrupt", help="'demo' injects a fault into the first object")
        if name == "compare":
            sp.add_argument("--dot", help="write the cycle incidence graph as DOT")
        if name == "export":
            sp.add_argument("--format", choices=("json", "dot"), help="quiver output format")
        if name == "grid":
            sp.add_argument("--max", type=int, help="largest p and q (default 7)")
            sp.add_argument("--jobs", type=int, help="worker processes (default 1)")
    return parser


def make_config(argv: Sequence[str]) -> RunConfig:
    args = build_parser().parse_args(argv)
    base = RunConfig()
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                base = RunConfig.from_text(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
    given = {k: v for k, v in vars(args).items() if v is not None and k != "config"}
    return base._merged(given)


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    try:
        cfg = make_config(list(sys.argv[1:] if argv is None else argv))
        code, report, text = RUNNERS[cfg.command](cfg)
    except SystemExit as exc:  # argparse
        return EXIT_USAGE if exc.code else EXIT_OK
    except (UsageError, configparser.Error) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (mirror_core.BadIndex, mirror_core.NotInvertible, matfac.IndexOutOfRange) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if cfg.json and report is not None:
        text = json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
