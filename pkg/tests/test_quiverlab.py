from __future__ import annotations

import pytest

from curvemirror import homcat, mirror_core, quiverlab
from curvemirror.matfac import ObjectId


def test_loop33_shape():
    Q = quiverlab.expected_quiver("loop", 3, 3, 2)
    assert len(Q.vertices) == 6
    labels = sorted(a.label for a in Q.arrows)
    assert labels.count("c1") == labels.count("c2") == 1
    assert "a" in labels and "b" in labels


@pytest.mark.parametrize("fam,p,q", [(f, p, q) for f in mirror_core.FAMILIES for p in range(2, 8) for q in range(2, 8)])
def test_vertex_count_is_tilting_length(fam, p, q):
    for ell in mirror_core.admissible_indices(fam, p, q):
        Q = quiverlab.expected_quiver(fam, p, q, ell)
        assert len(Q.vertices) == mirror_core.tilting_length(mirror_core.make(fam, p, q), ell)["tilting_length"]
        Q.topological_order()  # acyclic


def test_path_dims_examples():
    Q = quiverlab.expected_quiver("loop", 3, 3, 2)
    D = quiverlab.path_space_dims(Q)
    index = {v: n for n, v in enumerate(Q.vertices)}
    assert D[index[ObjectId("K0", (2, 1))]][index[ObjectId("K0", (2, 2))]] == 2
    order = Q.topological_order()
    for n, a in enumerate(order):
        assert D[a][a] == 1
        for b in order[:n]:
            assert D[a][b] == 0


def test_fan_example():
    # loop(p,p) with ell = p-1: every K0 vertex feeds the fan of c arrows
    Q = quiverlab.expected_quiver("loop", 4, 4, 3)
    cs = [a for a in Q.arrows if a.label.startswith("c")]
    assert len(cs) == 3 and len({a.source for a in cs}) == 1


@pytest.mark.parametrize("case", [("loop", 5, 3, 2), ("chain", 6, 5, 2), ("chain", 4, 3, 2), ("bp", 6, 3, 3)])
def test_compare_with_homcat(case):
    E = homcat.HomEngine(*case, cross_check=False)
    T = homcat.assemble_endomorphism_table(E, range(-3, 4))
    rep = quiverlab.compare_with_homcat(quiverlab.expected_quiver(*case), T)
    assert rep.ok, rep.to_json()


def test_dropped_relation_is_caught():
    case = ("loop", 5, 3, 2)
    E = homcat.HomEngine(*case, cross_check=False)
    T = homcat.assemble_endomorphism_table(E, range(-3, 4), with_arrows=False)
    Q = quiverlab.expected_quiver(*case)
    Q.relations = [r for r in Q.relations if not r.name.startswith("c1")]
    rep = quiverlab.compare_with_homcat(Q, T)
    assert not rep.dims_match
    assert rep.mismatches and all(m["target"] == "Kw(1)[3]" for m in rep.mismatches)


def test_export_deterministic_and_roundtrip():
    Q = quiverlab.expected_quiver("loop", 3, 3, 2)
    dot = quiverlab.export(Q, "dot")
    assert dot == quiverlab.export(quiverlab.expected_quiver("loop", 3, 3, 2), "dot")
    assert sum(1 for line in dot.splitlines() if line.strip().endswith('";') and "->" not in line) == 6
    text = quiverlab.export(Q, "json")
    assert quiverlab.parse_json(text) == Q
    assert quiverlab.export(quiverlab.parse_json(text), "json") == text
    with pytest.raises(quiverlab.UnknownFormat):
        quiverlab.export(Q, "svgz")


@pytest.mark.parametrize("p,q,ell", [(5, 3, 2), (3, 3, 2), (7, 4, 3)])
def test_rearrangement(p, q, ell):
    E = homcat.HomEngine("loop", p, q, ell, cross_check=False)
    zero_only, perm = quiverlab.rearrangement_check(E)
    assert zero_only and perm is not None
