"""Exact B-model and combinatorial A-model computations for invertible curve
singularities with a non-maximal grading group.

Modules: `mirror_core` (polynomials, weights, groups, counts), `galg` (exact
cyclotomic and graded algebra), `matfac` (matrix factorisations), `homcat`
(Hom complexes), `quiverlab` (quivers with relations), `amodel` (vanishing
cycles), `cli`.
"""

from __future__ import annotations

__version__ = "0.1.0"
