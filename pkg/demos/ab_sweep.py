"""Compare intersection numbers with Hom dimensions over a grid of exponents.

Run with `python3 demos/ab_sweep.py [max]` (default 6).
"""

from __future__ import annotations

import sys
import time

from curvemirror import amodel, mirror_core


def main(max_pq: int) -> int:
    failures = 0
    for family in mirror_core.FAMILIES:
        start = time.perf_counter()
        points = pairs = degenerate = 0
        for p in range(2, max_pq + 1):
            for q in range(2, max_pq + 1):
                for ell in mirror_core.admissible_indices(family, p, q):
                    rep = amodel.compare_ab(family, p, q, ell)
                    points += 1
                    pairs += len(rep.pairs)
                    degenerate += sum(r.degenerate for r in rep.pairs)
                    if not rep.ok:
                        failures += 1
                        print(f"  mismatch at {family}({p},{q};{ell})")
        secs = time.perf_counter() - start
        print(f"{family:6s} {points:3d} points {pairs:6d} pairs ({degenerate} degenerate) {secs:5.1f}s")
    print("all match" if not failures else f"{failures} mismatching points")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(int(sys.argv[1]) if len(sys.argv) > 1 else 6))
