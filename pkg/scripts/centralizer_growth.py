#!/usr/bin/env python3
"""Centralizer point counts across field levels, per conjugacy class.

For every class representative of G(F_q) this prints |Z(g)(F_{q^N})| over
a window of levels together with the dimension / component estimates
(heuristic: reported only when stable across the window).  The growth
profile separates central elements (full-dimensional centralizer, one
component) from the noncentral ones whose component group carries the
obstruction to easiness.

Usage:
    python scripts/centralizer_growth.py --group n2 --q 3 --levels 3
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from asaitwist.fields import FieldTower  # noqa: E402
from asaitwist.grouplaw import parse_group_name  # noqa: E402
from asaitwist.points import (  # noqa: E402
    centralizer_counts,
    conjugacy_classes,
    enumerate_group,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--group", default="n2")
    ap.add_argument("--q", type=int, default=3)
    ap.add_argument("--levels", type=int, default=3)
    ap.add_argument("--max-order", type=int, default=2_000_000)
    args = ap.parse_args()

    p = args.q
    d = 2
    while d * d <= p:
        if p % d == 0:
            p = d
            break
        d += 1
    law = parse_group_name(args.group, p)
    tower = FieldTower(p)
    view = enumerate_group(law, tower, args.q, 1, max_order=args.max_order)
    table = conjugacy_classes(view)
    print(f"{law.name} over F_{args.q}: {view.order} points, {len(table)} classes")
    for ci in range(len(table)):
        g = table.rep_point(ci)
        growth = centralizer_counts(
            law, tower, g, args.q, 1, range(1, args.levels + 1),
            max_order=args.max_order,
        )
        counts = " ".join(f"{c}" for _, c in growth.counts)
        if growth.stable:
            est = f"dim={growth.dimension} components={growth.components}"
        else:
            est = "unstable window (no estimate)"
        rep = tuple(c.coeffs for c in g.coords)
        print(f"  class {ci:>3} rep={rep} |class|={table.sizes[ci]:>4}  counts: {counts:<24} {est}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
