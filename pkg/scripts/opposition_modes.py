"""Compare one-sided, symmetric and type-based opposition of simplices on small buildings.

    python3 scripts/opposition_modes.py A2:p=2 C2:p=2 thin:A3 thin:I2:5
"""

import sys
from itertools import product

from crbuild.geometries import build_geometry


def one_sided(b, A, B):
    w0 = b.w0
    return all(any(b.delta(c, d) == w0 for d in B.chambers) for c in A.chambers)


def compare(spec: str) -> str:
    b = build_geometry(spec)
    simplices = b.all_simplices()
    pairs = list(product(simplices, repeat=2))
    fast = [b.is_opposite_simplices(A, B, "fast") for A, B in pairs]
    literal = [b.is_opposite_simplices(A, B, "literal") for A, B in pairs]
    single = [one_sided(b, A, B) for A, B in pairs]
    d_lit = sum(f != x for f, x in zip(fast, literal))
    d_one = sum(f != x for f, x in zip(fast, single))
    return f"{spec}: {len(pairs)} pairs, symmetric vs fast differ {d_lit}, one-sided vs fast differ {d_one}"


if __name__ == "__main__":
    for spec in sys.argv[1:] or ["A2:p=2", "C2:p=2", "thin:A3", "thin:I2:5"]:
        print(compare(spec))
