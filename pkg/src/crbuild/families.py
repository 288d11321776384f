"""Enumerated families of convex chamber subcomplexes for exhaustive checks."""

from __future__ import annotations

import random
from itertools import combinations

from .building import Building
from .convexity import ConvexChamberSubcomplex, convex_hull, fixed_chambers


def residues(b: Building) -> list[frozenset]:
    out = []
    for k in range(len(b.types) + 1):
        for J in combinations(b.types, k):
            out.extend(s.chamber_set for s in b.simplices_of_type(J))
    return out


def apartments(b: Building) -> list[frozenset]:
    out = set()
    for x in b.chambers:
        for y in range(x + 1, b.n):
            if b.is_opposite_chambers(x, y):
                out.add(frozenset(b.apartment_hull(x, y)))
    return sorted(out, key=sorted)


def pair_hulls(b: Building) -> list[frozenset]:
    return [convex_hull(b, [x, y]).chambers for x in b.chambers for y in range(x, b.n)]


def triple_hulls(b: Building, count: int = 200, seed: int = 0) -> list[frozenset]:
    rng = random.Random(seed)
    return [convex_hull(b, rng.sample(range(b.n), 3)).chambers for _ in range(count)]


def fixed_sets(b: Building, seed: int = 0) -> list[frozenset]:
    if b.geometry is None:
        return []
    out = []
    for perm in b.geometry.automorphisms(seed=seed).perms:
        fixed = fixed_chambers(b, [perm])
        if fixed:
            out.append(fixed)
    return out


def subcomplex_family(b: Building, seed: int = 0, triples: int = 200) -> list[ConvexChamberSubcomplex]:
    """Residues, apartments, hulls of pairs and random triples, and fixed sets; deduplicated."""
    sets = set()
    for source in (residues(b), apartments(b), pair_hulls(b),
                   triple_hulls(b, triples, seed), fixed_sets(b, seed)):
        sets.update(source)
    return [ConvexChamberSubcomplex(b, s) for s in sorted(sets, key=lambda s: (len(s), sorted(s)))]
