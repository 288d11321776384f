"""
Gallery-convex chamber subcomplexes.

A chamber set is convex when it contains every chamber on every minimal
gallery between two of its members. The simplices of a convex chamber
subcomplex are the faces of its chambers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .building import Building, Simplex
from .errors import EmptyFixedSet, NotConvex


@dataclass(eq=False)
class ConvexChamberSubcomplex:
    building: Building
    chambers: frozenset
    _inventory: dict = field(default_factory=dict, repr=False)
    _opposites: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.chambers = frozenset(int(c) for c in self.chambers)
        if not self.chambers:
            raise ValueError("a chamber subcomplex needs at least one chamber")

    def __len__(self):
        return len(self.chambers)

    def __eq__(self, other):
        if not isinstance(other, ConvexChamberSubcomplex):
            return NotImplemented
        return self.building is other.building and self.chambers == other.chambers

    def __hash__(self):
        return hash(self.chambers)

    @property
    def sorted_chambers(self) -> list[int]:
        return sorted(self.chambers)

    def simplices_of_type(self, J) -> list[Simplex]:
        J = self.building.weyl.check_types(J)
        if J not in self._inventory:
            self._inventory[J] = self.building.simplices_of_type(J, self.chambers)
        return self._inventory[J]

    def simplices(self, include_empty: bool = False) -> list[Simplex]:
        types = self.building.types
        out = []
        for k in range(0 if include_empty else 1, len(types) + 1):
            for J in combinations(types, k):
                out.extend(self.simplices_of_type(J))
        return out

    def contains(self, s: Simplex) -> bool:
        """Whether s is a face of some chamber of the subcomplex."""
        if len(s.chambers) < len(self.chambers):
            return any(c in self.chambers for c in s.chambers)
        return any(c in s.chamber_set for c in self.chambers)

    def chambers_containing(self, s: Simplex) -> list[int]:
        return sorted(c for c in s.chambers if c in self.chambers)


def interval(b: Building, x: int, y: int) -> list[int]:
    return b.interval(x, y)


def _closure(b: Building, seed) -> set[int]:
    members = set()
    todo = deque()
    for c in sorted(set(int(c) for c in seed)):
        b.check_chamber(c)
        members.add(c)
        todo.append(c)
    processed: list[int] = []
    while todo:
        u = todo.popleft()
        du = b.dist_row(u)
        for v in processed:
            new = np.nonzero(du + b.dist_row(v) == du[v])[0]
            for z in new:
                z = int(z)
                if z not in members:
                    members.add(z)
                    todo.append(z)
        processed.append(u)
    return members


def convex_hull(b: Building, seed) -> ConvexChamberSubcomplex:
    """Least interval-closed chamber set containing the seed."""
    seed = list(seed)
    if not seed:
        raise ValueError("convex hull of an empty seed")
    return ConvexChamberSubcomplex(b, frozenset(_closure(b, seed)))


def is_convex(b: Building, chambers) -> bool:
    chambers = set(int(c) for c in chambers)
    if not chambers:
        return False
    for u, v in combinations(sorted(chambers), 2):
        du, dv = b.dist_row(u), b.dist_row(v)
        if not set(np.nonzero(du + dv == du[v])[0].tolist()) <= chambers:
            return False
    return True


def subcomplex(b: Building, chambers) -> ConvexChamberSubcomplex:
    """Wrap a chamber set, refusing sets that are not convex."""
    if not is_convex(b, chambers):
        raise NotConvex("chamber set is not closed under minimal galleries")
    return ConvexChamberSubcomplex(b, frozenset(chambers))


def star_subcomplex(b: Building, s: Simplex) -> ConvexChamberSubcomplex:
    return ConvexChamberSubcomplex(b, s.chamber_set)


def fixed_chambers(b: Building, perms) -> frozenset:
    fixed = np.ones(b.n, dtype=bool)
    for perm in perms:
        fixed &= perm == np.arange(b.n)
    return frozenset(int(c) for c in np.nonzero(fixed)[0])


def fixed_subcomplex(b: Building, automorphisms) -> ConvexChamberSubcomplex:
    """Chambers fixed by every given matrix automorphism."""
    if b.geometry is None:
        raise ValueError("fixed subcomplexes need a flag geometry")
    perms = [b.geometry.chamber_permutation(g) for g in automorphisms]
    fixed = fixed_chambers(b, perms)
    if not fixed:
        raise EmptyFixedSet("no chamber is fixed by the given automorphisms")
    return ConvexChamberSubcomplex(b, fixed)


def simplices_of_type(omega: ConvexChamberSubcomplex, J) -> list[Simplex]:
    return omega.simplices_of_type(J)
