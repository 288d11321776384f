"""
Buildings as chamber systems.

A building is given by its Weyl group and, for each type i, a partition of
the chamber ids 0..N-1 into i-panels. The Weyl distance delta(x, y) is
computed by breadth-first search from x, extending delta(x, y) to
delta(x, y) s_j only along j-adjacencies that increase length. Assembly
checks that the result is a W-metric: in every panel, for every source,
exactly one chamber (the gate) is nearest and all others sit at
delta(gate) s_j.

A simplex of type J is identified with its star, the residue of cotype
I - J containing a representative chamber. Simplices compare equal iff
they have the same type and the same residue; the representative is the
smallest chamber id of the residue.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Any

import numpy as np

from .coxeter import WeylElement, WeylGroup
from .errors import (
    AxiomViolation,
    BadType,
    Disconnected,
    NotAFace,
    NotInStar,
    NotOpposite,
    UnknownChamber,
)

FULL_CHECK_LIMIT = 2000  # chambers; larger buildings are validated on sampled sources
FULL_TABLE_LIMIT = 1000  # chambers; larger buildings fill distance rows on demand
SAMPLED_SOURCES = 64


@dataclass(frozen=True, eq=False)
class Simplex:
    type: frozenset
    rep: int
    chambers: tuple[int, ...]

    def __eq__(self, other):
        if not isinstance(other, Simplex):
            return NotImplemented
        return self.type == other.type and self.rep == other.rep

    def __hash__(self):
        return hash((self.type, self.rep))

    @cached_property
    def chamber_set(self) -> frozenset:
        return frozenset(self.chambers)

    @property
    def sort_key(self):
        return (len(self.type), tuple(sorted(self.type)), self.rep)

    def is_face_of(self, other: "Simplex") -> bool:
        return self.type <= other.type and other.chambers[0] in self.chamber_set and (
            other.chamber_set <= self.chamber_set
        )

    def __repr__(self):
        return f"Simplex(type={sorted(self.type)}, rep={self.rep}, |St|={len(self.chambers)})"


class Building:
    """A spherical building as a chamber system with per-type panel partitions."""

    def __init__(self, weyl: WeylGroup, panels: dict[int, list[tuple[int, ...]]],
                 labels: list[Any] | None = None, geometry: Any = None):
        self.weyl = weyl
        self.types = weyl.types
        self.panels = {i: [tuple(sorted(b)) for b in panels[i]] for i in self.types}
        self.panels = {i: sorted(self.panels[i]) for i in self.types}
        self.n = sum(len(b) for b in self.panels[self.types[0]])
        self.labels = labels
        self.geometry = geometry
        self.spec: str | None = None  # geometry spec string, when built from one
        self.hash: str | None = None  # content hash of the JSON form, once computed
        # panel_of[i][c] = index of the i-panel containing c
        self.panel_of = {}
        for i in self.types:
            arr = np.full(self.n, -1, dtype=np.int64)
            for k, block in enumerate(self.panels[i]):
                arr[list(block)] = k
            self.panel_of[i] = arr
        self._mult = np.array(weyl.mult, dtype=np.int64)
        self._lengths = np.array(weyl.lengths, dtype=np.int64)
        self._delta: dict[int, np.ndarray] = {}
        self._residues: dict[frozenset, np.ndarray] = {}
        self._simplices: dict[tuple[frozenset, int], Simplex] = {}

    # ------------------------------------------------------------------ basics

    @property
    def chambers(self) -> range:
        return range(self.n)

    @property
    def w0(self) -> int:
        return self.weyl.w0

    def check_chamber(self, c: int):
        if not (isinstance(c, (int, np.integer)) and 0 <= c < self.n):
            raise UnknownChamber(f"no chamber {c!r}")

    def panel(self, c: int, i: int) -> tuple[int, ...]:
        return self.panels[i][self.panel_of[i][c]]

    def neighbours(self, c: int):
        for i in self.types:
            for d in self.panel(c, i):
                if d != c:
                    yield i, d

    def is_thick(self) -> bool:
        return all(len(b) >= 3 for i in self.types for b in self.panels[i])

    def is_thin(self) -> bool:
        return all(len(b) == 2 for i in self.types for b in self.panels[i])

    # --------------------------------------------------------------- distances

    def _bfs_delta(self, x: int) -> np.ndarray:
        mult, lengths = self.weyl.mult, self.weyl.lengths
        delta = np.full(self.n, -1, dtype=np.int64)
        delta[x] = 0
        todo = deque([x])
        while todo:
            y = todo.popleft()
            w = int(delta[y])
            for i in self.types:
                wi = mult[w][i - 1]
                if lengths[wi] <= lengths[w]:
                    continue
                for z in self.panel(y, i):
                    if delta[z] == -1:
                        delta[z] = wi
                        todo.append(z)
        return delta

    def delta_row(self, x: int) -> np.ndarray:
        """delta(x, y) for all y, as Weyl group element indices."""
        row = self._delta.get(x)
        if row is None:
            self.check_chamber(x)
            row = self._bfs_delta(x)
            if (row < 0).any():
                raise AxiomViolation(f"chambers unreachable by monotone galleries from {x}")
            row.setflags(write=False)
            # idempotent fill: a concurrent duplicate computes the same row
            self._delta.setdefault(x, row)
        return row

    def dist_row(self, x: int) -> np.ndarray:
        return self._lengths[self.delta_row(x)]

    def delta(self, x: int, y: int) -> int:
        self.check_chamber(y)
        return int(self.delta_row(x)[y])

    def weyl_distance(self, x: int, y: int) -> WeylElement:
        return self.weyl.elements[self.delta(x, y)]

    def dist(self, x: int, y: int) -> int:
        return int(self.weyl.lengths[self.delta(x, y)])

    def fill_distance_table(self):
        for x in self.chambers:
            self.delta_row(x)

    # -------------------------------------------------------------- validation

    def validate(self, sources=None):
        """Check the W-metric axioms from the given sources (all by default)."""
        for i in self.types:
            covered = sorted(c for b in self.panels[i] for c in b)
            if covered != list(range(self.n)):
                raise AxiomViolation(f"{i}-panels do not partition the chambers")
            for b in self.panels[i]:
                if len(b) < 2:
                    raise AxiomViolation(f"{i}-panel {b} has fewer than 2 chambers")
        self._check_connected()
        if sources is None:
            sources = self.chambers
        for x in sources:
            row = self._bfs_delta(x)
            if (row < 0).any():
                y = int(np.nonzero(row < 0)[0][0])
                raise AxiomViolation(f"delta({x}, {y}) not reachable by a monotone gallery")
            self._check_panels(x, row)
            if self.n <= FULL_TABLE_LIMIT:
                row.setflags(write=False)
                self._delta.setdefault(x, row)

    def _check_connected(self):
        seen = {0}
        todo = [0]
        while todo:
            c = todo.pop()
            for _, d in self.neighbours(c):
                if d not in seen:
                    seen.add(d)
                    todo.append(d)
        if len(seen) != self.n:
            raise Disconnected(f"chamber graph has a component of size {len(seen)} < {self.n}")

    def _check_panels(self, x: int, row: np.ndarray):
        lengths = self._lengths
        for i in self.types:
            for block in self.panels[i]:
                ws = row[list(block)]
                ls = lengths[ws]
                gate = int(np.argmin(ls))
                if (ls == ls[gate]).sum() != 1:
                    raise AxiomViolation(
                        f"panel {block} (type {i}) has no unique gate from chamber {x}")
                expected = self._mult[ws[gate], i - 1]
                others = np.delete(ws, gate)
                if (others != expected).any():
                    bad = next(c for k, c in enumerate(block) if k != gate and ws[k] != expected)
                    raise AxiomViolation(
                        f"Weyl distance from {x} is not well defined at chamber {bad} "
                        f"(type-{i} panel {block})")

    # --------------------------------------------------------------- simplices

    def residue_labels(self, cotype) -> np.ndarray:
        """Label array assigning each chamber the id of its residue of the given cotype."""
        K = frozenset(cotype)
        labels = self._residues.get(K)
        if labels is None:
            labels = np.full(self.n, -1, dtype=np.int64)
            for c in self.chambers:
                if labels[c] != -1:
                    continue
                # residues are labelled by their smallest chamber
                labels[c] = c
                todo = [c]
                while todo:
                    y = todo.pop()
                    for i in K:
                        for z in self.panel(y, i):
                            if labels[z] == -1:
                                labels[z] = c
                                todo.append(z)
            labels.setflags(write=False)
            self._residues[K] = labels
        return labels

    def simplex(self, c: int, J) -> Simplex:
        """The face of type J of chamber c."""
        self.check_chamber(c)
        J = self.weyl.check_types(J)
        cotype = frozenset(self.types) - J
        labels = self.residue_labels(cotype)
        rep = int(labels[c])
        key = (J, rep)
        s = self._simplices.get(key)
        if s is None:
            chambers = tuple(int(d) for d in np.nonzero(labels == rep)[0])
            s = Simplex(J, rep, chambers)
            self._simplices[key] = s
        return s

    def chamber(self, c: int) -> Simplex:
        return self.simplex(c, self.types)

    def vertex(self, c: int, t: int) -> Simplex:
        return self.simplex(c, {t})

    def empty_simplex(self) -> Simplex:
        return self.simplex(0, ())

    def face(self, s: Simplex, J) -> Simplex:
        J = self.weyl.check_types(J)
        if not J <= s.type:
            raise BadType(f"{sorted(J)} is not a subset of the type {sorted(s.type)}")
        return self.simplex(s.rep, J)

    def simplices_of_type(self, J, chambers=None) -> list[Simplex]:
        J = self.weyl.check_types(J)
        chambers = self.chambers if chambers is None else sorted(chambers)
        out = {self.simplex(c, J) for c in chambers}
        return sorted(out, key=lambda s: s.rep)

    def all_simplices(self, chambers=None, include_empty=False) -> list[Simplex]:
        out = []
        for k in range(0 if include_empty else 1, len(self.types) + 1):
            for J in combinations(self.types, k):
                out.extend(self.simplices_of_type(J, chambers))
        return out

    def star(self, s: Simplex) -> frozenset:
        return s.chamber_set

    def in_star(self, R: Simplex, x: Simplex) -> bool:
        """Whether x contains R, i.e. x is a simplex of St R."""
        return R.type <= x.type and x.chambers[0] in R.chamber_set

    # ------------------------------------------------------------- projections

    def proj_chamber(self, R: Simplex, c: int) -> int:
        """The gate of chamber c in St R: the unique chamber of St R nearest to c."""
        members = np.array(R.chambers)
        d = self.dist_row(c)[members]
        k = int(np.argmin(d))
        if (d == d[k]).sum() != 1:
            raise AxiomViolation(f"no unique gate of chamber {c} in {R}")
        return int(members[k])

    def proj_simplex(self, R: Simplex, S: Simplex) -> Simplex:
        """proj_R(S): the simplex of St R whose star is the set of gates of St S."""
        if self.in_star(R, S):
            return S
        gates = sorted({self.proj_chamber(R, d) for d in S.chambers})
        T = {t for t in self.types if len({int(self.residue_labels(
            frozenset(self.types) - {t})[g]) for g in gates}) == 1}
        result = self.simplex(gates[0], T)
        if list(result.chambers) != gates:
            raise NotAFace(f"gates of {S} in St {R} do not form the star of a simplex")
        return result

    # -------------------------------------------------------------- opposition

    def is_opposite_chambers(self, x: int, y: int) -> bool:
        return self.delta(x, y) == self.w0

    def _some_pair_at(self, A: Simplex, B: Simplex, target: int) -> bool:
        members = np.array(B.chambers)
        return any((self.delta_row(c)[members] == target).any() for c in A.chambers)

    def _every_chamber_has_partner(self, A: Simplex, B: Simplex, target: int) -> bool:
        members = np.array(B.chambers)
        return all((self.delta_row(c)[members] == target).any() for c in A.chambers)

    def is_opposite_simplices(self, A: Simplex, B: Simplex, mode: str = "literal") -> bool:
        """Opposition of simplices in the whole building.

        ``literal``: every chamber of St A has an opposite chamber in St B,
        and every chamber of St B has one in St A.
        ``fast``: type(B) is the image of type(A) under the opposition
        involution and some pair of star chambers is opposite.
        """
        w0 = self.w0
        if mode == "fast":
            sigma = self.weyl.opposition
            if B.type != frozenset(sigma[t] for t in A.type):
                return False
            return self._some_pair_at(A, B, w0)
        if mode != "literal":
            raise ValueError(f"unknown mode {mode!r}")
        return (self._every_chamber_has_partner(A, B, w0)
                and self._every_chamber_has_partner(B, A, w0))

    def opposite_in_star(self, R: Simplex, x: Simplex, y: Simplex, mode: str = "literal") -> bool:
        """Opposition of x and y inside the residue building St R of type I - type(R)."""
        for s in (x, y):
            if not self.in_star(R, s):
                raise NotInStar(f"{s} is not in St {R}")
        K = frozenset(self.types) - R.type
        w0K = self.weyl.longest_index(K)
        if mode == "fast":
            sigma = self.weyl.parabolic_opposition(K)
            if (y.type - R.type) != frozenset(sigma[t] for t in x.type - R.type):
                return False
            return self._some_pair_at(x, y, w0K)
        return (self._every_chamber_has_partner(x, y, w0K)
                and self._every_chamber_has_partner(y, x, w0K))

    def opposite_transfer(self, x1: Simplex, x1_opp: Simplex, y1: Simplex) -> Simplex:
        """Carry y1 from St x1 over to St x1_opp by projection.

        If y0 is opposite y1 inside St x1, the result is opposite y0 in the
        whole building.
        """
        if not self.is_opposite_simplices(x1, x1_opp, mode="fast"):
            raise NotOpposite(f"{x1} and {x1_opp} are not opposite")
        if not self.in_star(x1, y1):
            raise NotInStar(f"{y1} is not in St {x1}")
        return self.proj_simplex(x1_opp, y1)

    # ----------------------------------------------------------------- hulls

    def interval(self, x: int, y: int) -> list[int]:
        """Chambers on minimal galleries from x to y."""
        dx, dy = self.dist_row(x), self.dist_row(y)
        return [int(z) for z in np.nonzero(dx + dy == dx[y])[0]]

    def apartment_hull(self, x: int, y: int) -> list[int]:
        if not self.is_opposite_chambers(x, y):
            raise NotOpposite(f"chambers {x} and {y} are not opposite")
        return self.interval(x, y)

    # ----------------------------------------------------------------- export

    def edges(self):
        """Chamber-graph edges (c, d, type) with c < d, in deterministic order."""
        for i in self.types:
            for block in self.panels[i]:
                for c, d in combinations(block, 2):
                    yield c, d, i

    def sample_sources(self, k: int = SAMPLED_SOURCES, seed: int = 0) -> list[int]:
        rng = random.Random(seed)
        return sorted(rng.sample(range(self.n), min(k, self.n)))


def assemble(weyl: WeylGroup, panels: dict[int, list], labels=None, geometry=None,
             validate: bool = True, seed: int = 0) -> Building:
    """Build and validate a Building from panel partitions.

    Up to FULL_CHECK_LIMIT chambers every source is checked; beyond that a
    seeded sample of sources.
    """
    missing = set(weyl.types) - set(panels)
    if missing:
        raise AxiomViolation(f"no panels given for types {sorted(missing)}")
    counts = {i: sum(len(b) for b in panels[i]) for i in weyl.types}
    if len(set(counts.values())) != 1:
        raise AxiomViolation(f"panel partitions cover different chamber counts {counts}")
    n = next(iter(counts.values()))
    for i in weyl.types:
        covered = sorted(c for block in panels[i] for c in block)
        if covered != list(range(n)):
            raise AxiomViolation(f"{i}-panels do not partition the chambers 0..{n - 1}")
    b = Building(weyl, panels, labels, geometry)
    if validate:
        sources = None if b.n <= FULL_CHECK_LIMIT else b.sample_sources(seed=seed)
        b.validate(sources)
    return b
