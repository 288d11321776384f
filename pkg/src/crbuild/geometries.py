"""
Concrete buildings: flag complexes of projective spaces (type A_n), of the
symplectic quadrangle W(p) (type C_2), and thin buildings (Coxeter complexes).

Geometry specs are strings such as ``A2:p=2``, ``C2:p=3``, ``thin:A3`` or
``thin:I2:4``.
"""

from __future__ import annotations

import random
import re
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .building import Building, assemble
from .coxeter import WeylGroup, build_weyl, make_diagram, parse_diagram
from .errors import BuildingError, NotPrime, SizeLimit, UnsupportedDiagram, UnsupportedGeometry
from .gf import (
    Flag,
    Matrix,
    Subspace,
    apply_to_subspace,
    enumerate_flags_A,
    enumerate_flags_C2,
    form_multiplier,
    identity_matrix,
    is_invertible,
    mat_mul,
    symplectic_form,
)

GROUP_ENUMERATION_CAP = 20160
SAMPLE_SIZE = 1000
SAMPLE_WORD_LENGTH = 40

_PRIMITIVE_ROOT = {3: 2, 5: 2, 7: 3}


@dataclass
class AutomorphismSample:
    """Type-preserving matrix automorphisms with their induced chamber permutations."""

    matrices: list[Matrix]
    perms: list[np.ndarray]
    exhaustive: bool

    def __len__(self):
        return len(self.perms)

    @cached_property
    def stack(self) -> np.ndarray:
        return np.vstack(self.perms)


@dataclass(eq=False)
class FlagGeometry:
    kind: str  # "A" or "C2"
    rank: int
    p: int
    flags: list[Flag]
    index: dict[tuple[Subspace, ...], int] = field(default_factory=dict)
    _groups: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.index = {f.chain: c for c, f in enumerate(self.flags)}

    @property
    def spec(self) -> str:
        return f"{self.kind}{self.rank}:p={self.p}" if self.kind == "A" else f"C2:p={self.p}"

    @property
    def ambient_dim(self) -> int:
        return self.rank + 1 if self.kind == "A" else 4

    @property
    def symplectic(self) -> bool:
        return self.kind == "C2"

    def subspace(self, c: int, t: int) -> Subspace:
        """The vertex of type t of chamber c, as a subspace."""
        return self.flags[c].chain[t - 1]

    def chamber_of(self, chain) -> int:
        return self.index[tuple(chain)]

    def is_automorphism(self, g: Matrix) -> bool:
        if len(g) != self.ambient_dim or not is_invertible(g, self.p):
            return False
        return not self.symplectic or form_multiplier(g, self.p) is not None

    def chamber_permutation(self, g: Matrix) -> np.ndarray:
        """perm[c] is the chamber id of g applied to flag c."""
        g = tuple(tuple(x % self.p for x in row) for row in g)
        if not self.is_automorphism(g):
            raise BuildingError(f"matrix {g} is not a type-preserving automorphism of {self.spec}")
        image: dict[Subspace, Subspace] = {}
        perm = np.empty(len(self.flags), dtype=np.int64)
        for c, f in enumerate(self.flags):
            chain = []
            for u in f.chain:
                if u not in image:
                    image[u] = apply_to_subspace(u, g)
                chain.append(image[u])
            perm[c] = self.index[tuple(chain)]
        return perm

    def automorphism_generators(self) -> list[Matrix]:
        n, p = self.ambient_dim, self.p
        gens = []
        if self.kind == "A":
            for i in range(n):
                for j in range(n):
                    if i != j:
                        m = [list(r) for r in identity_matrix(n)]
                        m[i][j] = 1
                        gens.append(tuple(tuple(r) for r in m))
            if p in _PRIMITIVE_ROOT:
                m = [list(r) for r in identity_matrix(n)]
                m[0][0] = _PRIMITIVE_ROOT[p]
                gens.append(tuple(tuple(r) for r in m))
        else:
            # symplectic transvections x -> x + <x, v> v over all points v
            basis = identity_matrix(4)
            for point in enumerate_flags_C2(p).points:
                v = point.basis[0]
                cols = [[(e[r] + symplectic_form(e, v, p) * v[r]) % p for r in range(4)]
                        for e in basis]
                gens.append(tuple(tuple(cols[k][r] for k in range(4)) for r in range(4)))
            if p in _PRIMITIVE_ROOT:
                a = _PRIMITIVE_ROOT[p]
                gens.append(((a, 0, 0, 0), (0, 1, 0, 0), (0, 0, a, 0), (0, 0, 0, 1)))
        return gens

    def automorphisms(self, seed: int = 0, cap: int = GROUP_ENUMERATION_CAP,
                      samples: int = SAMPLE_SIZE) -> AutomorphismSample:
        """The induced automorphism group if it has at most `cap` elements, else a seeded sample.

        Elements are distinct chamber permutations; each carries one matrix
        representative.
        """
        key = (seed, cap, samples)
        if key in self._groups:
            return self._groups[key]
        gens = self.automorphism_generators()
        gen_perms = [self.chamber_permutation(g) for g in gens]
        ident = identity_matrix(self.ambient_dim)
        start = np.arange(len(self.flags), dtype=np.int64)
        matrices = [ident]
        perms = [start]
        seen = {start.tobytes()}
        k = 0
        exhaustive = True
        while k < len(perms):
            for g, gp in zip(gens, gen_perms):
                q = gp[perms[k]]
                b = q.tobytes()
                if b not in seen:
                    seen.add(b)
                    perms.append(q)
                    matrices.append(mat_mul(g, matrices[k], self.p))
            k += 1
            if len(perms) > cap:
                exhaustive = False
                break
        if not exhaustive:
            rng = random.Random(seed)
            matrices, perms, seen = [ident], [start], {start.tobytes()}
            for _ in range(samples * 4):
                if len(perms) >= samples:
                    break
                m, q = ident, start
                for _ in range(SAMPLE_WORD_LENGTH):
                    j = rng.randrange(len(gens))
                    m, q = mat_mul(gens[j], m, self.p), gen_perms[j][q]
                if q.tobytes() not in seen:
                    seen.add(q.tobytes())
                    matrices.append(m)
                    perms.append(q)
        result = AutomorphismSample(matrices, perms, exhaustive)
        self._groups[key] = result
        return result


def flag_panels(flags: list[Flag], rank: int) -> dict[int, list[tuple[int, ...]]]:
    """i-panels: flags that agree everywhere except possibly in the type-i vertex."""
    panels = {}
    for i in range(1, rank + 1):
        blocks = defaultdict(list)
        for c, f in enumerate(flags):
            blocks[f.chain[: i - 1] + f.chain[i:]].append(c)
        panels[i] = sorted(tuple(b) for b in blocks.values())
    return panels


def projective_building(n: int, p: int, **kw) -> Building:
    flags = enumerate_flags_A(n, p)
    geometry = FlagGeometry("A", n, p, flags)
    weyl = build_weyl(make_diagram("A", n))
    return assemble(weyl, flag_panels(flags, n), labels=flags, geometry=geometry, **kw)


def symplectic_building(p: int, **kw) -> Building:
    flags = list(enumerate_flags_C2(p).flags)
    geometry = FlagGeometry("C2", 2, p, flags)
    weyl = build_weyl(make_diagram("C", 2))
    return assemble(weyl, flag_panels(flags, 2), labels=flags, geometry=geometry, **kw)


def thin_building(weyl: WeylGroup, **kw) -> Building:
    """The Coxeter complex of W: chambers are group elements, i-panels are {w, w s_i}."""
    panels = {}
    for i in weyl.types:
        panels[i] = sorted({tuple(sorted((w, weyl.mult[w][i - 1]))) for w in range(weyl.order)})
    labels = [str(e) for e in weyl.elements]
    return assemble(weyl, panels, labels=labels, **kw)


_SPEC_RE = re.compile(r"^\s*(?:thin:(.+)|([AC])(\d+):p=(\d+))\s*$")


def build_geometry(spec: str, **kw) -> Building:
    """Construct the building named by a geometry spec string."""
    b = _build_geometry(spec, **kw)
    b.spec = spec.strip()
    return b


def _build_geometry(spec: str, **kw) -> Building:
    match = _SPEC_RE.match(spec)
    if not match:
        raise UnsupportedGeometry(f"cannot parse geometry spec {spec!r}")
    try:
        if match.group(1):
            return thin_building(build_weyl(parse_diagram(match.group(1))), **kw)
        family, rank, p = match.group(2), int(match.group(3)), int(match.group(4))
        if family == "A" and 1 <= rank <= 3:
            return projective_building(rank, p, **kw)
        if family == "C" and rank == 2:
            return symplectic_building(p, **kw)
    except (SizeLimit, NotPrime, UnsupportedDiagram) as exc:
        raise UnsupportedGeometry(f"{spec}: {exc}") from exc
    raise UnsupportedGeometry(f"geometry {spec!r} is outside the supported set")
