"""
Complete reducibility and centres of convex chamber subcomplexes.

`build_opposite` is the constructive step: given that every type-J simplex
of Omega has an opposite in Omega, and a type i outside J adjacent in the
diagram to some j in J, it produces an opposite in Omega for any simplex
of type J + {i}, using only projections between simplices of Omega.
`certify_cr` iterates this step until J is the full type set, then reads
off opposites of all faces from opposites of chambers.

When no vertex type has all its vertices opposable, `classify` falls back
to the centre finders for projective spaces (intersection of all
hyperplanes of Omega) and for the symplectic quadrangle (span of the
unopposed points).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .building import Building, Simplex
from .convexity import ConvexChamberSubcomplex
from .errors import (
    BadType,
    HypothesisNotMet,
    HypothesisViolated,
    IsotropyViolated,
    NotChamberComplex,
    NotInOmega,
    NotIrreducible,
    TraceAssertionFailed,
    UnsupportedGeometry,
)
from .gf import Subspace, format_matrix, is_totally_isotropic, meet, span_join

TRACE_NAMES = ("x0", "ell", "C0", "p", "x0o", "C0p", "C1", "x1", "y0", "y1",
               "x1o", "y2", "ell_opp", "z1", "result")


@dataclass
class Verdict:
    kind: str  # "CR", "Centre" or "Inconclusive"
    witness: dict[Simplex, Simplex] = field(default_factory=dict)
    centre: Simplex | None = None
    centre_in_omega: bool | None = None
    evidence: list[dict] = field(default_factory=list)
    evidence_exhaustive: bool | None = None
    traces: list[dict[str, Simplex]] = field(default_factory=list)
    unopposed: dict[int, list[Simplex]] = field(default_factory=dict)
    reason: str = ""

    @property
    def exit_code(self) -> int:
        return {"CR": 0, "Centre": 1}.get(self.kind, 2)

    def to_json(self, b: Building, trace: bool = True) -> dict:
        enc = lambda s: simplex_json(b, s)  # noqa: E731
        out = {"kind": self.kind}
        if self.kind == "CR":
            out["witness"] = [[enc(a), enc(w)] for a, w in
                              sorted(self.witness.items(), key=lambda kv: kv[0].sort_key)]
        if self.centre is not None:
            out["centre"] = enc(self.centre)
            out["centre_in_omega"] = self.centre_in_omega
            out["evidence_scope"] = ("all type-preserving matrix automorphisms"
                                     if self.evidence_exhaustive else
                                     "seeded sample of type-preserving matrix automorphisms")
            out["evidence"] = self.evidence
        if self.unopposed:
            out["unopposed"] = {str(t): [enc(v) for v in vs] for t, vs in sorted(self.unopposed.items())}
        if trace and self.traces:
            out["trace"] = [{name: enc(tr[name]) for name in TRACE_NAMES if name in tr}
                            for tr in self.traces]
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass
class CRFailure:
    """No vertex type has all of its vertices opposable inside Omega."""

    unopposed: dict[int, list[Simplex]]


def simplex_json(b: Building, s: Simplex) -> dict:
    out = {"type": sorted(s.type), "rep": s.rep}
    if b.geometry is not None and s.type:
        out["subspaces"] = [b.geometry.subspace(s.rep, t).serialize() for t in sorted(s.type)]
    return out


def _sigma(b: Building, J) -> frozenset:
    return frozenset(b.weyl.opposition[t] for t in J)


def opposite_in_omega(omega: ConvexChamberSubcomplex, A: Simplex) -> Simplex | None:
    """The opposite of A in Omega with the smallest representative, or None."""
    b = omega.building
    cache = omega._opposites
    if A in cache:
        return cache[A]
    if not omega.contains(A):
        raise NotInOmega(f"{A} is not a simplex of Omega")
    found = None
    for B in omega.simplices_of_type(_sigma(b, A.type)):
        if b.is_opposite_simplices(A, B, mode="fast"):
            found = B
            break
    cache[A] = found
    return found


def unopposed(omega: ConvexChamberSubcomplex, J) -> list[Simplex]:
    return [s for s in omega.simplices_of_type(J) if opposite_in_omega(omega, s) is None]


def hypothesis_holds(omega: ConvexChamberSubcomplex, k: int) -> bool:
    """Whether every type-k vertex of Omega has an opposite in Omega."""
    omega.building.weyl.check_types({k})
    return not unopposed(omega, {k})


def maximal_opposable_type(omega: ConvexChamberSubcomplex) -> tuple[frozenset, bool]:
    """A maximal J with every type-J simplex of Omega opposable, and whether any vertex type works.

    Opposability is inherited by faces, so greedy extension in ascending
    type order reaches a maximal set.
    """
    types = omega.building.types
    ok = any(hypothesis_holds(omega, k) for k in types)
    if not ok:
        return frozenset(), False
    J = frozenset()
    for t in types:
        if not unopposed(omega, J | {t}):
            J = J | {t}
    return J, True


def build_opposite(omega: ConvexChamberSubcomplex, z: Simplex, J, i: int, j: int,
                   trace: dict | None = None) -> Simplex:
    """Construct an opposite of z (of type J + {i}) inside Omega.

    Every intermediate simplex is stored in `trace` under the names of
    TRACE_NAMES and checked for the property the construction relies on.
    """
    b = omega.building
    W = b.weyl
    I = frozenset(b.types)
    J = W.check_types(J)
    if not W.diagram.is_irreducible():
        raise NotIrreducible(f"diagram {W.diagram} is reducible")
    if i in J or j not in J or j not in W.diagram.neighbours(i):
        raise BadType(f"need i outside J adjacent to j in J; got i={i}, j={j}, J={sorted(J)}")
    if z.type != J | {i}:
        raise BadType(f"z has type {sorted(z.type)}, expected {sorted(J | {i})}")
    if not omega.contains(z):
        raise NotInOmega(f"{z} is not a simplex of Omega")
    t = {} if trace is None else trace

    def require(cond, what):
        if not cond:
            raise TraceAssertionFailed(what)

    def opposite(name, s):
        o = opposite_in_omega(omega, s)
        if o is None:
            raise HypothesisViolated(f"{name}: type-{sorted(s.type)} simplex {s} has no opposite in Omega")
        return o

    t["x0"] = x0 = b.face(z, J)
    t["ell"] = ell = b.face(z, {i})
    t["C0"] = C0 = b.chamber(omega.chambers_containing(z)[0])
    t["p"] = p = b.face(C0, I - {j})
    require(b.in_star(ell, p), "ell is a vertex of p")

    t["x0o"] = x0o = opposite("x0o", x0)
    t["C0p"] = C0p = b.proj_simplex(x0o, C0)
    t["C1"] = C1 = b.proj_simplex(p, C0p)
    require(b.proj_simplex(p, x0) == C0, "C0 = proj_p(x0)")
    require(C1 != C0, "C1 != C0")

    t["x1"] = x1 = b.face(C1, J)
    require(x1 != x0, "x1 != x0")
    t["y0"] = y0 = b.proj_simplex(x1, x0)
    require(b.in_star(x1, y0) and b.in_star(ell, y0), "y0 has x1 as a face and ell as a vertex")
    t["y1"] = y1 = b.proj_simplex(x1, x0o)
    require(b.opposite_in_star(x1, y0, y1), "y0 and y1 are opposite in St x1")

    t["x1o"] = x1o = opposite("x1o", x1)
    t["y2"] = y2 = b.opposite_transfer(x1, x1o, y1)
    require(b.is_opposite_simplices(y2, y0, mode="fast"), "y2 is opposite y0")

    sigma_i = W.opposition[i]
    candidates = sorted({b.vertex(c, sigma_i) for c in y2.chambers}, key=lambda s: s.rep)
    ell_opp = next((v for v in candidates if b.is_opposite_simplices(v, ell, mode="fast")), None)
    require(ell_opp is not None, "St y2 has a vertex opposite ell")
    t["ell_opp"] = ell_opp

    require(b.proj_simplex(ell, x0) == z, "proj_ell(x0) = z")
    t["z1"] = z1 = b.proj_simplex(ell, x0o)
    require(b.opposite_in_star(ell, z, z1), "z and z1 are opposite in St ell")
    t["result"] = result = b.opposite_transfer(ell, ell_opp, z1)

    require(result.type == _sigma(b, z.type), "result has the opposite type of z")
    require(b.is_opposite_simplices(result, z, mode="fast"), "result is opposite z")
    for name in TRACE_NAMES:
        require(omega.contains(t[name]), f"{name} lies in Omega")
    return result


def _neighbour_step(b: Building, J: frozenset) -> tuple[int, int]:
    diagram = b.weyl.diagram
    for i in b.types:
        if i in J:
            continue
        js = sorted(set(diagram.neighbours(i)) & J)
        if js:
            return i, js[0]
    raise NotIrreducible(f"no type outside {sorted(J)} is adjacent to it")


def certify_cr(omega: ConvexChamberSubcomplex, verify: bool = True) -> Verdict | CRFailure:
    """Certify that every simplex of Omega has an opposite in Omega.

    Returns a CR verdict with a witness for every nonempty simplex, or a
    CRFailure listing the unopposed vertices of each type.
    """
    b = omega.building
    if not b.weyl.diagram.is_irreducible():
        raise NotIrreducible(f"diagram {b.weyl.diagram} is reducible")
    if not omega.chambers:
        raise NotChamberComplex("Omega has no chambers")
    I = frozenset(b.types)
    k = next((k for k in b.types if hypothesis_holds(omega, k)), None)
    if k is None:
        return CRFailure({t: unopposed(omega, {t}) for t in b.types})

    J = frozenset({k})
    opposite = {v: opposite_in_omega(omega, v) for v in omega.simplices_of_type(J)}
    traces = []
    while J != I:
        i, j = _neighbour_step(b, J)
        for z in omega.simplices_of_type(J | {i}):
            tr: dict = {}
            opposite[z] = build_opposite(omega, z, J, i, j, trace=tr)
            traces.append(tr)
        J = J | {i}

    witness = {}
    for F in omega.simplices():
        c = b.chamber(omega.chambers_containing(F)[0])
        witness[F] = b.face(opposite[c], _sigma(b, F.type))
    if verify:
        for F, G in witness.items():
            if not (omega.contains(G) and b.is_opposite_simplices(F, G)):
                raise TraceAssertionFailed(f"witness {G} for {F} is not an opposite in Omega")
    return Verdict("CR", witness=witness, traces=traces)


def _vertex_for_subspace(b: Building, omega: ConvexChamberSubcomplex, U: Subspace) -> Simplex:
    geom = b.geometry
    t = U.dim
    inside = [c for c in omega.sorted_chambers if geom.subspace(c, t) == U]
    if inside:
        return b.vertex(inside[0], t)
    c = next(c for c in b.chambers if geom.subspace(c, t) == U)
    return b.vertex(c, t)


def _require_geometry(omega, kind):
    geom = omega.building.geometry
    if geom is None or geom.kind != kind:
        raise UnsupportedGeometry(f"centre finder needs a {kind} flag geometry")
    return geom


def find_centre_A(omega: ConvexChamberSubcomplex) -> Simplex:
    """The intersection of all hyperplanes of Omega, as a vertex."""
    geom = _require_geometry(omega, "A")
    b = omega.building
    lonely = unopposed(omega, {1})
    if not lonely:
        raise HypothesisNotMet("every point of Omega has an opposite in Omega")
    n = geom.rank
    hyperplanes = [geom.subspace(h.rep, n) for h in omega.simplices_of_type({n})]
    U = reduce(meet, hyperplanes)
    if not 0 < U.dim < n + 1:
        raise TraceAssertionFailed(f"hyperplane intersection has dimension {U.dim}")
    for v in lonely:
        if not geom.subspace(v.rep, 1) <= U:
            raise TraceAssertionFailed(f"unopposed point {v} is not in every hyperplane")
    return _vertex_for_subspace(b, omega, U)


def find_centre_polar(omega: ConvexChamberSubcomplex) -> Simplex:
    """The span of the unopposed points of Omega, which must be totally isotropic."""
    geom = _require_geometry(omega, "C2")
    b = omega.building
    lonely = unopposed(omega, {1})
    if not lonely:
        raise HypothesisNotMet("every point of Omega has an opposite in Omega")
    U = reduce(span_join, [geom.subspace(v.rep, 1) for v in lonely])
    if not is_totally_isotropic(U) or U.dim > 2:
        raise IsotropyViolated(f"span of unopposed points {U!r} is not totally isotropic")
    return _vertex_for_subspace(b, omega, U)


def _fixes(b: Building, perm: np.ndarray, s: Simplex) -> bool:
    return b.simplex(int(perm[s.rep]), s.type) == s


def classify(omega: ConvexChamberSubcomplex, seed: int = 0) -> Verdict:
    """Decide between complete reducibility and a centre, with evidence."""
    b = omega.building
    res = certify_cr(omega)
    if isinstance(res, Verdict):
        return res
    geom = b.geometry
    if geom is None:
        return Verdict("Inconclusive", unopposed=res.unopposed,
                       reason="no centre finder for thin buildings")
    if geom.kind == "A":
        centre = find_centre_A(omega)
    elif geom.kind == "C2":
        centre = find_centre_polar(omega)
    else:
        raise UnsupportedGeometry(geom.kind)

    autos = geom.automorphisms(seed=seed)
    members = np.array(omega.sorted_chambers)
    evidence = []
    stabilizing = (np.sort(autos.stack[:, members], axis=1) == members).all(axis=1)
    for k in np.nonzero(stabilizing)[0]:
        perm = autos.perms[k]
        evidence.append({"matrix": format_matrix(autos.matrices[k]), "fixes_centre": _fixes(b, perm, centre)})
    verdict = Verdict("Centre", centre=centre, centre_in_omega=omega.contains(centre),
                      evidence=evidence, evidence_exhaustive=autos.exhaustive,
                      unopposed=res.unopposed)
    problems = []
    if not verdict.centre_in_omega:
        problems.append("centre simplex is not a simplex of Omega")
    if not all(e["fixes_centre"] for e in evidence):
        problems.append("a stabilizing automorphism moves the centre")
    if problems:
        verdict.kind = "Inconclusive"
        verdict.reason = "; ".join(problems)
    return verdict
