"""
Exhaustive (or seeded-sampled) property suites over desk-scale buildings.

Each suite returns a SuiteResult counting checked instances and failures;
the selftest command and the acceptance tests both drive these.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .building import Building
from .convexity import ConvexChamberSubcomplex, is_convex
from .coxeter import WeylGroup
from .crengine import Verdict, build_opposite, certify_cr, classify, unopposed
from .errors import BuildingError
from .families import apartments, subcomplex_family
from .gf import is_totally_isotropic, meet, span_join, symplectic_form

MAX_FAILURES_KEPT = 5


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    total: int = 0
    failures: list[str] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.total > 0 and self.passed == self.total

    def check(self, cond: bool, what) -> bool:
        self.total += 1
        if cond:
            self.passed += 1
        elif len(self.failures) < MAX_FAILURES_KEPT:
            self.failures.append(what() if callable(what) else str(what))
        return cond

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = "".join(f" {k}={v}" for k, v in sorted(self.notes.items()))
        return f"{status} {self.name}: {self.passed}/{self.total}{extra}"


def coxeter_suite(g: WeylGroup) -> SuiteResult:
    r = SuiteResult(f"coxeter[{g.diagram}]")
    w0 = g.w0
    L = g.longest.length
    for w in range(g.order):
        r.check(g.length(w) == L - g.length(g.mul(w0, w)), lambda: f"duality fails at {g.elements[w]}")
    sigma = g.opposition
    for i in g.types:
        r.check(sigma[sigma[i]] == i, f"sigma not an involution at {i}")
        for j in g.types:
            r.check(g.diagram.m(sigma[i], sigma[j]) == g.diagram.m(i, j), f"sigma not a diagram map at {i},{j}")
    r.check(g.mul(w0, w0) == 0, "w0 is not an involution")
    return r


def _graph_distances(b: Building, x: int) -> np.ndarray:
    dist = np.full(b.n, -1, dtype=np.int64)
    dist[x] = 0
    todo = deque([x])
    while todo:
        y = todo.popleft()
        for _, z in b.neighbours(y):
            if dist[z] < 0:
                dist[z] = dist[y] + 1
                todo.append(z)
    return dist


def metric_suite(b: Building, name: str, sources=None) -> SuiteResult:
    """delta symmetry, length = gallery distance, and the gate property of every panel."""
    r = SuiteResult(f"metric[{name}]")
    g = b.weyl
    sources = b.chambers if sources is None else sources
    for x in sources:
        row = b.delta_row(x)
        r.check(np.array_equal(b.dist_row(x), _graph_distances(b, x)),
                f"length of delta differs from gallery distance from {x}")
        for y in range(b.n):
            r.check(b.delta(y, x) == g.inverse(int(row[y])), f"delta({y},{x}) != delta({x},{y})^-1")
        d = b.dist_row(x)
        for i in b.types:
            for block in b.panels[i]:
                vals = d[list(block)]
                r.check((vals == vals.min()).sum() == 1, f"panel {block} has no unique gate from {x}")
    return r


def gate_suite(b: Building, name: str, sources=None) -> SuiteResult:
    """dist(c, z) = dist(c, proj_R c) + dist(proj_R c, z) for all z in St R."""
    r = SuiteResult(f"gate[{name}]")
    sources = b.chambers if sources is None else sources
    for R in b.all_simplices():
        if len(R.chambers) == 1:
            continue
        members = np.array(R.chambers)
        for c in sources:
            g = b.proj_chamber(R, c)
            lhs = b.dist_row(c)[members]
            rhs = b.dist(c, g) + b.dist_row(g)[members]
            r.check(np.array_equal(lhs, rhs), f"gate of {c} in {R} fails")
    return r


def opposition_suite(b: Building, name: str) -> SuiteResult:
    """Each chamber has q^l(w0) opposites; apartments have |W| chambers and are thin."""
    r = SuiteResult(f"apartments[{name}]")
    counts = {int((b.delta_row(x) == b.w0).sum()) for x in b.chambers}
    r.notes["opposites_per_chamber"] = ",".join(str(c) for c in sorted(counts))
    for x in b.chambers:
        for y in np.nonzero(b.delta_row(x) == b.w0)[0]:
            y = int(y)
            if y < x:
                continue
            hull = set(b.apartment_hull(x, y))
            thin = all(len(hull & set(b.panel(c, i))) == 2 for c in hull for i in b.types)
            r.check(len(hull) == b.weyl.order and thin, f"hull of {x},{y} is not an apartment")
    return r


def _opposite_pairs(b: Building, limit: int | None, seed: int):
    pairs = [(x, int(y)) for x in b.chambers for y in np.nonzero(b.delta_row(x) == b.w0)[0]]
    if limit is not None and len(pairs) > limit:
        pairs = random.Random(seed).sample(pairs, limit)
        pairs.sort()
    return pairs


def lemma_suite(b: Building, name: str, limit: int | None = None, seed: int = 0) -> SuiteResult:
    """Projections of opposite chambers to a simplex of their hull are opposite in its star."""
    r = SuiteResult(f"lemma[{name}]")
    for x, y in _opposite_pairs(b, limit, seed):
        hull = b.apartment_hull(x, y)
        for R in b.all_simplices(hull):
            px, py = b.chamber(b.proj_chamber(R, x)), b.chamber(b.proj_chamber(R, y))
            r.check(b.opposite_in_star(R, px, py), f"x={x} y={y} R={R}")
    return r


def corollary_suite(b: Building, name: str, limit: int | None = None, seed: int = 0) -> SuiteResult:
    """For R, X, Y in an apartment with X opposite Y: projections opposite in St R, or both equal R."""
    r = SuiteResult(f"corollary[{name}]")
    aps = apartments(b)
    if limit is not None and len(aps) > limit:
        aps = sorted(random.Random(seed).sample(aps, limit), key=sorted)
    branch_b = 0
    for sigma in aps:
        simplices = b.all_simplices(sigma)
        opp = [(X, Y) for X in simplices for Y in simplices
               if b.is_opposite_simplices(X, Y, mode="fast")]
        for R in simplices:
            for X, Y in opp:
                pX, pY = b.proj_simplex(R, X), b.proj_simplex(R, Y)
                both_R = pX == R == pY
                branch_b += both_R
                r.check(both_R or b.opposite_in_star(R, pX, pY), f"R={R} X={X} Y={Y}")
    r.notes["trivial_branch"] = branch_b
    return r


def transfer_suite(b: Building, name: str) -> SuiteResult:
    """proj onto an opposite simplex carries St-opposites to opposites in the building."""
    r = SuiteResult(f"transfer[{name}]")
    simplices = b.all_simplices()
    for x1 in simplices:
        star = [s for s in simplices if b.in_star(x1, s)]
        opps = [s for s in simplices if b.is_opposite_simplices(x1, s, mode="fast")]
        for y1 in star:
            partners = [y0 for y0 in star if b.opposite_in_star(x1, y0, y1)]
            for x1o in opps:
                y2 = b.opposite_transfer(x1, x1o, y1)
                for y0 in partners:
                    r.check(b.is_opposite_simplices(y2, y0), f"x1={x1} x1o={x1o} y1={y1} y0={y0}")
    return r


def convexity_suite(b: Building, name: str, family: list[ConvexChamberSubcomplex]) -> SuiteResult:
    """Every family member is interval-closed and closed under projections of its simplices."""
    r = SuiteResult(f"convexity[{name}]")
    for omega in family:
        r.check(is_convex(b, omega.chambers), f"{sorted(omega.chambers)} not convex")
        simplices = omega.simplices()
        for R in simplices:
            for S in simplices:
                r.check(omega.contains(b.proj_simplex(R, S)), f"proj of {S} to {R} leaves Omega")
    return r


def theorem_suite(b: Building, name: str, family: list[ConvexChamberSubcomplex]) -> SuiteResult:
    """Whenever some vertex type is fully opposable, certification succeeds with a verified witness."""
    r = SuiteResult(f"theorem[{name}]")
    certified = 0
    for omega in family:
        hyp = any(not unopposed(omega, {k}) for k in b.types)
        if not hyp:
            continue
        try:
            v = certify_cr(omega)
        except BuildingError as exc:
            r.check(False, f"{sorted(omega.chambers)}: {type(exc).__name__}: {exc}")
            continue
        ok = (isinstance(v, Verdict) and v.kind == "CR"
              and set(v.witness) == set(omega.simplices())
              and all(omega.contains(w) and b.is_opposite_simplices(s, w) for s, w in v.witness.items()))
        certified += ok
        r.check(ok, f"{sorted(omega.chambers)}: witness map not verified")
    r.notes["certified"] = certified
    return r


def construction_suite(b: Building, name: str, omega: ConvexChamberSubcomplex) -> SuiteResult:
    """build_opposite on every admissible (z, J, i, j) of Omega, checked in both opposition modes."""
    r = SuiteResult(f"construction[{name}]")
    diagram = b.weyl.diagram
    types = b.types
    for k in range(1, len(types)):
        for J in combinations(types, k):
            J = frozenset(J)
            if unopposed(omega, J):
                continue
            for i in types:
                if i in J:
                    continue
                for j in sorted(set(diagram.neighbours(i)) & J):
                    for z in omega.simplices_of_type(J | {i}):
                        try:
                            w = build_opposite(omega, z, J, i, j)
                        except BuildingError as exc:
                            r.check(False, f"z={z} J={sorted(J)} i={i} j={j}: {exc}")
                            continue
                        r.check(omega.contains(w)
                                and b.is_opposite_simplices(z, w)
                                and b.is_opposite_simplices(z, w, mode="fast"),
                                f"z={z} J={sorted(J)} i={i} j={j}")
    return r


def centre_suite(b: Building, name: str, family: list[ConvexChamberSubcomplex], seed: int = 0) -> SuiteResult:
    """Centre verdicts: in Omega, fixed by stabilizing automorphisms, equal to the geometric construction."""
    r = SuiteResult(f"centre[{name}]")
    geom = b.geometry
    inconclusive = 0
    outside = 0
    for omega in family:
        v = classify(omega, seed=seed)
        inconclusive += v.kind == "Inconclusive"
        r.check(v.kind in ("CR", "Centre"), f"{sorted(omega.chambers)}: {v.kind} {v.reason}")
        if v.centre is None:
            continue
        c = v.centre
        outside += not v.centre_in_omega
        r.check(v.centre_in_omega, f"{sorted(omega.chambers)}: centre {c} not in Omega")
        r.check(all(e["fixes_centre"] for e in v.evidence), f"{sorted(omega.chambers)}: centre moved")
        U = geom.subspace(c.rep, min(c.type))
        points = [geom.subspace(s.rep, 1) for s in unopposed(omega, {1})]
        if geom.kind == "A":
            hyper = [geom.subspace(h.rep, geom.rank) for h in omega.simplices_of_type({geom.rank})]
            expected = hyper[0]
            for h in hyper[1:]:
                expected = meet(expected, h)
        else:
            expected = points[0]
            for q in points[1:]:
                expected = span_join(expected, q)
            r.check(is_totally_isotropic(expected), f"span {expected!r} not isotropic")
            # a point has no opposite in Omega iff it is collinear with every point of Omega
            for s in omega.simplices_of_type({1}):
                q = geom.subspace(s.rep, 1)
                collinear = all(_collinear(q, geom.subspace(t.rep, 1)) for t in omega.simplices_of_type({1}))
                r.check(collinear == (q in points), f"collinearity criterion fails at {q!r}")
        r.check(len(c.type) == 1 and U == expected, f"{sorted(omega.chambers)}: centre {U!r} != {expected!r}")
    r.notes["inconclusive"] = inconclusive
    r.notes["centre_outside_omega"] = outside
    return r


def _collinear(a, b) -> bool:
    return symplectic_form(a.basis[0], b.basis[0], a.p) == 0


def axiom_suite(b: Building, name: str) -> SuiteResult:
    r = SuiteResult(f"axioms[{name}]")
    try:
        b.validate()
        r.check(True, "")
    except BuildingError as exc:
        r.check(False, f"{type(exc).__name__}: {exc}")
    return r
