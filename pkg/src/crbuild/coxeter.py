"""
Finite Coxeter groups of types A_n, B_n/C_n, D_n and I2(m).

Each group is realised as a faithful permutation group on a small point set
(one-line notation), so elements have an exact, hashable canonical form.
The group is enumerated breadth-first from the identity under right
multiplication by the simple reflections, which gives every element a
reduced word and its length at the same time.

Generators are indexed 1..n with Bourbaki labels; I2(m) uses {1, 2}.

>>> g = build_weyl(parse_diagram("A2"))
>>> g.order, g.longest.length
(6, 3)
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from math import factorial

from .errors import BadGenerator, BadType, SizeLimit, UnsupportedDiagram

MAX_ORDER = 10**5

Perm = tuple[int, ...]


@dataclass(frozen=True)
class CoxeterDiagram:
    label: str  # one of A, B, C, D, I2
    rank: int
    coxeter_matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = self.coxeter_matrix
        n = self.rank
        if len(m) != n or any(len(row) != n for row in m):
            raise UnsupportedDiagram(f"coxeter matrix is not {n}x{n}")
        for i in range(n):
            if m[i][i] != 1:
                raise UnsupportedDiagram("coxeter matrix diagonal must be 1")
            for j in range(n):
                if m[i][j] != m[j][i] or (i != j and m[i][j] < 2):
                    raise UnsupportedDiagram("coxeter matrix must be symmetric with entries >= 2")

    @property
    def types(self) -> tuple[int, ...]:
        return tuple(range(1, self.rank + 1))

    def m(self, i: int, j: int) -> int:
        return self.coxeter_matrix[i - 1][j - 1]

    def neighbours(self, i: int) -> list[int]:
        return [j for j in self.types if j != i and self.m(i, j) >= 3]

    def is_irreducible(self) -> bool:
        seen = {1}
        todo = [1]
        while todo:
            i = todo.pop()
            for j in self.neighbours(i):
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
        return len(seen) == self.rank

    def __str__(self):
        if self.label == "I2":
            return f"I2:{self.coxeter_matrix[0][1]}"
        return f"{self.label}{self.rank}"


def _matrix(n: int, bonds: dict[tuple[int, int], int]) -> tuple[tuple[int, ...], ...]:
    rows = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
    for (i, j), v in bonds.items():
        rows[i - 1][j - 1] = rows[j - 1][i - 1] = v
    return tuple(tuple(r) for r in rows)


def make_diagram(label: str, rank: int) -> CoxeterDiagram:
    """Build the Coxeter diagram of a classical family.

    For label "I2" the `rank` argument is the bond label m, not the rank.
    """
    if label == "I2":
        m = rank
        if m < 2:
            raise UnsupportedDiagram("I2(m) needs m >= 2")
        return CoxeterDiagram("I2", 2, _matrix(2, {(1, 2): m}))
    n = rank
    chain = {(i, i + 1): 3 for i in range(1, n)}
    if label == "A":
        if n < 1:
            raise UnsupportedDiagram("A_n needs n >= 1")
        return CoxeterDiagram("A", n, _matrix(n, chain))
    if label in ("B", "C"):
        if n < 2:
            raise UnsupportedDiagram(f"{label}_n needs n >= 2")
        chain[(n - 1, n)] = 4
        return CoxeterDiagram(label, n, _matrix(n, chain))
    if label == "D":
        if n < 4:
            raise UnsupportedDiagram("D_n needs n >= 4")
        del chain[(n - 1, n)]
        chain[(n - 2, n)] = 3
        return CoxeterDiagram("D", n, _matrix(n, chain))
    raise UnsupportedDiagram(f"unknown family {label!r}")


_DIAGRAM_RE = re.compile(r"^\s*(?:(I2):(\d+)|([ABCD])(\d+))\s*$")


def parse_diagram(text: str) -> CoxeterDiagram:
    """Parse strings such as ``A3``, ``C2``, ``D4`` or ``I2:6``."""
    match = _DIAGRAM_RE.match(text)
    if not match:
        raise UnsupportedDiagram(f"cannot parse diagram {text!r}")
    if match.group(1):
        return make_diagram("I2", int(match.group(2)))
    return make_diagram(match.group(3), int(match.group(4)))


def expected_order(d: CoxeterDiagram) -> int:
    n = d.rank
    if d.label == "A":
        return factorial(n + 1)
    if d.label in ("B", "C"):
        return 2**n * factorial(n)
    if d.label == "D":
        return 2 ** (n - 1) * factorial(n)
    return 2 * d.m(1, 2)


def _swap(size: int, *pairs: tuple[int, int]) -> Perm:
    p = list(range(size))
    for a, b in pairs:
        p[a], p[b] = p[b], p[a]
    return tuple(p)


def _generators(d: CoxeterDiagram) -> list[Perm]:
    n = d.rank
    if d.label == "A":
        # permutations of {0..n}
        return [_swap(n + 1, (i - 1, i)) for i in range(1, n + 1)]
    if d.label == "I2":
        # reflections x -> -x and x -> 2 - x of Z/2m
        size = 2 * d.m(1, 2)
        return [
            tuple((-x) % size for x in range(size)),
            tuple((2 - x) % size for x in range(size)),
        ]
    # signed permutations: point k-1 is +e_k, point n+k-1 is -e_k
    size = 2 * n
    gens = [_swap(size, (i - 1, i), (n + i - 1, n + i)) for i in range(1, n)]
    if d.label in ("B", "C"):
        gens.append(_swap(size, (n - 1, 2 * n - 1)))
    else:
        gens.append(_swap(size, (n - 2, 2 * n - 1), (n - 1, 2 * n - 2)))
    return gens


def compose(a: Perm, b: Perm) -> Perm:
    """The product a*b, acting as b first then a."""
    return tuple(a[k] for k in b)


def invert(a: Perm) -> Perm:
    inv = [0] * len(a)
    for k, v in enumerate(a):
        inv[v] = k
    return tuple(inv)


def _order(p: Perm) -> int:
    ident = tuple(range(len(p)))
    q, k = p, 1
    while q != ident:
        q = compose(q, p)
        k += 1
    return k


@dataclass(frozen=True)
class WeylElement:
    perm: Perm
    length: int = field(compare=False)
    word: tuple[int, ...] = field(compare=False)

    def __str__(self):
        if not self.word:
            return "e"
        return "".join(f"s{i}" for i in self.word)


@dataclass(eq=False)
class WeylGroup:
    """A fully enumerated finite Coxeter group.

    Elements are addressed by integer index into `elements`; index 0 is the
    identity and `w0` is the index of the longest element.
    """

    diagram: CoxeterDiagram
    elements: list[WeylElement]
    index: dict[Perm, int]
    # mult[w][i - 1] is the index of w * s_i
    mult: list[tuple[int, ...]]
    w0: int
    opposition: dict[int, int]
    _parabolic: dict[frozenset, int] = field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def types(self) -> tuple[int, ...]:
        return self.diagram.types

    @property
    def identity(self) -> WeylElement:
        return self.elements[0]

    @property
    def longest(self) -> WeylElement:
        return self.elements[self.w0]

    @property
    def lengths(self) -> list[int]:
        return [e.length for e in self.elements]

    def length(self, w: int) -> int:
        return self.elements[w].length

    def idx(self, w: WeylElement) -> int:
        return self.index[w.perm]

    def check_type(self, i: int):
        if i not in self.types:
            raise BadGenerator(f"generator {i} not in {self.types}")

    def check_types(self, J) -> frozenset:
        J = frozenset(J)
        if not J <= set(self.types):
            raise BadType(f"type set {sorted(J)} not contained in {self.types}")
        return J

    def mul_gen(self, w: int, i: int) -> int:
        return self.mult[w][i - 1]

    def multiply(self, w: WeylElement, i: int) -> WeylElement:
        """Return w * s_i."""
        self.check_type(i)
        return self.elements[self.mult[self.idx(w)][i - 1]]

    def mul(self, a: int, b: int) -> int:
        return self.index[compose(self.elements[a].perm, self.elements[b].perm)]

    def inverse(self, a: int) -> int:
        return self.index[invert(self.elements[a].perm)]

    def from_word(self, word) -> int:
        w = 0
        for i in word:
            self.check_type(i)
            w = self.mult[w][i - 1]
        return w

    def generator(self, i: int) -> int:
        self.check_type(i)
        return self.mult[0][i - 1]

    def parabolic_longest(self, J) -> WeylElement:
        return self.elements[self.longest_index(J)]

    def longest_index(self, J) -> int:
        """Index of the longest element of the parabolic subgroup W_J."""
        J = self.check_types(J)
        if J not in self._parabolic:
            seen = {0}
            todo = deque([0])
            while todo:
                w = todo.popleft()
                for i in J:
                    v = self.mult[w][i - 1]
                    if v not in seen:
                        seen.add(v)
                        todo.append(v)
            self._parabolic[J] = max(seen, key=lambda v: self.elements[v].length)
        return self._parabolic[J]

    def parabolic_opposition(self, J) -> dict[int, int]:
        """The involution of J induced by conjugation with the longest element of W_J."""
        J = self.check_types(J)
        w = self.longest_index(J)
        return {i: self._conjugate_generator(w, i) for i in J}

    def _conjugate_generator(self, w: int, i: int) -> int:
        c = self.mul(self.mul(w, self.generator(i)), w)
        for j in self.types:
            if self.generator(j) == c:
                return j
        raise AssertionError(f"w s_{i} w^-1 is not a simple reflection")


def build_weyl(diagram: CoxeterDiagram) -> WeylGroup:
    if diagram.label not in ("A", "B", "C", "D", "I2"):
        raise UnsupportedDiagram(str(diagram))
    if expected_order(diagram) > MAX_ORDER:
        raise SizeLimit(f"|W({diagram})| = {expected_order(diagram)} exceeds {MAX_ORDER}")
    gens = _generators(diagram)
    for i in diagram.types:
        for j in diagram.types:
            if i < j and _order(compose(gens[i - 1], gens[j - 1])) != diagram.m(i, j):
                raise AssertionError(f"generators of {diagram} violate the braid relation ({i},{j})")

    ident = tuple(range(len(gens[0])))
    elements = [WeylElement(ident, 0, ())]
    index = {ident: 0}
    mult: list[list[int]] = [[]]
    todo = deque([0])
    while todo:
        w = todo.popleft()
        elt = elements[w]
        for i, s in enumerate(gens, start=1):
            p = compose(elt.perm, s)
            v = index.get(p)
            if v is None:
                v = len(elements)
                index[p] = v
                elements.append(WeylElement(p, elt.length + 1, elt.word + (i,)))
                mult.append([])
                todo.append(v)
                if len(elements) > MAX_ORDER:
                    raise SizeLimit(f"enumeration of W({diagram}) exceeded {MAX_ORDER}")
            mult[w].append(v)

    w0 = max(range(len(elements)), key=lambda v: elements[v].length)
    group = WeylGroup(diagram, elements, index, [tuple(r) for r in mult], w0, {})
    group.opposition = {i: group._conjugate_generator(w0, i) for i in diagram.types}
    return group


def opposition_involution(g: WeylGroup) -> dict[int, int]:
    return dict(g.opposition)


def parabolic_longest(g: WeylGroup, J) -> WeylElement:
    return g.parabolic_longest(J)
