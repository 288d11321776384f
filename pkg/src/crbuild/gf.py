"""
Exact linear algebra over small prime fields and the flag geometries that
realise thick buildings of type A_n (projective spaces) and C_2 (the
symplectic generalized quadrangle W(p)).

Vectors are tuples of ints in range(p). A subspace is stored by its reduced
row-echelon basis, so equality of subspaces is equality of representations.
Matrices act on column vectors: v -> g v.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .errors import AmbientMismatch, FormNotPreserved, NotPrime, Singular, SizeLimit

PRIMES = (2, 3, 5, 7)
MAX_FLAGS = 5000

Vector = tuple[int, ...]
Matrix = tuple[Vector, ...]


def check_prime(p: int):
    if p not in PRIMES:
        raise NotPrime(f"p = {p} is not a supported prime {PRIMES}")


def rref(rows, p: int) -> tuple[int, Matrix]:
    """Reduced row-echelon form over F_p, zero rows dropped.

    >>> rref([(1, 1, 0), (0, 1, 1), (1, 0, 1)], 2)
    (2, ((1, 0, 1), (0, 1, 1)))
    """
    check_prime(p)
    mat = [[x % p for x in row] for row in rows]
    if not mat:
        return 0, ()
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        pivot = next((k for k in range(r, len(mat)) if mat[k][c]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = pow(mat[r][c], p - 2, p)
        mat[r] = [x * inv % p for x in mat[r]]
        for k in range(len(mat)):
            if k != r and mat[k][c]:
                f = mat[k][c]
                mat[k] = [(x - f * y) % p for x, y in zip(mat[k], mat[r])]
        r += 1
        if r == len(mat):
            break
    return r, tuple(tuple(row) for row in mat[:r])


def mat_mul(a: Matrix, b: Matrix, p: int) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) % p for col in cols) for row in a)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class Subspace:
    p: int
    ambient_dim: int
    basis: Matrix

    @classmethod
    def span(cls, vectors, p: int, ambient_dim: int) -> "Subspace":
        vectors = list(vectors)
        for v in vectors:
            if len(v) != ambient_dim:
                raise AmbientMismatch(f"vector {v} not in F_{p}^{ambient_dim}")
        _, basis = rref(vectors, p)
        return cls(p, ambient_dim, basis)

    @classmethod
    def zero(cls, p: int, ambient_dim: int) -> "Subspace":
        return cls(p, ambient_dim, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains_vector(self, v) -> bool:
        return rref(self.basis + (tuple(v),), self.p)[0] == self.dim

    def __le__(self, other: "Subspace") -> bool:  # type: ignore[override]
        _check_ambient(self, other)
        return span_join(self, other).dim == other.dim

    def vectors(self):
        """All vectors of the subspace, the zero vector included."""
        for coeffs in product(range(self.p), repeat=self.dim):
            yield tuple(
                sum(c * row[k] for c, row in zip(coeffs, self.basis)) % self.p
                for k in range(self.ambient_dim)
            )

    def serialize(self) -> list[str]:
        return ["".join(str(x) for x in row) for row in self.basis]

    @classmethod
    def deserialize(cls, rows: list[str], p: int, ambient_dim: int) -> "Subspace":
        return cls.span([tuple(int(ch) for ch in row) for row in rows], p, ambient_dim)

    def __repr__(self):
        return "<" + ",".join(self.serialize()) + ">"


def _check_ambient(u: Subspace, v: Subspace):
    if u.p != v.p or u.ambient_dim != v.ambient_dim:
        raise AmbientMismatch(f"F_{u.p}^{u.ambient_dim} vs F_{v.p}^{v.ambient_dim}")


def span_join(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    return Subspace.span(u.basis + v.basis, u.p, u.ambient_dim)


def annihilator(u: Subspace) -> Subspace:
    """{x : x . b = 0 for every basis row b}, for the standard dot product."""
    n, p = u.ambient_dim, u.p
    pivots = []
    for row in u.basis:
        pivots.append(next(k for k, x in enumerate(row) if x))
    free = [k for k in range(n) if k not in pivots]
    vecs = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for row, pc in zip(u.basis, pivots):
            v[pc] = (-row[f]) % p
        vecs.append(tuple(v))
    return Subspace.span(vecs, p, n)


def meet(u: Subspace, v: Subspace) -> Subspace:
    """Intersection, computed as the annihilator of the sum of annihilators."""
    _check_ambient(u, v)
    return annihilator(span_join(annihilator(u), annihilator(v)))


def subspaces(n: int, k: int, p: int) -> list[Subspace]:
    """All k-dimensional subspaces of F_p^n, by enumerating echelon shapes."""
    check_prime(p)
    out = []
    for pivots in combinations(range(n), k):
        slots = [(r, c) for r in range(k) for c in range(n) if c > pivots[r] and c not in pivots]
        for values in product(range(p), repeat=len(slots)):
            rows = [[0] * n for _ in range(k)]
            for r, c in enumerate(pivots):
                rows[r][c] = 1
            for (r, c), x in zip(slots, values):
                rows[r][c] = x
            out.append(Subspace(p, n, tuple(tuple(r) for r in rows)))
    return sorted(out, key=lambda s: s.basis)


@dataclass(frozen=True)
class Flag:
    """A chain of subspaces V_1 < V_2 < ...; chain[k] is the vertex of type k + 1."""

    chain: tuple[Subspace, ...]

    def __post_init__(self):
        for a, b in zip(self.chain, self.chain[1:]):
            if not (a.dim < b.dim and a <= b):
                raise ValueError(f"not a flag: {a!r} !< {b!r}")

    def serialize(self) -> list[list[str]]:
        return [s.serialize() for s in self.chain]

    def key(self) -> str:
        return "|".join(",".join(s.serialize()) for s in self.chain)

    @classmethod
    def deserialize(cls, data, p: int, ambient_dim: int) -> "Flag":
        return cls(tuple(Subspace.deserialize(rows, p, ambient_dim) for rows in data))

    def __repr__(self):
        return "(" + ", ".join(repr(s) for s in self.chain) + ")"


FullFlag = Flag


def count_flags_A(n: int, p: int) -> int:
    total = 1
    for k in range(1, n + 2):
        total *= (p**k - 1) // (p - 1)
    return total


def enumerate_flags_A(n: int, p: int) -> list[Flag]:
    """All complete flags of F_p^(n+1), sorted by serialization."""
    check_prime(p)
    if n < 1 or count_flags_A(n, p) > MAX_FLAGS:
        raise SizeLimit(f"A_{n}({p}) flag geometry is outside the supported range")
    levels = [subspaces(n + 1, k, p) for k in range(1, n + 1)]
    chains: list[tuple[Subspace, ...]] = [(v,) for v in levels[0]]
    for level in levels[1:]:
        chains = [c + (w,) for c in chains for w in level if c[-1] <= w]
    return sorted((Flag(c) for c in chains), key=Flag.key)


# symplectic form <x,y> = x1 y2 - x2 y1 + x3 y4 - x4 y3 on F_p^4
SYMPLECTIC_GRAM: Matrix = (
    (0, 1, 0, 0),
    (-1, 0, 0, 0),
    (0, 0, 0, 1),
    (0, 0, -1, 0),
)


def symplectic_form(x, y, p: int) -> int:
    return (x[0] * y[1] - x[1] * y[0] + x[2] * y[3] - x[3] * y[2]) % p


def is_totally_isotropic(u: Subspace) -> bool:
    return all(symplectic_form(a, b, u.p) == 0 for a in u.basis for b in u.basis)


@dataclass(frozen=True)
class SymplecticGeometry:
    p: int
    points: tuple[Subspace, ...]
    lines: tuple[Subspace, ...]
    flags: tuple[Flag, ...]

    def form(self, x, y) -> int:
        return symplectic_form(x, y, self.p)

    def lines_through(self, point: Subspace) -> list[Subspace]:
        return [line for line in self.lines if point <= line]


def enumerate_flags_C2(p: int) -> SymplecticGeometry:
    """Points, totally isotropic lines and incident point-line flags of W(p)."""
    check_prime(p)
    if (p**2 + 1) * (p + 1) ** 2 > MAX_FLAGS:
        raise SizeLimit(f"C_2({p}) flag geometry is outside the supported range")
    points = tuple(subspaces(4, 1, p))
    lines = tuple(line for line in subspaces(4, 2, p) if is_totally_isotropic(line))
    flags = sorted(
        (Flag((pt, line)) for line in lines for pt in points if pt <= line), key=Flag.key
    )
    return SymplecticGeometry(p, points, lines, tuple(flags))


def is_invertible(g: Matrix, p: int) -> bool:
    return rref(g, p)[0] == len(g)


def form_multiplier(g: Matrix, p: int) -> int | None:
    """The scalar lam with g^T J g = lam J, or None if g is not a similitude."""
    gram = tuple(tuple(x % p for x in row) for row in SYMPLECTIC_GRAM)
    lhs = mat_mul(mat_mul(transpose(g), gram, p), g, p)
    lam = lhs[0][1]
    if lam == 0:
        return None
    if lhs != tuple(tuple(lam * x % p for x in row) for row in gram):
        return None
    return lam


def apply_to_subspace(u: Subspace, g: Matrix) -> Subspace:
    # rows b map to b g^T
    return Subspace.span(mat_mul(u.basis, transpose(g), u.p) if u.basis else (), u.p, u.ambient_dim)


def apply_matrix(flag: Flag, g: Matrix, *, symplectic: bool = False) -> Flag:
    """Image of a flag under v -> g v; checks invertibility (and the form, if asked)."""
    p = flag.chain[0].p
    g = tuple(tuple(x % p for x in row) for row in g)
    if not is_invertible(g, p):
        raise Singular("matrix is not invertible")
    if symplectic and form_multiplier(g, p) is None:
        raise FormNotPreserved("matrix does not preserve the symplectic form up to a scalar")
    return Flag(tuple(apply_to_subspace(u, g) for u in flag.chain))


def parse_matrix(text: str, p: int) -> Matrix:
    """Parse ``"010,100,001"`` (rows of digits) into a matrix."""
    rows = [r.strip() for r in text.split(",") if r.strip()]
    mat = tuple(tuple(int(ch) % p for ch in row) for row in rows)
    if not mat or any(len(r) != len(mat) for r in mat):
        raise ValueError(f"not a square matrix: {text!r}")
    return mat


def format_matrix(g: Matrix) -> str:
    return ",".join("".join(str(x) for x in row) for row in g)
