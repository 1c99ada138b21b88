"""Exact linear algebra over the rationals.

Vectors are sequences of :class:`fractions.Fraction` (ints are accepted and
coerced).  Subspaces are kept in reduced row echelon form so that equality of
subspaces is plain equality of their canonical bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "Matrix",
    "Subspace",
    "canonical_basis",
    "membership",
    "orthogonal_complement",
    "preimage",
    "intersect",
    "rank",
    "nullspace",
    "homology_ranks",
    "sparse_homology_ranks",
    "format_rational",
    "parse_rational",
]


def format_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s.strip())
    raise ValueError(f"not a rational: {s!r}")


class Matrix:
    """Dense rational matrix, immutable, row-major."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(([int(i == j) for j in range(n)] for i in range(n)), n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "Matrix":
        return cls(([0] * n for _ in range(m)), n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(x for r in self.rows for x in r)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self.rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"

    def __neg__(self) -> "Matrix":
        return Matrix(([-x for x in r] for r in self.rows), self.ncols)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(
            ([a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)), self.ncols
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append([sum((a * c[k] for k, a in nz), Fraction(0)) for c in cols])
        return Matrix(out, other.ncols)

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        """Matrix times column vector."""
        if len(v) != self.ncols:
            raise ValueError("dimension mismatch")
        v = [Fraction(x) for x in v]
        return tuple(sum((a * b for a, b in zip(r, v) if a), Fraction(0)) for r in self.rows)

    @property
    def T(self) -> "Matrix":
        return Matrix(zip(*self.rows), self.nrows) if self.nrows else Matrix.zeros(self.ncols, 0)

    def kron(self, other: "Matrix") -> "Matrix":
        out = []
        for r in self.rows:
            for s in other.rows:
                out.append([a * b for a in r for b in s])
        return Matrix(out, self.ncols * other.ncols)

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def determinant(self) -> Fraction:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        a = [list(r) for r in self.rows]
        n = self.nrows
        det = Fraction(1)
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c]), None)
            if p is None:
                return Fraction(0)
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            det *= a[c][c]
            for r in range(c + 1, n):
                if a[r][c]:
                    f = a[r][c] / a[c][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return det


def _rref_sparse(rows: Iterable[dict[int, Fraction]]) -> list[dict[int, Fraction]]:
    """Reduced row echelon form of sparse rows; returns nonzero rows sorted by pivot."""
    pivots: dict[int, dict[int, Fraction]] = {}
    for row in rows:
        row = {k: v for k, v in row.items() if v}
        # pivot rows are zero on the other pivot columns, so one pass suffices
        for c in [c for c in row if c in pivots]:
            f = row[c]
            for k, v in pivots[c].items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        if not row:
            continue
        p = min(row)
        inv = 1 / row[p]
        row = {k: v * inv for k, v in row.items()}
        # clear new pivot column in the others
        for q, other in pivots.items():
            f = other.get(p)
            if f:
                for k, v in row.items():
                    nv = other.get(k, 0) - f * v
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
        pivots[p] = row
    return [pivots[p] for p in sorted(pivots)]


def _to_sparse(v: Sequence) -> dict[int, Fraction]:
    return {i: Fraction(x) for i, x in enumerate(v) if x}


def rank(m: Matrix | Sequence[Sequence]) -> int:
    rows = m.rows if isinstance(m, Matrix) else m
    return len(_rref_sparse(_to_sparse(r) for r in rows))


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^ambient_dim with its RREF basis."""

    ambient_dim: int
    basis: tuple[tuple[Fraction, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(r) if x) for r in self.basis)

    def matrix(self) -> Matrix:
        return Matrix(self.basis, self.ambient_dim)

    def __contains__(self, v) -> bool:
        return membership(v, self)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("dimension mismatch")
        return canonical_basis(self.basis + other.basis, self.ambient_dim)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return canonical_basis(Matrix.identity(n).rows, n)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def canonical_basis(vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
    vecs = [tuple(v) for v in vectors]
    for v in vecs:
        if len(v) != ambient_dim:
            raise ValueError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
    rows = _rref_sparse(_to_sparse(v) for v in vecs)
    basis = tuple(tuple(r.get(i, Fraction(0)) for i in range(ambient_dim)) for r in rows)
    return Subspace(ambient_dim, basis)


def membership(v: Sequence, S: Subspace) -> bool:
    if len(v) != S.ambient_dim:
        raise ValueError("dimension mismatch")
    w = [Fraction(x) for x in v]
    for row, p in zip(S.basis, S.pivots):
        f = w[p]
        if f:
            w = [a - f * b for a, b in zip(w, row)]
    return not any(w)


def nullspace(m: Matrix) -> Subspace:
    """{v : m v = 0} as a subspace of Q^ncols."""
    n = m.ncols
    rows = _rref_sparse(_to_sparse(r) for r in m.rows)
    piv = {min(r): r for r in rows}
    free = [c for c in range(n) if c not in piv]
    vecs = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for p, r in piv.items():
            v[p] = -r.get(f, 0)
        vecs.append(v)
    return canonical_basis(vecs, n)


def orthogonal_complement(S: Subspace, pairing: Matrix | None = None) -> Subspace:
    """{w : <w, s> = w^T G s = 0 for all s in S}; the identity pairing when none is given."""
    n = S.ambient_dim
    if pairing is None:
        constraints = list(S.basis)
    else:
        if pairing.shape != (n, n):
            raise ValueError(f"pairing of shape {pairing.shape} on ambient dimension {n}")
        if pairing.determinant() == 0:
            raise ValueError("degenerate pairing")
        # w^T G s = 0  <=>  w . (G s) = 0
        constraints = [pairing.apply(s) for s in S.basis]
    return nullspace(Matrix(constraints, n))


def preimage(map: Matrix, S: Subspace) -> Subspace:
    """{v : map v in S}."""
    if map.nrows != S.ambient_dim:
        raise ValueError("map target does not match subspace ambient dimension")
    ann = orthogonal_complement(S)
    if ann.dim == 0:
        return Subspace.full(map.ncols)
    return nullspace(ann.matrix() @ map)


def intersect(A: Subspace, B: Subspace) -> Subspace:
    if A.ambient_dim != B.ambient_dim:
        raise ValueError("dimension mismatch")
    return orthogonal_complement(orthogonal_complement(A) + orthogonal_complement(B))


def homology_ranks(boundaries: Sequence[Matrix], check: bool = True) -> dict[int, int]:
    """Reduced Betti numbers of an augmented chain complex.

    ``boundaries[0]`` is the augmentation C_0 -> C_{-1} and ``boundaries[d]``
    is the boundary C_d -> C_{d-1}.  Returns ``{degree: rank}`` for degrees
    -1 .. len(boundaries) - 1.
    """
    if not boundaries:
        raise ValueError("at least the augmentation map is required")
    for d in range(len(boundaries) - 1):
        a, b = boundaries[d], boundaries[d + 1]
        if a.ncols != b.nrows:
            raise ValueError(f"boundary maps {d} and {d + 1} are not composable")
        if check and not (a @ b).is_zero():
            raise ValueError(f"boundary maps {d} and {d + 1} do not compose to zero")
    ranks = [rank(b) for b in boundaries] + [0]
    betti = {-1: boundaries[0].nrows - ranks[0]}
    for d in range(len(boundaries)):
        betti[d] = boundaries[d].ncols - ranks[d] - ranks[d + 1]
    return betti


def sparse_homology_ranks(dims: Sequence[int], images: Sequence[Sequence[dict]]) -> dict[int, int]:
    """Reduced Betti numbers from sparse boundary data.

    ``dims[d + 1]`` is dim C_d for d = -1, 0, ...; ``images[d]`` lists, for each
    basis element of C_d, its boundary as a sparse dict over the basis of C_{d-1}.
    """
    if len(dims) != len(images) + 1:
        raise ValueError("need one image list per degree >= 0")
    for d, rows in enumerate(images):
        if len(rows) != dims[d + 1]:
            raise ValueError(f"degree {d} has {len(rows)} images for dimension {dims[d + 1]}")
    ranks = [len(_rref_sparse({k: Fraction(v) for k, v in r.items()} for r in rows)) for rows in images]
    ranks.append(0)
    betti = {-1: dims[0] - ranks[0]}
    for d in range(len(images)):
        betti[d] = dims[d + 1] - ranks[d] - ranks[d + 1]
    return betti
