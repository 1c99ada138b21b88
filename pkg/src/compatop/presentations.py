"""Binary quadratic operads presented by generators and arity-3 relations.

The weight-2 part of the free operad on s binary generators has the basis of
decorated trees ``(shape, top, bottom)`` where ``shape`` is one of the three
leaf labelings (1,2,3), (2,3,1), (3,1,2).  The tree with leaves (a,b,c), top
generator i and bottom generator j is the composite ``j(i(a, b), c)``.  Its
coordinate index is ``shape * s * s + top * s + bottom`` (generators 0-based).

Row i of a ``swap_action`` matrix holds the coordinates of ``e_i . (12)``, so
``e_i(x, y) = sum_k swap[i][k] e_k(y, x)``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from .linalg import (
    Matrix,
    Subspace,
    canonical_basis,
    format_rational,
    membership,
    nullspace,
    orthogonal_complement,
    parse_rational,
    preimage,
)
from .permutations import Permutation

SHAPES = ((1, 2, 3), (2, 3, 1), (3, 1, 2))
SHAPE_NAMES = ("123", "231", "312")
# canonical shape indexed by its bottom leaf
_SHAPE_OF_BOTTOM = {3: 0, 1: 1, 2: 2}

S3 = tuple(Permutation.all(3))


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSpace:
    swap_action: Matrix

    def __post_init__(self):
        if self.swap_action.nrows != self.swap_action.ncols:
            raise PresentationError("swap_action must be square")
        if self.swap_action.nrows < 1:
            raise PresentationError("at least one generator is required")

    @classmethod
    def of(cls, swap) -> "GeneratorSpace":
        return cls(swap if isinstance(swap, Matrix) else Matrix(swap))

    @property
    def s(self) -> int:
        return self.swap_action.nrows

    @property
    def tree_dim(self) -> int:
        return 3 * self.s * self.s

    def is_involution(self) -> bool:
        return self.swap_action @ self.swap_action == Matrix.identity(self.s)

    def dual(self) -> "GeneratorSpace":
        # linear dual twisted by the sign representation
        return GeneratorSpace(-self.swap_action.T)


class TreeMonomial(NamedTuple):
    shape: int
    top: int
    bottom: int

    def index(self, s: int) -> int:
        return self.shape * s * s + self.top * s + self.bottom

    @classmethod
    def from_index(cls, idx: int, s: int) -> "TreeMonomial":
        shape, rest = divmod(idx, s * s)
        top, bottom = divmod(rest, s)
        return cls(shape, top, bottom)

    def __str__(self):
        return f"{SHAPE_NAMES[self.shape]}[{self.top + 1}/{self.bottom + 1}]"


@dataclass(frozen=True)
class TreeVector:
    """A vector of the 3s^2-dimensional tree space."""

    s: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "coeffs", {m: Fraction(c) for m, c in self.coeffs.items() if c}
        )

    @classmethod
    def monomial(cls, s: int, shape: int, top: int, bottom: int, coeff=1) -> "TreeVector":
        return cls(s, {TreeMonomial(shape, top, bottom): coeff})

    @classmethod
    def from_dense(cls, s: int, v: Sequence) -> "TreeVector":
        return cls(s, {TreeMonomial.from_index(i, s): c for i, c in enumerate(v) if c})

    def dense(self) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * (3 * self.s * self.s)
        for m, c in self.coeffs.items():
            out[m.index(self.s)] = c
        return tuple(out)

    def __add__(self, other: "TreeVector") -> "TreeVector":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return TreeVector(self.s, out)

    def __rmul__(self, c) -> "TreeVector":
        return TreeVector(self.s, {m: c * x for m, x in self.coeffs.items()})

    def __neg__(self) -> "TreeVector":
        return (-1) * self

    def __sub__(self, other: "TreeVector") -> "TreeVector":
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, TreeVector) and self.s == other.s and self.coeffs == other.coeffs

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = sorted(self.coeffs.items(), key=lambda mc: mc[0].index(self.s))
        return " + ".join(f"{format_rational(c)}*{m}" for m, c in terms)


def canonicalize_tree(a: int, b: int, c: int, top: int, bottom: int, gens: GeneratorSpace) -> TreeVector:
    """Express ``bottom(top(a, b), c)`` in the canonical tree basis."""
    if sorted((a, b, c)) != [1, 2, 3]:
        raise PresentationError(f"leaf labels {(a, b, c)} are not a permutation of 1,2,3")
    s = gens.s
    if not (0 <= top < s and 0 <= bottom < s):
        raise PresentationError(f"generator index out of range for s={s}")
    shape = _SHAPE_OF_BOTTOM[c]
    if SHAPES[shape][:2] == (a, b):
        return TreeVector.monomial(s, shape, top, bottom)
    row = gens.swap_action.rows[top]
    return TreeVector(s, {TreeMonomial(shape, k, bottom): x for k, x in enumerate(row) if x})


def act_s3(v: TreeVector, sigma: Permutation, gens: GeneratorSpace) -> TreeVector:
    """Right action of S_3 by relabelling leaves with sigma^{-1}."""
    if sigma.n != 3:
        raise PresentationError("expected a permutation of [3]")
    inv = sigma.inverse()
    out = TreeVector(v.s)
    for m, coeff in v.coeffs.items():
        a, b, c = (inv(x) for x in SHAPES[m.shape])
        out = out + coeff * canonicalize_tree(a, b, c, m.top, m.bottom, gens)
    return out


def s3_action_rows(gens: GeneratorSpace, sigma: Permutation) -> list[tuple[Fraction, ...]]:
    """Images of the basis trees under sigma (row convention)."""
    s = gens.s
    return [
        act_s3(TreeVector(s, {TreeMonomial.from_index(i, s): 1}), sigma, gens).dense()
        for i in range(gens.tree_dim)
    ]


def _act_dense(v: Sequence, rows: list) -> tuple[Fraction, ...]:
    out = [Fraction(0)] * len(rows[0]) if rows else []
    for c, row in zip(v, rows):
        if c:
            for k, x in enumerate(row):
                if x:
                    out[k] += c * x
    return tuple(out)


def s3_closure(vectors: Iterable[Sequence], gens: GeneratorSpace) -> Subspace:
    vecs = [tuple(v) for v in vectors]
    mats = [s3_action_rows(gens, g) for g in S3]
    return canonical_basis((_act_dense(v, m) for v in vecs for m in mats), gens.tree_dim)


@dataclass(frozen=True)
class QuadraticPresentation:
    name: str
    generators: GeneratorSpace
    relations: Subspace

    def __post_init__(self):
        if self.relations.ambient_dim != self.generators.tree_dim:
            raise PresentationError(
                f"relations live in dimension {self.relations.ambient_dim}, "
                f"expected 3s^2 = {self.generators.tree_dim}"
            )

    @classmethod
    def build(cls, name: str, swap, relations: Iterable[Sequence], close: bool = True):
        """Build from a swap matrix and relation vectors, closing under S_3 by default."""
        gens = swap if isinstance(swap, GeneratorSpace) else GeneratorSpace.of(swap)
        rels = list(relations)
        sub = s3_closure(rels, gens) if close else canonical_basis(rels, gens.tree_dim)
        return cls(name, gens, sub)

    @property
    def s(self) -> int:
        return self.generators.s

    @property
    def t(self) -> int:
        return self.relations.dim

    @property
    def tree_dim(self) -> int:
        return self.generators.tree_dim

    def relation_vectors(self) -> list[TreeVector]:
        return [TreeVector.from_dense(self.s, r) for r in self.relations.basis]

    def __repr__(self):
        return f"QuadraticPresentation({self.name!r}, s={self.s}, t={self.t})"


@dataclass
class ValidationReport:
    name: str
    s: int
    t: int
    ambient: int
    involution: bool
    s3_stable: bool
    failures: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.involution and self.s3_stable

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "s": self.s,
            "t": self.t,
            "ambient": self.ambient,
            "involution": self.involution,
            "s3_stable": self.s3_stable,
            "valid": self.valid,
            "failures": list(self.failures),
        }


def validate_presentation(P: QuadraticPresentation) -> ValidationReport:
    gens = P.generators
    involution = gens.is_involution()
    failures = []
    if not involution:
        failures.append("swap_action is not an involution")
    stable = True
    for g in S3:
        rows = s3_action_rows(gens, g)
        for r in P.relations.basis:
            if not membership(_act_dense(r, rows), P.relations):
                stable = False
                failures.append(f"relation not stable under {tuple(g)}: {TreeVector.from_dense(P.s, r)}")
                break
    return ValidationReport(P.name, P.s, P.t, P.tree_dim, involution, stable, failures)


def _require_valid(P: QuadraticPresentation) -> None:
    rep = validate_presentation(P)
    if not rep.valid:
        raise PresentationError(f"invalid presentation {P.name}: {'; '.join(rep.failures)}")


def _checked(P: QuadraticPresentation) -> QuadraticPresentation:
    rep = validate_presentation(P)
    if not rep.s3_stable:
        raise PresentationError(f"construction of {P.name} lost S_3-stability: {rep.failures}")
    return P


def koszul_dual(P: QuadraticPresentation) -> QuadraticPresentation:
    _require_valid(P)
    # the delta pairing is the identity matrix in the tree basis
    rel = orthogonal_complement(P.relations)
    name = P.name[:-1] if P.name.endswith("!") else P.name + "!"
    return _checked(QuadraticPresentation(name, P.generators.dual(), rel))


# -- two-coloured constructions ------------------------------------------------

def _block_diag(a: Matrix, b: Matrix) -> Matrix:
    n, m = a.nrows, b.nrows
    rows = [list(r) + [0] * m for r in a.rows] + [[0] * n + list(r) for r in b.rows]
    return Matrix(rows, n + m)


def _recolour(r: Sequence, s: int, top_colour: int, bottom_colour: int) -> list[Fraction]:
    """Embed a relation of the s-generator operad into the 2s-generator one."""
    S = 2 * s
    out = [Fraction(0)] * (3 * S * S)
    for idx, c in enumerate(r):
        if c:
            m = TreeMonomial.from_index(idx, s)
            out[TreeMonomial(m.shape, m.top + top_colour * s, m.bottom + bottom_colour * s).index(S)] = c
    return out


def _two_colour_generators(P: QuadraticPresentation) -> GeneratorSpace:
    M = P.generators.swap_action
    return GeneratorSpace(_block_diag(M, M))


def build_linear_compatible(P: QuadraticPresentation) -> QuadraticPresentation:
    """Generators: white copy then black copy of V."""
    _require_valid(P)
    s = P.s
    rels = []
    for r in P.relations.basis:
        rels.append(_recolour(r, s, 0, 0))
        rels.append(_recolour(r, s, 1, 1))
        mixed = [x + y for x, y in zip(_recolour(r, s, 0, 1), _recolour(r, s, 1, 0))]
        rels.append(mixed)
    gens = _two_colour_generators(P)
    return _checked(QuadraticPresentation(f"1({P.name})", gens, canonical_basis(rels, gens.tree_dim)))


def build_totally_compatible(P: QuadraticPresentation) -> QuadraticPresentation:
    _require_valid(P)
    s = P.s
    S = 2 * s
    gens = _two_colour_generators(P)
    rels = []
    for r in P.relations.basis:
        rels.append(_recolour(r, s, 0, 0))
        rels.append(_recolour(r, s, 1, 1))
        rels.append(_recolour(r, s, 0, 1))
    # mixed compositions do not depend on the order of the colours
    for shape in range(3):
        for i in range(s):
            for j in range(s):
                v = [Fraction(0)] * gens.tree_dim
                v[TreeMonomial(shape, i, j + s).index(S)] += 1
                v[TreeMonomial(shape, i + s, j).index(S)] -= 1
                rels.append(v)
    sub = canonical_basis(rels, gens.tree_dim)
    for r in P.relations.basis:
        if not membership(_recolour(r, s, 1, 0), sub):
            raise PresentationError("black-over-white relations are not a consequence")
    return _checked(QuadraticPresentation(f"2({P.name})", gens, sub))


# -- black and white products ----------------------------------------------------

def _product_index(shape: int, i: int, k: int, j: int, l: int, s: int, t: int) -> int:
    return TreeMonomial(shape, i * t + k, j * t + l).index(s * t)


def psi(r: Sequence, q: Sequence, s: int, t: int) -> list[Fraction]:
    """Tensor two tree vectors shape-by-shape into the tree space of V (x) W."""
    out = [Fraction(0)] * (3 * (s * t) ** 2)
    rnz = [(TreeMonomial.from_index(a, s), x) for a, x in enumerate(r) if x]
    qnz = [(TreeMonomial.from_index(b, t), y) for b, y in enumerate(q) if y]
    for m, x in rnz:
        for n, y in qnz:
            if m.shape == n.shape:
                out[_product_index(m.shape, m.top, n.top, m.bottom, n.bottom, s, t)] += x * y
    return out


def phi_matrix(s: int, t: int) -> Matrix:
    """Matrix of the map F(V (x) W)(3) -> F(V)(3) (x) F(W)(3) (column convention)."""
    dV, dW = 3 * s * s, 3 * t * t
    src = 3 * (s * t) ** 2
    rows = [[0] * src for _ in range(dV * dW)]
    for shape in range(3):
        for i in range(s):
            for k in range(t):
                for j in range(s):
                    for l in range(t):
                        col = _product_index(shape, i, k, j, l, s, t)
                        a = TreeMonomial(shape, i, j).index(s)
                        b = TreeMonomial(shape, k, l).index(t)
                        rows[a * dW + b][col] = 1
    return Matrix(rows, src)


def black_product(P: QuadraticPresentation, Q: QuadraticPresentation) -> QuadraticPresentation:
    _require_valid(P)
    _require_valid(Q)
    s, t = P.s, Q.s
    swap = -(P.generators.swap_action.kron(Q.generators.swap_action))
    gens = GeneratorSpace(swap)
    rels = [psi(r, q, s, t) for r in P.relations.basis for q in Q.relations.basis]
    sub = canonical_basis(rels, gens.tree_dim)
    return _checked(QuadraticPresentation(f"({P.name} * {Q.name})", gens, sub))


def white_product(P: QuadraticPresentation, Q: QuadraticPresentation) -> QuadraticPresentation:
    _require_valid(P)
    _require_valid(Q)
    s, t = P.s, Q.s
    dV, dW = P.tree_dim, Q.tree_dim
    gens = GeneratorSpace(P.generators.swap_action.kron(Q.generators.swap_action))
    target = []
    for r in P.relations.basis:
        for b in range(dW):
            target.append([x if y == b else 0 for x in r for y in range(dW)])
    for a in range(dV):
        for q in Q.relations.basis:
            target.append([y if x == a else 0 for x in range(dV) for y in q])
    X = canonical_basis(target, dV * dW)
    sub = preimage(phi_matrix(s, t), X)
    return _checked(QuadraticPresentation(f"({P.name} o {Q.name})", gens, sub))


# -- the arity-3 quotient ---------------------------------------------------------

@dataclass(frozen=True)
class ArityThreeAlgebra:
    """O(3) = F(V)(3) / R with the non-pivot coordinates as a complement basis."""

    presentation: QuadraticPresentation

    @property
    def ambient(self) -> int:
        return self.presentation.tree_dim

    @property
    def relations(self) -> Subspace:
        return self.presentation.relations

    @property
    def complement(self) -> tuple[int, ...]:
        piv = set(self.relations.pivots)
        return tuple(i for i in range(self.ambient) if i not in piv)

    @property
    def quotient_dim(self) -> int:
        return self.ambient - self.relations.dim

    def reduce(self, v: Sequence) -> tuple[Fraction, ...]:
        w = [Fraction(x) for x in v]
        for row, p in zip(self.relations.basis, self.relations.pivots):
            f = w[p]
            if f:
                w = [a - f * b for a, b in zip(w, row)]
        return tuple(w)

    def class_of(self, v: TreeVector | Sequence) -> tuple[Fraction, ...]:
        dense = v.dense() if isinstance(v, TreeVector) else v
        w = self.reduce(dense)
        return tuple(w[i] for i in self.complement)

    def monomial_class(self, m: TreeMonomial) -> tuple[Fraction, ...]:
        v = [0] * self.ambient
        v[m.index(self.presentation.s)] = 1
        return self.class_of(v)


def arity3_quotient(P: QuadraticPresentation) -> ArityThreeAlgebra:
    _require_valid(P)
    return ArityThreeAlgebra(P)


def check_weak_associativity(P: QuadraticPresentation) -> bool:
    """Every tree is equivalent in O(3) to a combination of trees of the cyclically next shape."""
    A = arity3_quotient(P)
    s = P.s
    for shape in range(3):
        nxt = (shape + 1) % 3
        target = canonical_basis(
            (A.monomial_class(TreeMonomial(nxt, k, l)) for k in range(s) for l in range(s)),
            A.quotient_dim,
        )
        for i in range(s):
            for j in range(s):
                if not membership(A.monomial_class(TreeMonomial(shape, i, j)), target):
                    return False
    return True


def induced_tree_map(identification: Matrix, s: int) -> Matrix:
    """Row convention: image of basis tree (shape,i,j) is sum G[i][k] G[j][l] (shape,k,l)."""
    G = identification
    t = G.ncols
    rows = []
    for idx in range(3 * s * s):
        m = TreeMonomial.from_index(idx, s)
        row = [Fraction(0)] * (3 * t * t)
        for k, a in enumerate(G.rows[m.top]):
            if a:
                for l, b in enumerate(G.rows[m.bottom]):
                    if b:
                        row[TreeMonomial(m.shape, k, l).index(t)] += a * b
        rows.append(row)
    return Matrix(rows, 3 * t * t)


def relation_spaces_equal(P: QuadraticPresentation, Q: QuadraticPresentation, identification: Matrix | None = None) -> bool:
    """Does the generator map (row i = image of e_i) carry P's relations onto Q's?"""
    G = identification if identification is not None else Matrix.identity(P.s)
    if G.shape != (P.s, Q.s):
        raise PresentationError(f"identification has shape {G.shape}, expected {(P.s, Q.s)}")
    if G.determinant() == 0:
        raise PresentationError("identification is not invertible")
    if P.generators.swap_action @ G != G @ Q.generators.swap_action:
        raise PresentationError("identification does not intertwine the swap actions")
    if P.t != Q.t:
        return False
    T = induced_tree_map(G, P.s)
    image = canonical_basis((_act_dense(r, T.rows) for r in P.relations.basis), Q.tree_dim)
    return image == Q.relations


def permutation_matrix(images: Sequence[int]) -> Matrix:
    """Row i has a one in column images[i] (0-based)."""
    n = len(images)
    return Matrix(([int(images[i] == k) for k in range(n)] for i in range(n)), n)


def product_to_colours(s: int) -> Matrix:
    """Identify generators (i, colour) of V (x) K{white, black} with the two-coloured copy of V."""
    return permutation_matrix([c * s + i for i in range(s) for c in range(2)])


# -- JSON --------------------------------------------------------------------------

def presentation_to_json(P: QuadraticPresentation) -> dict:
    rels = []
    for r in P.relations.basis:
        terms = []
        for idx, c in enumerate(r):
            if c:
                m = TreeMonomial.from_index(idx, P.s)
                terms.append(
                    {"shape": SHAPE_NAMES[m.shape], "top": m.top + 1, "bottom": m.bottom + 1,
                     "coeff": format_rational(c)}
                )
        rels.append(terms)
    return {
        "name": P.name,
        "generators": {
            "count": P.s,
            "swap_action": [[format_rational(x) for x in row] for row in P.generators.swap_action.rows],
        },
        "relations": rels,
    }


def presentation_from_json(data: dict, close: bool = True) -> QuadraticPresentation:
    try:
        name = str(data["name"])
        s = int(data["generators"]["count"])
        swap = [[parse_rational(x) for x in row] for row in data["generators"]["swap_action"]]
        if len(swap) != s or any(len(row) != s for row in swap):
            raise PresentationError(f"swap_action must be {s}x{s}")
        gens = GeneratorSpace(Matrix(swap, s))
        vecs = []
        for rel in data["relations"]:
            v = [Fraction(0)] * gens.tree_dim
            for term in rel:
                shape = SHAPE_NAMES.index(str(term["shape"]))
                top, bottom = int(term["top"]) - 1, int(term["bottom"]) - 1
                if not (0 <= top < s and 0 <= bottom < s):
                    raise PresentationError(f"generator index out of range in {term}")
                v[TreeMonomial(shape, top, bottom).index(s)] += parse_rational(term.get("coeff", "1"))
            vecs.append(v)
    except PresentationError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise PresentationError(f"malformed presentation: {exc}") from exc
    return QuadraticPresentation.build(name, gens, vecs, close=close)


def load_presentation(path: str | os.PathLike) -> QuadraticPresentation:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise PresentationError(f"{path}: {exc}") from exc
    return presentation_from_json(data)


def dump_presentation(P: QuadraticPresentation, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(presentation_to_json(P), fh, indent=1, sort_keys=True)
        fh.write("\n")


CATALOGUE = {"lie": "lie.json", "com": "com.json", "lie1": "lie1.json", "com2": "com2.json"}


def data_dir() -> Path:
    env = os.environ.get("OPERAD_DATA_DIR")
    if env:
        return Path(env)
    return Path(str(resources.files("compatop") / "data"))


def catalogue(name: str) -> QuadraticPresentation:
    if name not in CATALOGUE:
        raise PresentationError(f"unknown catalogue presentation {name!r}")
    return load_presentation(data_dir() / CATALOGUE[name])


# -- linearization of set operads -------------------------------------------------

def linearized_presentation(P) -> QuadraticPresentation:
    """Arity-3 quadratic presentation of the linearization of a binary set operad.

    Generators are the elements of P_2 in enumeration order; relations are the
    kernel of the evaluation map from trees to K[P_3].
    """
    gens2 = list(P.enumerate(2))
    pos = {p: i for i, p in enumerate(gens2)}
    swap = permutation_matrix([pos[P.act(p, Permutation((2, 1)))] for p in gens2])
    gspace = GeneratorSpace(swap)
    s = len(gens2)
    elems3 = list(P.enumerate(3))
    pos3 = {p: i for i, p in enumerate(elems3)}
    unit = P.unit()
    evaluation = [[0] * gspace.tree_dim for _ in elems3]
    for idx in range(gspace.tree_dim):
        m = TreeMonomial.from_index(idx, s)
        comp = P.compose(gens2[m.bottom], [gens2[m.top], unit])
        labels = Permutation(SHAPES[m.shape])
        evaluation[pos3[P.act(comp, labels.inverse())]][idx] = 1
    rel = nullspace(Matrix(evaluation, gspace.tree_dim))
    return QuadraticPresentation(P.id, gspace, rel)
