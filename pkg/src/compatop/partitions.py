"""Partition posets: plain, operadic (P-partitions), weighted, and fiber products."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Hashable, Iterator, Sequence

from .permutations import Permutation
from .poset import FinitePoset, PosetError
from .setoperads import SetOperad, SetOperadElement

Block = tuple[int, ...]
Partition = tuple[Block, ...]


def set_partitions(n: int) -> list[Partition]:
    """All set partitions of [n]; blocks ascending, sorted by least element."""
    out: list[list[list[int]]] = [[]]
    for x in range(1, n + 1):
        nxt = []
        for p in out:
            for i in range(len(p)):
                nxt.append([b + [x] if k == i else b for k, b in enumerate(p)])
            nxt.append(p + [[x]])
        out = nxt
    return sorted(tuple(tuple(b) for b in p) for p in out)


def refines(a: Partition, b: Partition) -> bool:
    where = {x: i for i, blk in enumerate(b) for x in blk}
    return all(len({where[x] for x in blk}) == 1 for blk in a)


def _digits(block: Block) -> str:
    return ("" if max(block) < 10 else ",").join(str(x) for x in block)


def format_payload(p: SetOperadElement) -> str:
    if p.operad_id == "com":
        return ""
    if p.operad_id == "com2":
        return f"{p.payload}w"
    if p.operad_id == "perm":
        return f"p{p.payload}"
    if p.operad_id == "as":
        return "".join(str(x) for x in p.payload)
    if isinstance(p.payload, tuple) and all(isinstance(x, SetOperadElement) for x in p.payload):
        return ",".join(format_payload(x) for x in p.payload)
    return repr(p.payload)


@dataclass(frozen=True)
class EnrichedPartition:
    """Blocks (ascending, sorted by least element) decorated by operad elements of matching arity."""

    blocks: tuple[tuple[Block, SetOperadElement], ...]

    def __post_init__(self):
        blocks = tuple(sorted((tuple(b), p) for b, p in self.blocks))
        seen: list[int] = []
        for b, p in blocks:
            if list(b) != sorted(set(b)):
                raise ValueError(f"block {b} is not strictly ascending")
            if p.arity != len(b):
                raise ValueError(f"decoration {p!r} does not match block {b}")
            seen.extend(b)
        if sorted(seen) != list(range(1, len(seen) + 1)):
            raise ValueError("blocks do not partition [n]")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(len(b) for b, _ in self.blocks)

    @property
    def partition(self) -> Partition:
        return tuple(b for b, _ in self.blocks)

    def decoration(self, block: Block) -> SetOperadElement:
        return dict(self.blocks)[tuple(block)]

    def __str__(self):
        parts = []
        for b, p in self.blocks:
            s = format_payload(p)
            parts.append(_digits(b) + (f"^{s}" if s else ""))
        return "|".join(parts)


@dataclass(frozen=True)
class WeightedPartition:
    blocks: tuple[tuple[Block, int], ...]

    def __post_init__(self):
        blocks = tuple(sorted((tuple(b), int(w)) for b, w in self.blocks))
        seen: list[int] = []
        for b, w in blocks:
            if not 0 <= w <= len(b) - 1:
                raise ValueError(f"weight {w} out of range for block {b}")
            seen.extend(b)
        if sorted(seen) != list(range(1, len(seen) + 1)):
            raise ValueError("blocks do not partition [n]")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(len(b) for b, _ in self.blocks)

    @property
    def partition(self) -> Partition:
        return tuple(b for b, _ in self.blocks)

    @property
    def weight(self) -> int:
        return sum(w for _, w in self.blocks)

    @property
    def nbblocks(self) -> int:
        return len(self.blocks)

    def __str__(self):
        return "|".join(f"{_digits(b)}^{w}" for b, w in self.blocks)


def underlying_partition(e) -> Partition:
    if isinstance(e, (EnrichedPartition, WeightedPartition)):
        return e.partition
    return tuple(e)


def rank_of(e) -> int:
    """n minus the number of blocks."""
    p = underlying_partition(e)
    return sum(len(b) for b in p) - len(p)


# -- the partition lattice -----------------------------------------------------------

def build_partition_poset(n: int) -> FinitePoset:
    if not 1 <= n <= 8:
        raise ValueError("partition posets are supported for 1 <= n <= 8")
    parts = set_partitions(n)
    covers = []
    for p in parts:
        for i in range(len(p)):
            for j in range(i + 1, len(p)):
                merged = tuple(sorted(p[:i] + p[i + 1: j] + p[j + 1:] + (tuple(sorted(p[i] + p[j])),)))
                covers.append((p, merged))
    return FinitePoset.from_covers(parts, covers)


# -- operadic partition posets ---------------------------------------------------------

def alignment(subblocks: Sequence[Block], block: Block) -> Permutation:
    """sigma(x) = position in ``block`` of the x-th label of the concatenated sub-blocks."""
    pos = {b: i for i, b in enumerate(block, 1)}
    return Permutation(pos[c] for sub in subblocks for c in sub)


@lru_cache(maxsize=None)
def merge_decorations(P: SetOperad, parts: tuple[tuple[Block, SetOperadElement], ...], block: Block) -> frozenset:
    """All decorations of ``block`` reachable from the given decorated sub-blocks."""
    subs = [b for b, _ in parts]
    decs = [p for _, p in parts]
    sigma_inv = alignment(subs, block).inverse()
    return frozenset(P.act(P.compose(p, decs), sigma_inv) for p in P.enumerate(len(parts)))


def operadic_leq(P: SetOperad, alpha: EnrichedPartition, beta: EnrichedPartition) -> bool:
    for B, q in beta.blocks:
        Bset = set(B)
        parts = tuple((A, p) for A, p in alpha.blocks if set(A) <= Bset)
        if sum(len(A) for A, _ in parts) != len(B):
            return False
        if q not in merge_decorations(P, parts, B):
            return False
    return True


def enriched_partitions(P: SetOperad, n: int) -> Iterator[EnrichedPartition]:
    for part in set_partitions(n):
        for decs in product(*(P.enumerate(len(b)) for b in part)):
            yield EnrichedPartition(tuple(zip(part, decs)))


def _grouped_poset(groups: dict, leq: Callable[[Hashable, Hashable], bool]) -> FinitePoset:
    """Build a poset whose order implies refinement of the underlying partitions."""
    parts = sorted(groups)
    elements = [e for p in parts for e in groups[p]]
    offsets = {}
    k = 0
    for p in parts:
        offsets[p] = k
        k += len(groups[p])
    up = []
    for p in parts:
        coarser = [q for q in parts if refines(p, q)]
        for a in groups[p]:
            mask = 0
            for q in coarser:
                for t, b in enumerate(groups[q]):
                    if a == b or leq(a, b):
                        mask |= 1 << (offsets[q] + t)
            up.append(mask)
    poset = FinitePoset(elements, up)
    poset._check_transitive()
    return poset


def build_operadic_poset(P: SetOperad, n: int) -> FinitePoset:
    limit = 4 if "as" in P.id.split("*") else 6
    if not 1 <= n <= limit:
        raise ValueError(f"operadic posets of {P.id} are supported for 1 <= n <= {limit}")
    groups: dict[Partition, list[EnrichedPartition]] = {}
    for e in enriched_partitions(P, n):
        groups.setdefault(e.partition, []).append(e)
    return _grouped_poset(groups, lambda a, b: operadic_leq(P, a, b))


# -- weighted partitions ----------------------------------------------------------------

def weighted_partitions(n: int) -> Iterator[WeightedPartition]:
    for part in set_partitions(n):
        for ws in product(*(range(len(b)) for b in part)):
            yield WeightedPartition(tuple(zip(part, ws)))


def weighted_leq(alpha: WeightedPartition, beta: WeightedPartition) -> bool:
    """Refinement, and every block of beta gains between 0 and (parts - 1) weight.

    Summed over blocks this gives the global inequality
    weight(beta) - weight(alpha) <= nbblocks(alpha) - nbblocks(beta); the global
    inequality alone is not antisymmetric, so it is imposed block by block.
    """
    if not refines(alpha.partition, beta.partition):
        return False
    for B, w in beta.blocks:
        Bset = set(B)
        inner = [v for A, v in alpha.blocks if set(A) <= Bset]
        if not 0 <= w - sum(inner) <= len(inner) - 1:
            return False
    return True


def weighted_leq_global(alpha: WeightedPartition, beta: WeightedPartition) -> bool:
    """The two global conditions only, kept to document why they are not enough."""
    return refines(alpha.partition, beta.partition) and (
        beta.weight - alpha.weight <= alpha.nbblocks - beta.nbblocks
    )


def weighted_covers(n: int) -> set[tuple[WeightedPartition, WeightedPartition]]:
    """Covers by the local rule: merge two blocks, weight goes up by 0 or 1."""
    out = set()
    for beta in weighted_partitions(n):
        for i in range(beta.nbblocks):
            for j in range(i + 1, beta.nbblocks):
                (bi, wi), (bj, wj) = beta.blocks[i], beta.blocks[j]
                rest = beta.blocks[:i] + beta.blocks[i + 1: j] + beta.blocks[j + 1:]
                merged = tuple(sorted(bi + bj))
                for delta in (0, 1):
                    w = wi + wj + delta
                    if w <= len(merged) - 1:
                        out.add((beta, WeightedPartition(rest + ((merged, w),))))
    return out


def build_weighted_poset(n: int, method: str = "auto") -> FinitePoset:
    """Weighted partitions of [n]; ``method`` is "definition", "covers" or "auto"."""
    if not 1 <= n <= 7:
        raise ValueError("weighted partition posets are supported for 1 <= n <= 7")
    if method == "auto":
        method = "definition" if n <= 6 else "covers"
    elements = list(weighted_partitions(n))
    if method == "covers":
        return FinitePoset.from_covers(elements, weighted_covers(n))
    if method != "definition":
        raise ValueError(f"unknown method {method!r}")
    groups: dict[Partition, list[WeightedPartition]] = {}
    for e in elements:
        groups.setdefault(e.partition, []).append(e)
    return _grouped_poset(groups, weighted_leq)


def com2_to_weighted(e: EnrichedPartition) -> WeightedPartition:
    """D^m_i (i white products) goes to weight m - 1 - i, the number of black products."""
    return WeightedPartition(tuple((b, len(b) - 1 - p.payload) for b, p in e.blocks))


# -- fiber products ---------------------------------------------------------------------

def fiber_product(
    A: FinitePoset,
    B: FinitePoset,
    f: Callable = underlying_partition,
    g: Callable = underlying_partition,
    base_leq: Callable[[Hashable, Hashable], bool] = refines,
) -> FinitePoset:
    """Pairs (a, b) with f(a) == g(b), ordered componentwise."""
    for P, h in ((A, f), (B, g)):
        for x, y in P.covers():
            if not base_leq(h(x), h(y)):
                raise PosetError(f"projection is not order preserving on {x} < {y}")
    by_base: dict = {}
    for j, b in enumerate(B.elements):
        by_base.setdefault(g(b), []).append(j)
    pairs = [(i, j) for i, a in enumerate(A.elements) for j in by_base.get(f(a), [])]
    up = []
    for i, j in pairs:
        mask = 0
        for k, (i2, j2) in enumerate(pairs):
            if A.leq_idx(i, i2) and B.leq_idx(j, j2):
                mask |= 1 << k
        up.append(mask)
    return FinitePoset([(A.elements[i], B.elements[j]) for i, j in pairs], up)


def split_hadamard(e: EnrichedPartition) -> tuple[EnrichedPartition, EnrichedPartition]:
    """Send a (P x_H Q)-partition to the pair of its P- and Q-partitions."""
    left = EnrichedPartition(tuple((b, p.payload[0]) for b, p in e.blocks))
    right = EnrichedPartition(tuple((b, p.payload[1]) for b, p in e.blocks))
    return left, right
