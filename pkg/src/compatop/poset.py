"""Finite posets stored as up-set bitmasks over integer indices."""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, Sequence

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher


class PosetError(ValueError):
    pass


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FinitePoset:
    """Elements are arbitrary hashable labels; ``up[i]`` is the bitmask of {j : i <= j}."""

    def __init__(self, elements: Sequence[Hashable], up: Sequence[int]):
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise PosetError("duplicate elements")
        self.up = list(up)
        n = len(self.elements)
        self.down = [0] * n
        for i in range(n):
            for j in _bits(self.up[i]):
                self.down[j] |= 1 << i
        for i in range(n):
            if not (self.up[i] >> i) & 1:
                raise PosetError("relation is not reflexive")
            for j in _bits(self.up[i] & ~(1 << i)):
                if (self.up[j] >> i) & 1:
                    raise PosetError("relation is not antisymmetric")
        self.upper_covers = [tuple(_bits(self._cover_mask(i))) for i in range(n)]
        self.lower_covers: list[list[int]] = [[] for _ in range(n)]
        for i, cs in enumerate(self.upper_covers):
            for j in cs:
                self.lower_covers[j].append(i)

    def _cover_mask(self, i: int) -> int:
        strict = self.up[i] & ~(1 << i)
        above = 0
        for j in _bits(strict):
            above |= self.up[j] & ~(1 << j)
        return strict & ~above

    # -- constructors -------------------------------------------------------------

    @classmethod
    def from_leq(cls, elements: Sequence[Hashable], leq: Callable[[Hashable, Hashable], bool]) -> "FinitePoset":
        elements = tuple(elements)
        up = []
        for a in elements:
            mask = 0
            for j, b in enumerate(elements):
                if a is b or a == b or leq(a, b):
                    mask |= 1 << j
            up.append(mask)
        poset = cls(elements, up)
        poset._check_transitive()
        return poset

    @classmethod
    def from_covers(cls, elements: Sequence[Hashable], covers: Iterable[tuple[Hashable, Hashable]]) -> "FinitePoset":
        """``covers`` are pairs (a, b) with a < b; the order is their reflexive-transitive closure."""
        elements = tuple(elements)
        idx = {e: i for i, e in enumerate(elements)}
        succ: list[set[int]] = [set() for _ in elements]
        for a, b in covers:
            succ[idx[a]].add(idx[b])
        n = len(elements)
        up = [None] * n
        state = [0] * n  # 0 new, 1 on stack, 2 done
        for root in range(n):
            if state[root]:
                continue
            stack = [(root, iter(succ[root]))]
            state[root] = 1
            while stack:
                v, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    mask = 1 << v
                    for w in succ[v]:
                        mask |= up[w]
                    up[v] = mask
                    state[v] = 2
                    stack.pop()
                elif state[nxt] == 1:
                    raise PosetError("cover relation has a cycle")
                elif state[nxt] == 0:
                    state[nxt] = 1
                    stack.append((nxt, iter(succ[nxt])))
        return cls(elements, up)

    def _check_transitive(self) -> None:
        for i in range(len(self)):
            for j in _bits(self.up[i]):
                if self.up[j] & ~self.up[i]:
                    raise PosetError("relation is not transitive")

    # -- basic queries ------------------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"<FinitePoset with {len(self)} elements>"

    def leq(self, a: Hashable, b: Hashable) -> bool:
        return bool((self.up[self.index[a]] >> self.index[b]) & 1)

    def leq_idx(self, i: int, j: int) -> bool:
        return bool((self.up[i] >> j) & 1)

    def covers(self) -> list[tuple[Hashable, Hashable]]:
        return [(self.elements[i], self.elements[j]) for i, cs in enumerate(self.upper_covers) for j in cs]

    def minimal(self) -> list[int]:
        return [i for i in range(len(self)) if not self.lower_covers[i]]

    def maximal(self) -> list[int]:
        return [i for i in range(len(self)) if not self.upper_covers[i]]

    def bottom(self) -> int | None:
        m = self.minimal()
        return m[0] if len(m) == 1 else None

    def top(self) -> int | None:
        m = self.maximal()
        return m[0] if len(m) == 1 else None

    def is_bounded(self) -> bool:
        return len(self) > 0 and self.bottom() is not None and self.top() is not None

    def atoms(self) -> list[int]:
        b = self.bottom()
        if b is None:
            raise PosetError("poset has no bottom element")
        return list(self.upper_covers[b])

    def interval_mask(self, x: int, y: int) -> int:
        return self.up[x] & self.down[y]

    def subposet(self, indices: Iterable[int]) -> "FinitePoset":
        idx = sorted(indices)
        pos = {i: k for k, i in enumerate(idx)}
        sel = 0
        for i in idx:
            sel |= 1 << i
        up = []
        for i in idx:
            mask = 0
            for j in _bits(self.up[i] & sel):
                mask |= 1 << pos[j]
            up.append(mask)
        return FinitePoset([self.elements[i] for i in idx], up)

    def interval(self, a: Hashable, b: Hashable) -> "FinitePoset":
        i, j = self.index[a], self.index[b]
        if not self.leq_idx(i, j):
            raise PosetError(f"{a} is not below {b}")
        return self.subposet(_bits(self.interval_mask(i, j)))

    def relabel(self, f: Callable[[Hashable], Hashable]) -> "FinitePoset":
        return FinitePoset([f(e) for e in self.elements], self.up)

    def linear_extension(self) -> list[int]:
        return sorted(range(len(self)), key=lambda i: bin(self.down[i]).count("1"))

    def hasse_graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(len(self)))
        g.add_edges_from((i, j) for i, cs in enumerate(self.upper_covers) for j in cs)
        return g

    def to_dot(self, label: Callable[[Hashable], str] = str, name: str = "poset") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
        names = [label(e) for e in self.elements]
        for n in sorted(names):
            lines.append(f'  "{n}";')
        edges = sorted((names[i], names[j]) for i, cs in enumerate(self.upper_covers) for j in cs)
        for a, b in edges:
            lines.append(f'  "{a}" -> "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def maximal_intervals(P: FinitePoset) -> list[FinitePoset]:
    b = P.bottom()
    if b is None:
        raise PosetError("poset has no bottom element")
    return [P.subposet(_bits(P.interval_mask(b, g))) for g in P.maximal()]


def _signature(P: FinitePoset, i: int) -> tuple:
    return (
        bin(P.down[i]).count("1"),
        bin(P.up[i]).count("1"),
        len(P.lower_covers[i]),
        len(P.upper_covers[i]),
    )


def is_isomorphic(A: FinitePoset, B: FinitePoset) -> tuple[bool, dict | None]:
    """Isomorphism of Hasse diagrams, pruned by up/down-set sizes and cover degrees."""
    if len(A) != len(B):
        return False, None
    sa = sorted(_signature(A, i) for i in range(len(A)))
    sb = sorted(_signature(B, i) for i in range(len(B)))
    if sa != sb:
        return False, None
    ga, gb = A.hasse_graph(), B.hasse_graph()
    for g, P in ((ga, A), (gb, B)):
        for i in range(len(P)):
            g.nodes[i]["sig"] = _signature(P, i)
    matcher = DiGraphMatcher(ga, gb, node_match=lambda x, y: x["sig"] == y["sig"])
    if not matcher.is_isomorphic():
        return False, None
    return True, {A.elements[i]: B.elements[j] for i, j in matcher.mapping.items()}


def is_order_isomorphism(A: FinitePoset, B: FinitePoset, mapping: dict) -> bool:
    """Check that a bijection of labels preserves and reflects the order."""
    if len(mapping) != len(A) or len(set(mapping.values())) != len(B) or len(A) != len(B):
        return False
    try:
        img = [B.index[mapping[e]] for e in A.elements]
    except KeyError:
        return False
    for i in range(len(A)):
        for j in range(len(A)):
            if A.leq_idx(i, j) != B.leq_idx(img[i], img[j]):
                return False
    return True
