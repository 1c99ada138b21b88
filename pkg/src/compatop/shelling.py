"""Gradedness, semimodularity, recursive atom orderings and Cohen-Macaulayness.

All functions take a bounded FinitePoset (usually an interval [0, g] built by
``maximal_intervals``) and work on its integer indices with bitmasks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Hashable

from .linalg import sparse_homology_ranks
from .partitions import EnrichedPartition, WeightedPartition
from .poset import FinitePoset, PosetError, _bits


def _popcount(m: int) -> int:
    return bin(m).count("1")


def _require_bounded(I: FinitePoset) -> tuple[int, int]:
    if not I.is_bounded():
        raise PosetError("poset is not bounded")
    return I.bottom(), I.top()


def is_graded(I: FinitePoset) -> tuple[bool, dict | None]:
    """True iff all maximal chains have the same length; also returns the rank of each label."""
    bot, _ = _require_bounded(I)
    rank: dict[int, int] = {}
    for i in I.linear_extension():
        below = I.lower_covers[i]
        if not below:
            rank[i] = 0
            continue
        rs = {rank[j] for j in below}
        if len(rs) != 1:
            return False, None
        rank[i] = rs.pop() + 1
    return True, {I.elements[i]: r for i, r in rank.items()}


def length(I: FinitePoset) -> int:
    ok, rank = is_graded(I)
    if not ok:
        raise PosetError("poset is not graded")
    return rank[I.elements[I.top()]]


def _ranks(I: FinitePoset) -> list[int]:
    ok, rank = is_graded(I)
    if not ok:
        raise PosetError("poset is not graded")
    return [rank[e] for e in I.elements]


# -- semimodularity ---------------------------------------------------------------------

@dataclass
class SemimodularFailure:
    below: Hashable
    first: Hashable
    second: Hashable
    excluded_covers: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "below": str(self.below),
            "pair": [str(self.first), str(self.second)],
            "excluded_common_covers": sorted(str(e) for e in self.excluded_covers),
        }


def _common_covers(P: FinitePoset, x: int, y: int) -> list[int]:
    return sorted(set(P.upper_covers[x]) & set(P.upper_covers[y]))


def semimodular_failures(I: FinitePoset, ambient: FinitePoset | None = None) -> list[SemimodularFailure]:
    """Pairs of distinct covers of a common element with no common cover in I.

    With ``ambient`` given, the common covers that exist in the ambient poset
    but fall outside I are reported as excluded.
    """
    out = []
    for z in range(len(I)):
        ups = I.upper_covers[z]
        for a in range(len(ups)):
            for b in range(a + 1, len(ups)):
                x, y = ups[a], ups[b]
                if _common_covers(I, x, y):
                    continue
                excluded = []
                if ambient is not None:
                    ax, ay = ambient.index[I.elements[x]], ambient.index[I.elements[y]]
                    excluded = [ambient.elements[w] for w in _common_covers(ambient, ax, ay)]
                out.append(SemimodularFailure(I.elements[z], I.elements[x], I.elements[y], excluded))
    return out


def is_semimodular(I: FinitePoset, ambient: FinitePoset | None = None) -> tuple[bool, SemimodularFailure | None]:
    fails = semimodular_failures(I, ambient)
    return (not fails, fails[0] if fails else None)


def is_totally_semimodular(I: FinitePoset) -> bool:
    """Every interval is semimodular: whenever x, y cover a common z, each common
    upper bound of x and y lies above some common cover of x and y."""
    for z in range(len(I)):
        ups = I.upper_covers[z]
        for a in range(len(ups)):
            for b in range(a + 1, len(ups)):
                x, y = ups[a], ups[b]
                reach = 0
                for w in _common_covers(I, x, y):
                    reach |= I.up[w]
                if I.up[x] & I.up[y] & ~reach:
                    return False
    return True


# -- recursive atom orderings -------------------------------------------------------------

def _block_data(e) -> dict:
    """block -> (P-part, weight) for the element shapes used with compatible operads."""
    if isinstance(e, WeightedPartition):
        return {b: (None, w) for b, w in e.blocks}
    if isinstance(e, tuple) and len(e) == 2 and all(isinstance(x, (EnrichedPartition, WeightedPartition)) for x in e):
        left, right = _block_data(e[0]), _block_data(e[1])
        return {b: (left[b][0], right[b][1]) for b in left}
    if isinstance(e, EnrichedPartition):
        out = {}
        for b, p in e.blocks:
            if p.operad_id == "com2":
                out[b] = (None, len(b) - 1 - p.payload)
            elif p.operad_id.endswith("*com2"):
                q, c = p.payload
                out[b] = (q, len(b) - 1 - c.payload)
            else:
                raise PosetError(f"{p.operad_id}-partitions carry no weights")
        return out
    raise PosetError(f"cannot read blocks and weights from {e!r}")


def cover_key(x, y) -> tuple:
    """(merged block pair, P-part of the merged block, weight increase) for a cover x < y."""
    bx, by = _block_data(x), _block_data(y)
    new = [b for b in by if b not in bx]
    if len(new) != 1:
        raise PosetError(f"{y} does not merge blocks of {x}")
    (B,) = new
    parts = tuple(sorted(b for b in bx if set(b) <= set(B)))
    q, w = by[B]
    dw = w - sum(bx[b][1] for b in parts)
    return (parts, repr(q), dw)


def paper_atom_ordering(I: FinitePoset) -> list:
    """Atoms grouped by merged block pair, then by P-part, weight 0 before weight 1."""
    bot, _ = _require_bounded(I)
    x = I.elements[bot]
    return [I.elements[a] for a in sorted(I.upper_covers[bot], key=lambda a: cover_key(x, I.elements[a]))]


@dataclass
class RAOResult:
    ok: bool
    ordering: list = field(default_factory=list)
    failure: dict | None = None
    states: int = 0

    def to_json(self) -> dict:
        out = {"ok": self.ok, "ordering": [str(a) for a in self.ordering], "states": self.states}
        if self.failure is not None:
            out["failure"] = self.failure
        return out


class _RAOSearch:
    def __init__(self, I: FinitePoset, strategy):
        self.I = I
        self.strategy = strategy
        self.memo: dict = {}
        self.failure: dict | None = None

    def atoms(self, x: int, top: int) -> list[int]:
        return [a for a in self.I.upper_covers[x] if self.I.leq_idx(a, top)]

    def orderings(self, x: int, atoms: list[int], first: int):
        head = [a for a in atoms if (first >> a) & 1]
        tail = [a for a in atoms if not (first >> a) & 1]
        if self.strategy == "exhaustive":
            for h in permutations(head):
                for t in permutations(tail):
                    yield list(h) + list(t)
            return
        if self.strategy == "paper":
            xl = self.I.elements[x]
            key = lambda a: cover_key(xl, self.I.elements[a])  # noqa: E731
        else:
            key = lambda a: self.strategy(self.I.elements[x], self.I.elements[a])  # noqa: E731
        yield sorted(head, key=key) + sorted(tail, key=key)

    def second_criterion(self, order: list[int], top: int) -> dict | None:
        I = self.I
        window = I.down[top]
        seen_up = 0
        earlier: set[int] = set()
        for j, a in enumerate(order):
            if j:
                good = 0
                for k in I.upper_covers[a]:
                    if (window >> k) & 1 and earlier & set(I.lower_covers[k]):
                        good |= I.up[k]
                bad = seen_up & I.up[a] & window & ~good
                if bad:
                    lam = next(iter(_bits(bad)))
                    i = next(b for b in order[:j] if I.leq_idx(b, lam))
                    return {"criterion": 2, "atoms": [str(I.elements[i]), str(I.elements[a])],
                            "upper_bound": str(I.elements[lam])}
            seen_up |= I.up[a]
            earlier.add(a)
        return None

    def run(self, x: int, top: int, first: int) -> list[int] | None:
        """An admissible ordering of the atoms of [x, top] with ``first`` atoms first, or None."""
        key = (x, top, first)
        if key in self.memo:
            return self.memo[key]
        I = self.I
        atoms = self.atoms(x, top)
        result = None
        if I.leq_idx(x, top) and x != top and top in I.upper_covers[x]:
            result = atoms  # length one
        else:
            for order in self.orderings(x, atoms, first):
                fail = self.second_criterion(order, top)
                if fail is None:
                    for j, a in enumerate(order):
                        fj = 0
                        for b in self.atoms(a, top):
                            if set(I.lower_covers[b]) & set(order[:j]):
                                fj |= 1 << b
                        if self.run(a, top, fj) is None:
                            fail = {"criterion": 1, "atom": str(I.elements[a]),
                                    "interval": [str(I.elements[a]), str(I.elements[top])]}
                            break
                if fail is None:
                    result = order
                    break
                if self.failure is None or x == I.bottom():
                    self.failure = dict(fail, below=str(I.elements[x]))
        self.memo[key] = result
        return result


def verify_recursive_atom_ordering(I: FinitePoset, strategy: str | Callable = "paper") -> RAOResult:
    """Check the two recursive criteria.

    ``strategy`` is "paper" (the grouped ordering, with the atoms forced first by
    criterion (1) moved to the front), "exhaustive" (search every admissible
    ordering), or a callable ``key(x, y)`` sorting the covers y of x.
    """
    bot, top = _require_bounded(I)
    ok, _ = is_graded(I)
    if not ok:
        raise PosetError("recursive atom orderings need a graded poset")
    search = _RAOSearch(I, strategy)
    if bot == top:
        return RAOResult(True, [], None, 0)
    order = search.run(bot, top, 0)
    if order is None:
        return RAOResult(False, [], search.failure, len(search.memo))
    return RAOResult(True, [I.elements[a] for a in order], None, len(search.memo))


# -- order complexes ----------------------------------------------------------------------

def open_chains(I: FinitePoset, lo: int, hi: int) -> list[list[tuple[int, ...]]]:
    """Strict chains of the open interval (lo, hi), grouped by number of elements."""
    inner = I.up[lo] & I.down[hi] & ~(1 << lo) & ~(1 << hi)
    by_size: list[list[tuple[int, ...]]] = [[()]]
    frontier = [((), inner)]
    while True:
        nxt = []
        for chain, avail in frontier:
            for v in _bits(avail):
                nxt.append((chain + (v,), avail & I.up[v] & ~(1 << v)))
        if not nxt:
            return by_size
        by_size.append([c for c, _ in nxt])
        frontier = nxt


def interval_homology(I: FinitePoset, lo: int | None = None, hi: int | None = None) -> dict[int, int]:
    """Reduced Betti numbers of the order complex of the open interval (lo, hi)."""
    if lo is None or hi is None:
        if len(I) < 2:
            raise PosetError("interval needs at least two elements")
        lo, hi = _require_bounded(I)
    if lo == hi or not I.leq_idx(lo, hi):
        raise PosetError("interval needs lo < hi")
    chains = open_chains(I, lo, hi)
    index = [{c: k for k, c in enumerate(cs)} for cs in chains]
    dims = [len(cs) for cs in chains]
    images = []
    for size in range(1, len(chains)):
        rows = []
        for c in chains[size]:
            row = {}
            for t in range(size):
                row[index[size - 1][c[:t] + c[t + 1:]]] = (-1) ** t
            rows.append(row)
        images.append(rows)
    return sparse_homology_ranks(dims, images)


def mobius(I: FinitePoset, lo: int | None = None, hi: int | None = None) -> int:
    if lo is None or hi is None:
        lo, hi = _require_bounded(I)
    return _mobius_from(I, lo)[hi]


def _mobius_from(I: FinitePoset, lo: int) -> dict[int, int]:
    mu = {lo: 1}
    order = sorted(_bits(I.up[lo]), key=lambda i: _popcount(I.down[i]))
    for y in order:
        if y == lo:
            continue
        mu[y] = -sum(mu[z] for z in _bits(I.down[y] & I.up[lo] & ~(1 << y)))
    return mu


def euler_characteristic(betti: dict[int, int]) -> int:
    return sum((-1) ** d * b for d, b in betti.items())


# -- reports -------------------------------------------------------------------------------

@dataclass
class PosetReport:
    name: str
    size: int
    graded: bool
    length: int | None = None
    semimodular: bool | None = None
    semimodular_failures: list = field(default_factory=list)
    totally_semimodular: bool | None = None
    rao: RAOResult | None = None
    homology: dict | None = None
    mobius: int | None = None
    subintervals: int = 0
    cm: bool | None = None
    cm_failures: list = field(default_factory=list)
    euler_mismatches: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"interval": self.name, "size": self.size, "graded": self.graded, "length": self.length}
        if self.semimodular is not None:
            out["semimodular"] = self.semimodular
            out["semimodular_failures"] = [f.to_json() for f in self.semimodular_failures]
        if self.totally_semimodular is not None:
            out["totally_semimodular"] = self.totally_semimodular
        if self.rao is not None:
            out["rao"] = self.rao.to_json()
        if self.cm is not None:
            out["cm"] = self.cm
            out["homology"] = {str(k): v for k, v in sorted(self.homology.items())}
            out["mobius"] = self.mobius
            out["subintervals"] = self.subintervals
            out["cm_failures"] = self.cm_failures
            out["euler_mismatches"] = self.euler_mismatches
        return out


def check_cohen_macaulay(I: FinitePoset, name: str | None = None) -> PosetReport:
    """Homology of every open subinterval vanishes below its top degree; Euler checked against mobius."""
    bot, top = _require_bounded(I)
    ok, _ = is_graded(I)
    if not ok:
        raise PosetError("Cohen-Macaulayness is only tested on graded posets")
    ranks = _ranks(I)
    rep = PosetReport(name or str(I.elements[top]), len(I), True, ranks[top], cm=True)
    for x in range(len(I)):
        mu = _mobius_from(I, x)
        for y in _bits(I.up[x] & ~(1 << x)):
            rep.subintervals += 1
            betti = interval_homology(I, x, y)
            ell = ranks[y] - ranks[x]
            low = {d: b for d, b in betti.items() if d < ell - 2 and b}
            if low:
                rep.cm = False
                rep.cm_failures.append({"interval": [str(I.elements[x]), str(I.elements[y])],
                                        "betti": {str(d): b for d, b in sorted(betti.items())}})
            if euler_characteristic(betti) != mu[y]:
                rep.euler_mismatches.append([str(I.elements[x]), str(I.elements[y])])
            if x == bot and y == top:
                rep.homology = betti
                rep.mobius = mu[y]
    if rep.homology is None:
        rep.homology = {-1: 1}
        rep.mobius = 1
    return rep


def analyse_interval(
    I: FinitePoset,
    *,
    ambient: FinitePoset | None = None,
    semimodular: bool = False,
    rao: bool = False,
    cm: bool = False,
    strategy: str | Callable = "paper",
) -> PosetReport:
    bot, top = _require_bounded(I)
    ok, rank = is_graded(I)
    rep = PosetReport(str(I.elements[top]), len(I), ok, rank[I.elements[top]] if ok else None)
    if semimodular:
        rep.semimodular_failures = semimodular_failures(I, ambient)
        rep.semimodular = not rep.semimodular_failures
        rep.totally_semimodular = is_totally_semimodular(I)
    if rao and ok:
        rep.rao = verify_recursive_atom_ordering(I, strategy)
    if cm and ok:
        c = check_cohen_macaulay(I)
        rep.cm, rep.homology, rep.mobius = c.cm, c.homology, c.mobius
        rep.subintervals, rep.cm_failures, rep.euler_mismatches = c.subintervals, c.cm_failures, c.euler_mismatches
    return rep
