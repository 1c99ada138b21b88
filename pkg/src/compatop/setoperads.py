"""Finite set operads: Com, 2Com, Perm, As and their Hadamard products.

Elements of P_n are structures on the positions 1..n.  The right action is
transport of structure along sigma^{-1}; composition ``compose(p, [p_1..p_k])``
places the inputs of p_j on consecutive positions in order j = 1..k.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Any, Iterator, Sequence

from .permutations import Permutation, block_permutation, direct_sum


@dataclass(frozen=True)
class SetOperadElement:
    operad_id: str
    arity: int
    payload: Any

    def __repr__(self):
        return f"{self.operad_id}[{self.arity}]({self.payload!r})"


class SetOperad:
    """Base class; subclasses supply ``_elements``, ``_act`` and ``_compose`` on payloads."""

    id: str = "?"

    def _elements(self, n: int) -> Sequence[Any]:
        raise NotImplementedError

    def _act(self, n: int, payload, sigma: Permutation):
        raise NotImplementedError

    def _compose(self, payload, args: Sequence[SetOperadElement]):
        raise NotImplementedError

    def __repr__(self):
        return f"<SetOperad {self.id}>"

    def __eq__(self, other):
        return isinstance(other, SetOperad) and self.id == other.id

    def __hash__(self):
        return hash(self.id)

    def element(self, n: int, payload) -> SetOperadElement:
        if payload not in self._elements(n):
            raise ValueError(f"{payload!r} is not an element of {self.id}_{n}")
        return SetOperadElement(self.id, n, payload)

    def enumerate(self, n: int) -> tuple[SetOperadElement, ...]:
        return _enumerate_cached(self, n)

    def unit(self) -> SetOperadElement:
        (u,) = self.enumerate(1)
        return u

    def _own(self, p: SetOperadElement) -> None:
        if not isinstance(p, SetOperadElement) or p.operad_id != self.id:
            raise TypeError(f"{p!r} is not an element of {self.id}")

    def act(self, p: SetOperadElement, sigma: Permutation) -> SetOperadElement:
        self._own(p)
        if len(sigma) != p.arity:
            raise ValueError(f"cannot act on arity {p.arity} with {sigma!r}")
        return SetOperadElement(self.id, p.arity, self._act(p.arity, p.payload, sigma))

    def compose(self, p: SetOperadElement, args: Sequence[SetOperadElement]) -> SetOperadElement:
        self._own(p)
        for a in args:
            self._own(a)
        if len(args) != p.arity:
            raise ValueError(f"{p!r} takes {p.arity} arguments, got {len(args)}")
        n = sum(a.arity for a in args)
        return SetOperadElement(self.id, n, self._compose(p.payload, args))


@lru_cache(maxsize=None)
def _enumerate_cached(P: SetOperad, n: int) -> tuple[SetOperadElement, ...]:
    if n < 1:
        raise ValueError("arity must be positive")
    return tuple(SetOperadElement(P.id, n, x) for x in P._elements(n))


class Com(SetOperad):
    id = "com"

    def _elements(self, n):
        return (None,)

    def _act(self, n, payload, sigma):
        return None

    def _compose(self, payload, args):
        return None


class Com2(SetOperad):
    """Payload i of D^n_i is the number of white products, 0 <= i <= n-1."""

    id = "com2"

    def _elements(self, n):
        return tuple(range(n))

    def _act(self, n, payload, sigma):
        return payload

    def _compose(self, payload, args):
        return payload + sum(a.payload for a in args)


class Perm(SetOperad):
    """Payload is the pointed position."""

    id = "perm"

    def _elements(self, n):
        return tuple(range(1, n + 1))

    def _act(self, n, payload, sigma):
        return sigma.inverse()(payload)

    def _compose(self, payload, args):
        offset = sum(a.arity for a in args[: payload - 1])
        return offset + args[payload - 1].payload


class As(SetOperad):
    """Payload is the word (w_1..w_n) read as the monomial x_{w_1} ... x_{w_n}."""

    id = "as"

    def _elements(self, n):
        return tuple(Permutation.all(n))

    def _act(self, n, payload, sigma):
        inv = sigma.inverse()
        return Permutation(inv(x) for x in payload)

    def _compose(self, payload, args):
        offsets = [0]
        for a in args:
            offsets.append(offsets[-1] + a.arity)
        word = []
        for t in payload:
            word.extend(offsets[t - 1] + x for x in args[t - 1].payload)
        return Permutation(word)


class Hadamard(SetOperad):
    """Arity-wise cartesian product; payloads are pairs of factor elements."""

    def __init__(self, left: SetOperad, right: SetOperad):
        self.left = left
        self.right = right
        self.id = f"{left.id}*{right.id}"

    def _elements(self, n):
        return tuple(product(self.left.enumerate(n), self.right.enumerate(n)))

    def _act(self, n, payload, sigma):
        p, q = payload
        return (self.left.act(p, sigma), self.right.act(q, sigma))

    def _compose(self, payload, args):
        p, q = payload
        return (
            self.left.compose(p, [a.payload[0] for a in args]),
            self.right.compose(q, [a.payload[1] for a in args]),
        )


BUILTIN = {"com": Com, "com2": Com2, "perm": Perm, "as": As}
_INSTANCES: dict[str, SetOperad] = {}


def builtin_operad(name: str) -> SetOperad:
    """One of "com", "com2", "perm", "as", or a Hadamard product such as "perm*com2"."""
    if name in _INSTANCES:
        return _INSTANCES[name]
    if "*" in name:
        left, _, right = name.rpartition("*")
        op = hadamard_product(builtin_operad(left), builtin_operad(right))
    elif name in BUILTIN:
        op = BUILTIN[name]()
    else:
        raise KeyError(f"unknown operad {name!r}")
    _INSTANCES[name] = op
    return op


def hadamard_product(P: SetOperad, Q: SetOperad) -> SetOperad:
    return Hadamard(P, Q)


def linearized_dim(P: SetOperad, n: int) -> int:
    return len(P.enumerate(n))


# -- exhaustive verification --------------------------------------------------------

@dataclass
class OperadReport:
    operad: str
    max_n: int
    check: str
    passed: bool = True
    counterexample: str | None = None
    cases: int = 0

    def fail(self, msg: str) -> None:
        if self.passed:
            self.passed = False
            self.counterexample = msg

    def to_json(self) -> dict:
        out = {"operad": self.operad, "max_n": self.max_n, "check": self.check,
               "passed": self.passed, "cases": self.cases}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def compositions(total_max: int, k: int) -> Iterator[tuple[int, ...]]:
    """Tuples of k positive integers with sum <= total_max."""
    if k == 0:
        yield ()
        return
    for first in range(1, total_max - k + 2):
        for rest in compositions(total_max - first, k - 1):
            yield (first,) + rest


def _arg_tuples(P: SetOperad, arities: Sequence[int]) -> Iterator[tuple[SetOperadElement, ...]]:
    return product(*(P.enumerate(m) for m in arities))


def check_operad_axioms(P: SetOperad, max_n: int) -> OperadReport:
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    rep = OperadReport(P.id, max_n, "axioms")
    u = P.unit()
    for n in range(1, max_n + 1):
        elems = P.enumerate(n)
        if len(set(elems)) != len(elems):
            rep.fail(f"duplicate elements in arity {n}")
        group = list(Permutation.all(n))
        for p in elems:
            rep.cases += 1
            if P.compose(u, [p]) != p:
                rep.fail(f"left unit fails at {p!r}: got {P.compose(u, [p])!r}")
            if P.compose(p, [u] * n) != p:
                rep.fail(f"right unit fails at {p!r}: got {P.compose(p, [u] * n)!r}")
            if P.act(p, Permutation.identity(n)) != p:
                rep.fail(f"identity acts nontrivially on {p!r}")
            for s in group:
                ps = P.act(p, s)
                if ps not in elems:
                    rep.fail(f"{p!r}.{tuple(s)} leaves P_{n}")
                for t in group:
                    if P.act(ps, t) != P.act(p, s * t):
                        rep.fail(f"not a right action: {p!r} with {tuple(s)}, {tuple(t)}")
                        break
    for k in range(1, max_n + 1):
        for p in P.enumerate(k):
            for arities in compositions(max_n, k):
                for args in _arg_tuples(P, arities):
                    _check_composite(P, p, args, arities, max_n, rep)
                    if not rep.passed:
                        return rep
    return rep


def _check_composite(P, p, args, arities, max_n, rep) -> None:
    rep.cases += 1
    k = len(args)
    base = P.compose(p, args)
    # outer equivariance
    for tau in Permutation.all(k):
        lhs = P.compose(P.act(p, tau), [args[tau(j) - 1] for j in range(1, k + 1)])
        rhs = P.act(base, block_permutation(tau, arities))
        if lhs != rhs:
            rep.fail(f"outer equivariance fails: p={p!r} args={args!r} tau={tuple(tau)}: {lhs!r} != {rhs!r}")
            return
    # inner equivariance
    for sigmas in product(*(list(Permutation.all(m)) for m in arities)):
        lhs = P.compose(p, [P.act(a, s) for a, s in zip(args, sigmas)])
        rhs = P.act(base, direct_sum(sigmas))
        if lhs != rhs:
            rep.fail(f"inner equivariance fails: p={p!r} args={args!r} sigmas={[tuple(s) for s in sigmas]}")
            return
    # associativity against every second level of arguments
    n = sum(arities)
    for grand_arities in compositions(max_n, n):
        for grand in _arg_tuples(P, grand_arities):
            lhs = P.compose(base, grand)
            inner = []
            pos = 0
            for a in args:
                inner.append(P.compose(a, grand[pos: pos + a.arity]))
                pos += a.arity
            rhs = P.compose(p, inner)
            if lhs != rhs:
                rep.fail(f"associativity fails: p={p!r} args={args!r} grand={grand!r}: {lhs!r} != {rhs!r}")
                return


def check_basic_set(P: SetOperad, max_n: int) -> OperadReport:
    if max_n < 2:
        raise ValueError("max_n must be at least 2")
    rep = OperadReport(P.id, max_n, "basic-set")
    for k in range(1, max_n + 1):
        elems = P.enumerate(k)
        for arities in compositions(max_n, k):
            for args in _arg_tuples(P, arities):
                rep.cases += 1
                seen: dict[SetOperadElement, SetOperadElement] = {}
                for p in elems:
                    q = P.compose(p, args)
                    if q in seen:
                        rep.fail(f"compose(-; {args!r}) identifies {seen[q]!r} and {p!r}")
                        return rep
                    seen[q] = p
    return rep
