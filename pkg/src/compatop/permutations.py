"""Permutations of [n], written 1-indexed: ``Permutation((2, 1, 3))`` sends 1->2, 2->1, 3->3."""

from __future__ import annotations

from itertools import permutations as _itperms
from typing import Iterator, Sequence


class Permutation(tuple):
    """An element of the symmetric group S_n.

    Composition follows functions: ``(s * t)(x) == s(t(x))``.
    """

    def __new__(cls, images: Sequence[int]):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of [{len(images)}]: {images}")
        return super().__new__(cls, images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def all(cls, n: int) -> Iterator["Permutation"]:
        for p in _itperms(range(1, n + 1)):
            yield cls(p)

    @classmethod
    def transposition(cls, n: int, a: int, b: int) -> "Permutation":
        im = list(range(1, n + 1))
        im[a - 1], im[b - 1] = b, a
        return cls(im)

    @property
    def n(self) -> int:
        return len(self)

    def __call__(self, x: int) -> int:
        return tuple.__getitem__(self, x - 1)

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(other) != len(self):
            raise ValueError("composing permutations of different degrees")
        return Permutation(self(other(x)) for x in range(1, len(self) + 1))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for i, x in enumerate(self, 1):
            inv[x - 1] = i
        return Permutation(inv)

    @property
    def sign(self) -> int:
        seen = set()
        s = 1
        for i in range(1, len(self) + 1):
            if i in seen:
                continue
            length = 0
            j = i
            while j not in seen:
                seen.add(j)
                j = self(j)
                length += 1
            if length % 2 == 0:
                s = -s
        return s

    def is_identity(self) -> bool:
        return all(x == i for i, x in enumerate(self, 1))

    def __repr__(self):
        return f"Permutation({tuple(self)})"


def direct_sum(perms: Sequence[Permutation]) -> Permutation:
    """Block-diagonal permutation acting on consecutive blocks."""
    out: list[int] = []
    off = 0
    for p in perms:
        out.extend(off + x for x in p)
        off += len(p)
    return Permutation(out)


def block_permutation(tau: Permutation, arities: Sequence[int]) -> Permutation:
    """The permutation of blocks induced by ``tau``.

    ``arities[r]`` is the size of block r+1 in the original layout.  In the new
    layout slot j holds original block tau(j); the returned permutation sends
    position x of slot j to the position of the same element in the original layout.
    """
    k = len(arities)
    if len(tau) != k:
        raise ValueError("tau must permute the blocks")
    off = [0] * k
    for r in range(1, k):
        off[r] = off[r - 1] + arities[r - 1]
    images: list[int] = []
    for j in range(1, k + 1):
        src = tau(j) - 1
        images.extend(off[src] + x for x in range(1, arities[src] + 1))
    return Permutation(images)
