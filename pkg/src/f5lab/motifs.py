"""Counting and enumeration of F5, K4-minus and the F5-hat pattern.

Copies are unlabeled: an F5 copy is a set of three host edges ``{aby, abz,
yzw}`` with five distinct vertices.  Its shared pair ``{a, b}`` is unique (the
other two edge pairs meet in a single vertex), so the pair-based scan below
meets every copy exactly once.  The number of labeled embeddings is four times
the copy count.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterator

from .hypergraph import Edge, Hypergraph3, Partition3, _pair


@dataclass(frozen=True)
class F5Copy:
    pair1: Edge
    pair2: Edge
    base: Edge

    @property
    def edges(self) -> tuple[Edge, Edge, Edge]:
        return (self.pair1, self.pair2, self.base)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.pair1) | frozenset(self.pair2) | frozenset(self.base)

    def check(self) -> None:
        """Raise ``AssertionError`` if the three edges do not form an F5."""
        e1, e2, e3 = map(frozenset, self.edges)
        assert len({self.pair1, self.pair2, self.base}) == 3
        assert len(e1 | e2 | e3) == 5
        shared = e1 & e2
        assert len(shared) == 2
        assert not (e3 & shared)


def f5_copies(h: Hypergraph3) -> Iterator[F5Copy]:
    """Every F5 copy of ``h`` once, ordered by shared pair then ``(y, z)`` then base."""
    pairs = h.pair_index
    for (a, b) in sorted(pairs):
        nbrs = sorted(pairs[(a, b)])
        if len(nbrs) < 2:
            continue
        for y, z in combinations(nbrs, 2):
            for w in sorted(pairs.get((y, z), ())):
                if w == a or w == b:
                    continue
                yield F5Copy(
                    tuple(sorted((a, b, y))),
                    tuple(sorted((a, b, z))),
                    tuple(sorted((y, z, w))),
                )


def count_f5(h: Hypergraph3) -> int:
    pairs = h.pair_index
    total = 0
    for (a, b), nb in pairs.items():
        if len(nb) < 2:
            continue
        for y, z in combinations(nb, 2):
            w = pairs.get(_pair(y, z))
            if w:
                total += len(w) - (a in w) - (b in w)
    return total


def is_f5_free(h: Hypergraph3) -> tuple[bool, F5Copy | None]:
    for copy in f5_copies(h):
        return False, copy
    return True, None


def k4minus_sets(h: Hypergraph3) -> dict[tuple[int, int, int, int], int]:
    """4-sets spanning at least two edges, mapped to their edge count."""
    # any two triples inside a 4-set share a pair, so codegree scans find them all
    out: dict[tuple[int, int, int, int], int] = {}
    es = h.edge_set
    for (a, b), nb in h.pair_index.items():
        for x, y in combinations(sorted(nb), 2):
            q = tuple(sorted((a, b, x, y)))
            if q not in out:
                out[q] = sum(1 for t in combinations(q, 3) if t in es)
    return out


def count_k4minus(h: Hypergraph3) -> int:
    """Number of 3-edge subsets spanning exactly four vertices."""
    return sum(comb(t, 3) for t in k4minus_sets(h).values())


@dataclass(frozen=True)
class F5HatCopy:
    w1: int
    w2: int
    y: int
    z: int
    witness_e: Edge

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset((self.w1, self.w2, self.y, self.z))


def f5hat_copies(g: Hypergraph3, h: Hypergraph3, pi: Partition3) -> Iterator[F5HatCopy]:
    """4-sets ``{w1, w2, y, z}`` with ``w1, w2`` in V1, ``y`` in V2, ``z`` in V3.

    Both ``w1yz`` and ``w2yz`` are edges of G and some edge of H contains
    ``w1, w2`` and avoids ``y, z``.  The reported witness is the smallest such
    edge.  Ordered by ``(w1, w2, y, z)``.
    """
    if not h.issubset(g):
        raise ValueError("H is not a subhypergraph of G")
    a = pi.assignment
    v2 = pi.part(2)
    v3 = pi.part(3)
    for (w1, w2), thirds in sorted(h.pair_index.items()):
        if a[w1] != 1 or a[w2] != 1:
            continue
        thirds = sorted(thirds)
        for y in sorted(v2):
            zs = g.neighbors(w1, y) & g.neighbors(w2, y) & v3
            for z in sorted(zs):
                for t in thirds:
                    if t != y and t != z:
                        yield F5HatCopy(w1, w2, y, z, tuple(sorted((w1, w2, t))))
                        break


def count_f5hat(g: Hypergraph3, h: Hypergraph3, pi: Partition3) -> int:
    return sum(1 for _ in f5hat_copies(g, h, pi))
