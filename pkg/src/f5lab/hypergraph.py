"""Core 3-uniform hypergraph, simple graph and 3-partition types.

Vertices are the integers ``0..n-1``.  Every edge is stored as an ascending
tuple, so ``(2, 0, 1)`` and ``(0, 1, 2)`` name the same edge.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, NamedTuple

Edge = tuple[int, int, int]
Pair = tuple[int, int]


def _pair(a: int, b: int) -> Pair:
    return (a, b) if a < b else (b, a)


class Hypergraph3:
    """Immutable 3-uniform hypergraph on ``range(n)``.

    ``edges`` is a tuple sorted lexicographically; ``index(e)`` gives the
    position of an edge in that tuple, which the solver uses as the variable
    number.
    """

    __slots__ = ("n", "edges", "_set", "_pairs", "_index")

    def __init__(self, n: int, edges: Iterable[Iterable[int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        canon = set()
        for t in edges:
            e = tuple(sorted(int(v) for v in t))
            if len(e) != 3:
                raise ValueError(f"edge {t!r} does not have exactly 3 vertices")
            if e[0] == e[1] or e[1] == e[2]:
                raise ValueError(f"edge {t!r} repeats a vertex")
            if e[0] < 0 or e[2] >= n:
                raise ValueError(f"edge {t!r} has a vertex outside [0, {n})")
            canon.add(e)
        self.n = n
        self.edges: tuple[Edge, ...] = tuple(sorted(canon))
        self._set = frozenset(self.edges)
        self._pairs = None
        self._index = None

    # -- container protocol -------------------------------------------------
    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)

    def __contains__(self, e) -> bool:
        return tuple(sorted(e)) in self._set

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph3):
            return NotImplemented
        return self.n == other.n and self._set == other._set

    def __hash__(self) -> int:
        return hash((self.n, self._set))

    def __repr__(self) -> str:
        return f"Hypergraph3(n={self.n}, m={len(self.edges)})"

    @property
    def edge_set(self) -> frozenset[Edge]:
        return self._set

    # -- indices --------------------------------------------------------------
    def index(self, e) -> int:
        if self._index is None:
            self._index = {f: i for i, f in enumerate(self.edges)}
        return self._index[tuple(sorted(e))]

    @property
    def pair_index(self) -> dict[Pair, frozenset[int]]:
        """Map from each covered pair to the set of vertices completing it."""
        if self._pairs is None:
            acc: dict[Pair, set[int]] = defaultdict(set)
            for a, b, c in self.edges:
                acc[(a, b)].add(c)
                acc[(a, c)].add(b)
                acc[(b, c)].add(a)
            self._pairs = {k: frozenset(v) for k, v in acc.items()}
        return self._pairs

    def neighbors(self, u: int, v: int) -> frozenset[int]:
        """Vertices ``z`` with ``uvz`` an edge."""
        return self.pair_index.get(_pair(u, v), frozenset())

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg

    # -- set algebra ------------------------------------------------------------
    def issubset(self, other: Hypergraph3) -> bool:
        return self.n == other.n and self._set <= other._set

    def restrict(self, edges: Iterable) -> Hypergraph3:
        return Hypergraph3(self.n, edges)

    def difference(self, other: Hypergraph3 | Iterable) -> Hypergraph3:
        drop = other.edge_set if isinstance(other, Hypergraph3) else {tuple(sorted(e)) for e in other}
        return Hypergraph3(self.n, (e for e in self.edges if e not in drop))

    # -- text format -----------------------------------------------------------
    def to_text(self) -> str:
        lines = [f"{self.n} {len(self.edges)}"]
        lines += [f"{a} {b} {c}" for a, b, c in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Hypergraph3:
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not rows or len(rows[0]) != 2:
            raise ValueError("first line must be 'n m'")
        n, m = int(rows[0][0]), int(rows[0][1])
        body = rows[1:]
        if len(body) != m:
            raise ValueError(f"header announces {m} edges, found {len(body)}")
        triples = []
        for r in body:
            if len(r) != 3:
                raise ValueError(f"edge line {' '.join(r)!r} must hold 3 vertices")
            a, b, c = (int(x) for x in r)
            if not a < b < c:
                raise ValueError(f"edge line {a} {b} {c} is not strictly ascending")
            triples.append((a, b, c))
        return cls(n, triples)


class Graph2:
    """Immutable simple graph on ``range(n)``; edges stored as ascending pairs."""

    __slots__ = ("n", "edges", "_adj")

    def __init__(self, n: int, edges: Iterable[Iterable[int]] = ()):
        canon = set()
        for t in edges:
            a, b = sorted(int(v) for v in t)
            if a == b:
                raise ValueError("loops are not allowed")
            if a < 0 or b >= n:
                raise ValueError(f"pair {(a, b)} outside [0, {n})")
            canon.add((a, b))
        self.n = n
        self.edges: frozenset[Pair] = frozenset(canon)
        self._adj = None

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Pair]:
        return iter(sorted(self.edges))

    def __contains__(self, pair) -> bool:
        a, b = pair
        return _pair(a, b) in self.edges

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph2):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph2(n={self.n}, edges={sorted(self.edges)})"

    def __and__(self, other: Graph2) -> Graph2:
        return Graph2(self.n, self.edges & other.edges)

    def __le__(self, other: Graph2) -> bool:
        return self.edges <= other.edges

    def neighbors(self, v: int) -> frozenset[int]:
        if self._adj is None:
            adj: dict[int, set[int]] = defaultdict(set)
            for a, b in self.edges:
                adj[a].add(b)
                adj[b].add(a)
            self._adj = {k: frozenset(s) for k, s in adj.items()}
        return self._adj.get(v, frozenset())

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.n)), default=0)

    def induced(self, vertices: Iterable[int]) -> Graph2:
        keep = set(vertices)
        return Graph2(self.n, (e for e in self.edges if e[0] in keep and e[1] in keep))


@dataclass(frozen=True)
class Partition3:
    """Assignment of every vertex to part 1, 2 or 3."""

    assignment: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(int(x) for x in self.assignment))
        bad = [x for x in self.assignment if x not in (1, 2, 3)]
        if bad:
            raise ValueError(f"part indices must be in {{1,2,3}}, got {bad[0]}")

    @classmethod
    def from_parts(cls, n: int, v1: Iterable[int], v2: Iterable[int], v3: Iterable[int]) -> Partition3:
        a = [0] * n
        for label, part in ((1, v1), (2, v2), (3, v3)):
            for v in part:
                if a[v]:
                    raise ValueError(f"vertex {v} placed in two parts")
                a[v] = label
        if 0 in a:
            raise ValueError(f"vertex {a.index(0)} not assigned")
        return cls(tuple(a))

    @property
    def n(self) -> int:
        return len(self.assignment)

    def part(self, i: int) -> frozenset[int]:
        return frozenset(v for v, x in enumerate(self.assignment) if x == i)

    @property
    def parts(self) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
        return self.part(1), self.part(2), self.part(3)

    @property
    def sizes(self) -> tuple[int, int, int]:
        a = self.assignment
        return a.count(1), a.count(2), a.count(3)

    def __getitem__(self, v: int) -> int:
        return self.assignment[v]

    def is_crossing(self, e) -> bool:
        a = self.assignment
        return len({a[v] for v in e}) == 3

    def relabel(self, perm: tuple[int, int, int]) -> Partition3:
        """Send part ``i`` to ``perm[i-1]``."""
        return Partition3(tuple(perm[x - 1] for x in self.assignment))

    def to_text(self) -> str:
        return " ".join(str(x) for x in self.assignment) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Partition3:
        return cls(tuple(int(x) for x in text.split()))


# ---------------------------------------------------------------------------
# constructors


def build(n: int, triples: Iterable[Iterable[int]]) -> Hypergraph3:
    return Hypergraph3(n, triples)


def complete(n: int) -> Hypergraph3:
    return Hypergraph3(n, combinations(range(n), 3))


F5 = Hypergraph3(5, [(0, 1, 2), (0, 1, 3), (2, 3, 4)])


def turan_sizes(n: int) -> tuple[int, int, int]:
    return n // 3, (n + 1) // 3, (n + 2) // 3


def s_of_n(n: int) -> int:
    a, b, c = turan_sizes(n)
    return a * b * c


def complete_tripartite(sizes: tuple[int, int, int]) -> tuple[Hypergraph3, Partition3]:
    """Complete 3-partite hypergraph with consecutive blocks as parts.

    With ``turan_sizes(n)`` this is S(n).
    """
    if len(sizes) != 3 or any(int(s) < 0 for s in sizes):
        raise ValueError("need three non-negative part sizes")
    a, b, c = (int(s) for s in sizes)
    n = a + b + c
    v1, v2, v3 = range(a), range(a, a + b), range(a + b, n)
    h = Hypergraph3(n, ((x, y, z) for x in v1 for y in v2 for z in v3))
    return h, Partition3.from_parts(n, v1, v2, v3)


def turan(n: int) -> tuple[Hypergraph3, Partition3]:
    return complete_tripartite(turan_sizes(n))


# ---------------------------------------------------------------------------
# local queries


def shadow(h: Hypergraph3) -> Graph2:
    return Graph2(h.n, h.pair_index.keys())


def link_graph(h: Hypergraph3, v: int, s: Iterable[int], t: Iterable[int]) -> Graph2:
    """Pairs ``yz`` with ``y`` in ``s``, ``z`` in ``t`` and ``vyz`` an edge."""
    s, t = set(s), set(t)
    out = set()
    for y in s:
        if y == v:
            continue
        for z in h.neighbors(v, y):
            if z in t and z != y:
                out.add(_pair(y, z))
    return Graph2(h.n, out)


def codegree(h: Hypergraph3, u: int, v: int, s: Iterable[int] | None = None) -> tuple[frozenset[int], int]:
    if u == v:
        raise ValueError("codegree needs two distinct vertices")
    nb = h.neighbors(u, v)
    if s is not None:
        nb = nb & frozenset(s)
    return nb, len(nb)


def common_link(h: Hypergraph3, u: int, v: int, s: Iterable[int], t: Iterable[int]) -> Graph2:
    if u == v:
        raise ValueError("common link needs two distinct vertices")
    s, t = set(s), set(t)
    return link_graph(h, u, s, t) & link_graph(h, v, s, t)


class Split(NamedTuple):
    crossing: Hypergraph3  # H_pi
    missing: Hypergraph3  # crossing edges of G absent from H
    h1: Hypergraph3
    h2: Hypergraph3
    h3: Hypergraph3

    def inside(self, i: int) -> Hypergraph3:
        return (self.h1, self.h2, self.h3)[i - 1]


def crossing_edges(g: Hypergraph3, pi: Partition3) -> Hypergraph3:
    return Hypergraph3(g.n, (e for e in g.edges if pi.is_crossing(e)))


def partition_split(g: Hypergraph3, h: Hypergraph3, pi: Partition3) -> Split:
    if h.n != g.n or pi.n != g.n:
        raise ValueError("G, H and the partition must share the vertex count")
    if not h.issubset(g):
        raise ValueError("H is not a subhypergraph of G")
    a = pi.assignment
    cross, inside = [], ([], [], [])
    for e in h.edges:
        labels = [a[v] for v in e]
        if len(set(labels)) == 3:
            cross.append(e)
        else:
            # two vertices share a part; a 3-edge cannot have two such parts
            for i in (1, 2, 3):
                if labels.count(i) >= 2:
                    inside[i - 1].append(e)
                    break
    hs = h.edge_set
    missing = [e for e in g.edges if pi.is_crossing(e) and e not in hs]
    n = g.n
    return Split(
        Hypergraph3(n, cross),
        Hypergraph3(n, missing),
        Hypergraph3(n, inside[0]),
        Hypergraph3(n, inside[1]),
        Hypergraph3(n, inside[2]),
    )


def q_threshold(p: float, n: int) -> float:
    return 0.8 * p * p * n * n / 9


def crossing_links(g: Hypergraph3, pi: Partition3, vertices: Iterable[int]) -> dict[int, frozenset[Pair]]:
    """For each ``x`` the set of ``(y, z)`` with ``y`` in V2, ``z`` in V3 and ``xyz`` in G."""
    a = pi.assignment
    out: dict[int, set] = {x: set() for x in vertices}
    for e in g.edges:
        labels = [a[v] for v in e]
        if sorted(labels) != [1, 2, 3]:
            continue
        x = e[labels.index(1)]
        if x in out:
            out[x].add((e[labels.index(2)], e[labels.index(3)]))
    return {x: frozenset(s) for x, s in out.items()}


def q_set(g: Hypergraph3, pi: Partition3, p: float) -> set[Pair]:
    """Pairs inside V1 whose common V2-V3 link in G is below ``0.8 p^2 n^2 / 9``."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    thr = q_threshold(p, g.n)
    v1 = sorted(pi.part(1))
    links = crossing_links(g, pi, v1)
    return {(x, y) for x, y in combinations(v1, 2) if len(links[x] & links[y]) < thr}


def is_balanced(pi: Partition3) -> bool:
    """Every part size within ``(1 +- 1e-10) n / 3``, evaluated exactly."""
    n = pi.n
    lo = Fraction(10**10 - 1, 10**10) * Fraction(n, 3)
    hi = Fraction(10**10 + 1, 10**10) * Fraction(n, 3)
    return all(lo <= s <= hi for s in pi.sizes)
