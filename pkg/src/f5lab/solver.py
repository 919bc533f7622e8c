"""Maximum F5-free subhypergraphs, best tripartite subhypergraphs, tripartiteness.

The exact F5 solver is a branch and bound over edge inclusion.  Every F5 copy
of the host is a triple of edges that may not all be chosen.  Choosing two
edges of a copy forces the third out.  The bound at a node is::

    chosen + undecided - (number of copies packed with disjoint undecided parts)

since each packed copy must still lose one undecided edge.  Branching takes
the undecided edge lying in the most live copies, "in" before "out".
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from ._backend import BudgetExhausted, best_partition, max_free_bnb
from .hypergraph import Graph2, Hypergraph3, Partition3, crossing_edges, shadow
from .motifs import f5_copies

log = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 2_000_000
DEFAULT_CAP = 10**6
DEFAULT_PARTITION_BUDGET = 50_000_000


class SolverBudgetExceeded(RuntimeError):
    """Exact search stopped before proving optimality.

    ``reason`` is ``"nodes"`` when the node budget ran out and ``"root_gap"``
    when the root bound exceeded the best known value by more than the allowed
    gap, so the search was not started.  ``incumbent`` is the best F5-free
    subhypergraph known at that point.
    """

    def __init__(self, reason: str, nodes: int, incumbent: Hypergraph3 | None, detail: str = ""):
        super().__init__(f"exact search censored ({reason}) after {nodes} nodes {detail}".rstrip())
        self.reason = reason
        self.nodes = nodes
        self.incumbent = incumbent


@dataclass
class SolveResult:
    optimum: int
    witness: Hypergraph3
    all_optima: list[Hypergraph3] | None = None
    truncated: bool = False
    mode: str = "exact"
    nodes: int = 0
    seconds: float = 0.0
    root_bound: int | None = None


@dataclass
class TripartiteCertificate:
    partition: Partition3 | None

    def __bool__(self) -> bool:
        return self.partition is not None


def conflict_triples(g: Hypergraph3) -> list[tuple[int, int, int]]:
    """F5 copies of ``g`` as sorted triples of edge indices."""
    idx = g.index
    return [tuple(sorted((idx(c.pair1), idx(c.pair2), idx(c.base)))) for c in f5_copies(g)]


def _packing_bound(m: int, copies) -> int:
    used = np.zeros(m, dtype=bool)
    loss = 0
    for i, j, k in copies:
        if not (used[i] or used[j] or used[k]):
            used[i] = used[j] = used[k] = True
            loss += 1
    return m - loss


def greedy_f5_free(g: Hypergraph3, copies=None) -> Hypergraph3:
    """Maximal F5-free subhypergraph.

    While a copy survives, drop the edge lying in the most surviving copies
    (lowest index on ties); then put back, in index order, every dropped edge
    that no longer completes a copy.
    """
    m = len(g)
    copies = conflict_triples(g) if copies is None else copies
    alive = np.ones(m, dtype=bool)
    cp = np.asarray(copies, dtype=np.int64).reshape(-1, 3)
    dropped = []
    while len(cp):
        live = alive[cp].all(axis=1)
        cp = cp[live]
        if not len(cp):
            break
        score = np.bincount(cp.ravel(), minlength=m)
        e = int(np.argmax(score))
        alive[e] = False
        dropped.append(e)
    full = np.asarray(copies, dtype=np.int64).reshape(-1, 3)
    inc = [[] for _ in range(m)]
    for c, row in enumerate(full):
        for e in row:
            inc[e].append(c)
    for e in sorted(dropped):
        if all(not alive[[f for f in full[c] if f != e]].all() for c in inc[e]):
            alive[e] = True
    return g.restrict(g.edges[i] for i in range(m) if alive[i])


def max_f5_free(
    g: Hypergraph3,
    mode: str = "exact",
    enumerate_all: bool = False,
    cap: int = DEFAULT_CAP,
    node_budget: int = DEFAULT_NODE_BUDGET,
    initial: Hypergraph3 | None = None,
    max_root_gap: int | None = None,
) -> SolveResult:
    """Largest F5-free subhypergraph of ``g``.

    ``initial`` may supply a known F5-free subhypergraph (for instance the
    crossing edges of a best partition); its size seeds the incumbent.  With
    ``enumerate_all`` every maximum solution is collected, up to ``cap``.
    Raises :class:`SolverBudgetExceeded` when the exact search is censored.
    """
    t0 = time.perf_counter()
    copies = conflict_triples(g)
    greedy = greedy_f5_free(g, copies)
    if mode == "greedy":
        return SolveResult(len(greedy), greedy, None, False, "greedy", 0, time.perf_counter() - t0)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    incumbent = greedy
    if initial is not None:
        if not initial.issubset(g):
            raise ValueError("initial solution is not a subhypergraph of G")
        if len(initial) > len(greedy):
            incumbent = initial
    m = len(g)
    root = _packing_bound(m, copies)
    lower = len(incumbent)
    if max_root_gap is not None and root - lower > max_root_gap:
        raise SolverBudgetExceeded("root_gap", 0, incumbent, f"(root bound {root}, incumbent {lower})")
    try:
        best, sols, nodes, truncated = max_free_bnb(m, copies, lower, enumerate_all, cap, node_budget)
    except BudgetExhausted as exc:
        found = exc.solutions[0] if exc.solutions else None
        if found is not None and len(found) > lower:
            incumbent = g.restrict(g.edges[i] for i in found)
        raise SolverBudgetExceeded("nodes", exc.nodes, incumbent) from None
    if best < 0:
        raise ValueError("the initial solution is larger than any F5-free subhypergraph")
    hosts = [g.restrict(g.edges[i] for i in s) for s in sols]
    dt = time.perf_counter() - t0
    log.debug("exact solve m=%d copies=%d optimum=%d nodes=%d %.3fs", m, len(copies), best, nodes, dt)
    return SolveResult(best, hosts[0], hosts if enumerate_all else None, truncated, "exact", nodes, dt, root)


# ---------------------------------------------------------------------------
# partitions


def _local_search(g: Hypergraph3, restarts: int, seed: int) -> tuple[int, Partition3]:
    """Best-improvement single vertex moves from ``restarts`` random starts."""
    n = g.n
    rng = np.random.Generator(np.random.PCG64(seed))
    others = [[] for _ in range(n)]
    for a, b, c in g.edges:
        others[a].append((b, c))
        others[b].append((a, c))
        others[c].append((a, b))
    best_val, best_asg = -1, None
    for _ in range(max(1, restarts)):
        asg = list(rng.integers(1, 4, size=n))
        while True:
            move, gain = None, 0
            for v in range(n):
                cur = asg[v]
                here = sum(1 for a, b in others[v] if len({asg[a], asg[b], cur}) == 3)
                for q in (1, 2, 3):
                    if q == cur:
                        continue
                    there = sum(1 for a, b in others[v] if len({asg[a], asg[b], q}) == 3)
                    if there - here > gain:
                        move, gain = (v, q), there - here
            if move is None:
                break
            asg[move[0]] = move[1]
        val = sum(1 for e in g.edges if len({asg[v] for v in e}) == 3)
        if val > best_val:
            best_val, best_asg = val, tuple(int(x) for x in asg)
    return best_val, Partition3(best_asg)


def t_of_g(
    g: Hypergraph3,
    mode: str = "exact",
    node_budget: int = DEFAULT_PARTITION_BUDGET,
    seed: int = 0,
    restarts: int = 20,
) -> tuple[int, Partition3]:
    """Size of a largest tripartite subhypergraph, with a partition attaining it.

    Exact mode walks all assignments with part labels in order of first use,
    so each partition is met once up to renaming its parts, and returns the
    first maximum in that order.  ``local_search`` returns a lower bound.
    """
    if mode == "local_search":
        return _local_search(g, restarts, seed)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    if g.n == 0:
        return 0, Partition3(())
    try:
        best, asg, _ = best_partition(g.n, g.edges, node_budget)
    except BudgetExhausted as exc:
        raise SolverBudgetExceeded("nodes", exc.nodes, None, "(partition enumeration)") from None
    return best, Partition3(tuple(x + 1 for x in asg))


def best_partition_for(h: Hypergraph3, mode: str = "exact", **kw) -> Partition3:
    return t_of_g(h, mode, **kw)[1]


def is_tripartite(h: Hypergraph3) -> TripartiteCertificate:
    """Search for a partition making every edge rainbow.

    An edge is rainbow exactly when its three pairs get distinct parts, so this
    is a proper 3-colouring of the shadow graph, found by backtracking in
    saturation order with forward checking.
    """
    sh: Graph2 = shadow(h)
    n = h.n
    adj = [sorted(sh.neighbors(v)) for v in range(n)]
    colour = [0] * n
    dom = [0b111] * n
    order_hint = sorted(range(n), key=lambda v: (-len(adj[v]), v))

    def pick():
        best, key = -1, None
        for v in order_hint:
            if colour[v] or not adj[v]:
                continue
            k = (bin(dom[v]).count("1"), -len(adj[v]), v)
            if key is None or k < key:
                best, key = v, k
        return best

    def solve(top):
        v = pick()
        if v < 0:
            return True
        for c in (1, 2, 3):
            if not dom[v] & (1 << (c - 1)) or c > top + 1:
                continue
            saved = []
            ok = True
            colour[v] = c
            for u in adj[v]:
                if not colour[u] and dom[u] & (1 << (c - 1)):
                    saved.append((u, dom[u]))
                    dom[u] &= ~(1 << (c - 1))
                    if not dom[u]:
                        ok = False
                        break
            if ok and solve(max(top, c)):
                return True
            colour[v] = 0
            for u, d in saved:
                dom[u] = d
        return False

    if not solve(0):
        return TripartiteCertificate(None)
    return TripartiteCertificate(Partition3(tuple(c or 1 for c in colour)))


@dataclass
class OptimaCheck:
    optimum: int
    t_value: int
    optimum_ge_t: bool
    all_free: bool
    tripartite_flags: list[bool] = field(default_factory=list)
    truncated: bool = False

    @property
    def every_optimum_tripartite(self) -> bool:
        return all(self.tripartite_flags)


def verify_max_and_tripartite(g: Hypergraph3, result: SolveResult, t_value: int | None = None) -> OptimaCheck:
    """Check ``optimum >= t(G)`` and test every enumerated optimum for tripartiteness."""
    from .motifs import count_f5

    if result.mode != "exact" or result.all_optima is None:
        raise ValueError("needs an exact result produced with enumerate_all")
    if t_value is None:
        t_value = t_of_g(g)[0]
    flags = [bool(is_tripartite(h)) for h in result.all_optima]
    free = all(count_f5(h) == 0 and h.issubset(g) and len(h) == result.optimum for h in result.all_optima)
    return OptimaCheck(result.optimum, t_value, result.optimum >= t_value, free, flags, result.truncated)


def crossing_subgraph(g: Hypergraph3, pi: Partition3) -> Hypergraph3:
    return crossing_edges(g, pi)
