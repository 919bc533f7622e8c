"""Pure-Python kernels.  ``_core.pyx`` mirrors these step for step.

Both backends must return identical results, including which witness and
which order of optima, so any change here has to be made there too.
"""

from __future__ import annotations

import sys


class BudgetExhausted(Exception):
    def __init__(self, nodes, best, solutions):
        super().__init__(f"node budget exhausted after {nodes} nodes")
        self.nodes = nodes
        self.best = best
        self.solutions = solutions


FREE, IN, OUT = 0, 1, 2


def max_free_bnb(m, copies, lower, enumerate_all, cap, node_budget):
    """Largest edge subsets containing no listed triple in full.

    ``copies`` is a sequence of edge-index triples, each of which may not be
    chosen completely.  Only subsets of size at least ``lower`` are reported.
    Returns ``(best, solutions, nodes, truncated)`` where ``solutions`` holds
    sorted index tuples of size ``best`` in discovery order.
    """
    k = len(copies)
    cedges = [tuple(c) for c in copies]
    inc = [[] for _ in range(m)]
    for c, (i, j, l) in enumerate(cedges):
        inc[i].append(c)
        inc[j].append(c)
        inc[l].append(c)
    status = [FREE] * m
    cin = [0] * k
    cout = [0] * k
    trail = []
    st = {"n_in": 0, "n_free": m, "nodes": 0, "best": -1, "truncated": False}
    sols = []

    def assign(e, val):
        stack = [(e, val)]
        ok = True
        while stack:
            e, val = stack.pop()
            if status[e] != FREE:
                if status[e] != val:
                    ok = False
                continue
            status[e] = val
            trail.append(e)
            st["n_free"] -= 1
            if val == IN:
                st["n_in"] += 1
                for c in inc[e]:
                    cin[c] += 1
                    if cin[c] == 3:
                        ok = False
                    elif cin[c] == 2 and cout[c] == 0:
                        for f in cedges[c]:
                            if status[f] == FREE:
                                stack.append((f, OUT))
            else:
                for c in inc[e]:
                    cout[c] += 1
        return ok

    def undo(mark):
        while len(trail) > mark:
            e = trail.pop()
            val = status[e]
            status[e] = FREE
            st["n_free"] += 1
            if val == IN:
                st["n_in"] -= 1
                for c in inc[e]:
                    cin[c] -= 1
            else:
                for c in inc[e]:
                    cout[c] -= 1

    def scan():
        used = [False] * m
        score = [0] * m
        loss = 0
        for c in range(k):
            if cout[c] or cin[c] != 1:
                continue
            free = [f for f in cedges[c] if status[f] == FREE]
            for f in free:
                score[f] += 1
            if not (used[free[0]] or used[free[1]]):
                loss += 1
                used[free[0]] = used[free[1]] = True
        for c in range(k):
            if cout[c] or cin[c] != 0:
                continue
            i, j, l = cedges[c]
            score[i] += 1
            score[j] += 1
            score[l] += 1
            if not (used[i] or used[j] or used[l]):
                loss += 1
                used[i] = used[j] = used[l] = True
        branch = -1
        top = 0
        for e in range(m):
            if score[e] > top:
                top = score[e]
                branch = e
        return loss, branch

    def search():
        st["nodes"] += 1
        if st["nodes"] > node_budget:
            raise BudgetExhausted(st["nodes"] - 1, st["best"], list(sols))
        loss, branch = scan()
        ub = st["n_in"] + st["n_free"] - loss
        best = st["best"]
        if ub < lower:
            return
        if enumerate_all:
            if ub < best:
                return
        elif ub <= best:
            return
        if branch < 0:
            size = st["n_in"] + st["n_free"]
            sol = tuple(e for e in range(m) if status[e] != OUT)
            if size > best:
                st["best"] = size
                sols.clear()
                sols.append(sol)
                st["truncated"] = False
            elif enumerate_all:
                if len(sols) < cap:
                    sols.append(sol)
                else:
                    st["truncated"] = True
            return
        mark = len(trail)
        if assign(branch, IN):
            search()
        undo(mark)
        if assign(branch, OUT):
            search()
        undo(mark)

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * m + 100))
    try:
        search()
    finally:
        sys.setrecursionlimit(old)
    return st["best"], sols, st["nodes"], st["truncated"]


def best_partition(n, edges, node_budget):
    """Maximum number of rainbow edges over all 3-partitions of ``range(n)``.

    Assignments are enumerated as restricted growth strings (vertex 0 in part
    0, each later vertex at most one part above the largest used so far), in
    lexicographic order; the first maximum found is returned.  ``edges`` must
    hold ascending triples.  Returns ``(best, parts, nodes)`` with parts in
    ``{0, 1, 2}``.
    """
    by_mid = [[] for _ in range(n)]
    by_max = [[] for _ in range(n)]
    for a, b, c in edges:
        by_mid[b].append(a)
        by_max[c].append((a, b))
    total = len(edges)
    part = [0] * n
    st = {"best": -1, "assign": [0] * n, "nodes": 0}

    def dfs(v, top, dead, cur):
        if v == n:
            if cur > st["best"]:
                st["best"] = cur
                st["assign"] = part[:]
            return
        for lab in range(min(top + 2, 3)):
            st["nodes"] += 1
            if st["nodes"] > node_budget:
                raise BudgetExhausted(st["nodes"] - 1, st["best"], [tuple(st["assign"])])
            part[v] = lab
            d = 0
            c = 0
            for a in by_mid[v]:
                if part[a] == lab:
                    d += 1
            for a, b in by_max[v]:
                pa = part[a]
                pb = part[b]
                if pa == pb:
                    continue
                if lab == pa or lab == pb:
                    d += 1
                else:
                    c += 1
            if total - dead - d <= st["best"]:
                continue
            dfs(v + 1, max(top, lab), dead + d, cur + c)

    if n == 0:
        return 0, [], 0
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 2 * n + 100))
    try:
        dfs(0, -1, 0, 0)
    finally:
        sys.setrecursionlimit(old)
    return st["best"], st["assign"], st["nodes"]
