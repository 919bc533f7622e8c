# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; a line-by-line port of ``_pycore``."""

from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memset

from ._pycore import BudgetExhausted

cdef enum:
    FREE = 0
    IN = 1
    OUT = 2


cdef class _Bnb:
    cdef int m, k
    cdef int *ce          # 3 * k edge indices
    cdef int *inc_start   # m + 1 offsets into inc
    cdef int *inc         # copy ids, grouped by edge
    cdef char *status
    cdef int *cin
    cdef int *cout
    cdef int *trail
    cdef int ntrail
    cdef int *stack
    cdef char *used
    cdef int *score
    cdef int n_in, n_free
    cdef long long nodes, budget
    cdef int best, lower, cap
    cdef bint enum_all, truncated, exhausted
    cdef list sols

    def __cinit__(self, int m, copies, int lower, bint enum_all, int cap, long long budget):
        cdef int c, j, e
        self.m = m
        self.k = len(copies)
        self.ce = <int *> malloc(sizeof(int) * (3 * self.k + 1))
        self.inc_start = <int *> calloc(m + 2, sizeof(int))
        self.inc = <int *> malloc(sizeof(int) * (3 * self.k + 1))
        self.status = <char *> calloc(m + 1, sizeof(char))
        self.cin = <int *> calloc(self.k + 1, sizeof(int))
        self.cout = <int *> calloc(self.k + 1, sizeof(int))
        self.trail = <int *> malloc(sizeof(int) * (m + 1))
        self.stack = <int *> malloc(sizeof(int) * 2 * (self.k + m + 2))
        self.used = <char *> calloc(m + 1, sizeof(char))
        self.score = <int *> calloc(m + 1, sizeof(int))
        for c in range(self.k):
            for j in range(3):
                e = copies[c][j]
                self.ce[3 * c + j] = e
                self.inc_start[e + 1] += 1
        for e in range(m):
            self.inc_start[e + 1] += self.inc_start[e]
        cdef int *fill = <int *> calloc(m + 1, sizeof(int))
        for c in range(self.k):
            for j in range(3):
                e = self.ce[3 * c + j]
                self.inc[self.inc_start[e] + fill[e]] = c
                fill[e] += 1
        free(fill)
        self.ntrail = 0
        self.n_in = 0
        self.n_free = m
        self.nodes = 0
        self.budget = budget
        self.best = -1
        self.lower = lower
        self.cap = cap
        self.enum_all = enum_all
        self.truncated = False
        self.exhausted = False
        self.sols = []

    def __dealloc__(self):
        free(self.ce)
        free(self.inc_start)
        free(self.inc)
        free(self.status)
        free(self.cin)
        free(self.cout)
        free(self.trail)
        free(self.stack)
        free(self.used)
        free(self.score)

    cdef bint assign(self, int e0, int val0):
        cdef int sp = 0, e, val, t, c, j, f
        cdef bint ok = True
        self.stack[0] = e0
        self.stack[1] = val0
        sp = 2
        while sp > 0:
            sp -= 2
            e = self.stack[sp]
            val = self.stack[sp + 1]
            if self.status[e] != FREE:
                if self.status[e] != val:
                    ok = False
                continue
            self.status[e] = val
            self.trail[self.ntrail] = e
            self.ntrail += 1
            self.n_free -= 1
            if val == IN:
                self.n_in += 1
                for t in range(self.inc_start[e], self.inc_start[e + 1]):
                    c = self.inc[t]
                    self.cin[c] += 1
                    if self.cin[c] == 3:
                        ok = False
                    elif self.cin[c] == 2 and self.cout[c] == 0:
                        for j in range(3):
                            f = self.ce[3 * c + j]
                            if self.status[f] == FREE:
                                self.stack[sp] = f
                                self.stack[sp + 1] = OUT
                                sp += 2
            else:
                for t in range(self.inc_start[e], self.inc_start[e + 1]):
                    self.cout[self.inc[t]] += 1
        return ok

    cdef void undo(self, int mark):
        cdef int e, val, t
        while self.ntrail > mark:
            self.ntrail -= 1
            e = self.trail[self.ntrail]
            val = self.status[e]
            self.status[e] = FREE
            self.n_free += 1
            if val == IN:
                self.n_in -= 1
                for t in range(self.inc_start[e], self.inc_start[e + 1]):
                    self.cin[self.inc[t]] -= 1
            else:
                for t in range(self.inc_start[e], self.inc_start[e + 1]):
                    self.cout[self.inc[t]] -= 1

    cdef int scan(self, int *branch):
        cdef int c, j, f, i0, i1, i2, nf, loss = 0, top = 0, e
        cdef int fr[3]
        memset(self.used, 0, self.m)
        memset(self.score, 0, sizeof(int) * self.m)
        for c in range(self.k):
            if self.cout[c] or self.cin[c] != 1:
                continue
            nf = 0
            for j in range(3):
                f = self.ce[3 * c + j]
                if self.status[f] == FREE:
                    fr[nf] = f
                    nf += 1
                    self.score[f] += 1
            if not (self.used[fr[0]] or self.used[fr[1]]):
                loss += 1
                self.used[fr[0]] = 1
                self.used[fr[1]] = 1
        for c in range(self.k):
            if self.cout[c] or self.cin[c] != 0:
                continue
            i0 = self.ce[3 * c]
            i1 = self.ce[3 * c + 1]
            i2 = self.ce[3 * c + 2]
            self.score[i0] += 1
            self.score[i1] += 1
            self.score[i2] += 1
            if not (self.used[i0] or self.used[i1] or self.used[i2]):
                loss += 1
                self.used[i0] = 1
                self.used[i1] = 1
                self.used[i2] = 1
        branch[0] = -1
        for e in range(self.m):
            if self.score[e] > top:
                top = self.score[e]
                branch[0] = e
        return loss

    cdef void search(self):
        cdef int branch, loss, ub, size, mark, e
        if self.exhausted:
            return
        self.nodes += 1
        if self.nodes > self.budget:
            self.exhausted = True
            return
        loss = self.scan(&branch)
        ub = self.n_in + self.n_free - loss
        if ub < self.lower:
            return
        if self.enum_all:
            if ub < self.best:
                return
        elif ub <= self.best:
            return
        if branch < 0:
            size = self.n_in + self.n_free
            sol = tuple([e for e in range(self.m) if self.status[e] != OUT])
            if size > self.best:
                self.best = size
                self.sols = [sol]
                self.truncated = False
            elif self.enum_all:
                if len(self.sols) < self.cap:
                    self.sols.append(sol)
                else:
                    self.truncated = True
            return
        mark = self.ntrail
        if self.assign(branch, IN):
            self.search()
        self.undo(mark)
        if self.exhausted:
            return
        if self.assign(branch, OUT):
            self.search()
        self.undo(mark)


def max_free_bnb(int m, copies, int lower, bint enumerate_all, cap, node_budget):
    cdef _Bnb b = _Bnb(m, copies, lower, enumerate_all, min(int(cap), 2**31 - 1),
                       min(int(node_budget), 2**62))
    b.search()
    if b.exhausted:
        raise BudgetExhausted(b.nodes - 1, b.best, list(b.sols))
    return b.best, b.sols, b.nodes, b.truncated


cdef class _Part:
    cdef int n, total, best
    cdef int *mid_start
    cdef int *mid
    cdef int *max_start
    cdef int *maxa
    cdef int *maxb
    cdef int *part
    cdef int *best_assign
    cdef long long nodes, budget
    cdef bint exhausted

    def __cinit__(self, int n, edges, long long budget):
        cdef int a, b, c, v, m = len(edges)
        self.n = n
        self.total = m
        self.mid_start = <int *> calloc(n + 2, sizeof(int))
        self.max_start = <int *> calloc(n + 2, sizeof(int))
        self.mid = <int *> malloc(sizeof(int) * (m + 1))
        self.maxa = <int *> malloc(sizeof(int) * (m + 1))
        self.maxb = <int *> malloc(sizeof(int) * (m + 1))
        self.part = <int *> calloc(n + 1, sizeof(int))
        self.best_assign = <int *> calloc(n + 1, sizeof(int))
        for e in edges:
            self.mid_start[e[1] + 1] += 1
            self.max_start[e[2] + 1] += 1
        for v in range(n):
            self.mid_start[v + 1] += self.mid_start[v]
            self.max_start[v + 1] += self.max_start[v]
        cdef int *fm = <int *> calloc(n + 1, sizeof(int))
        cdef int *fx = <int *> calloc(n + 1, sizeof(int))
        for e in edges:
            a = e[0]
            b = e[1]
            c = e[2]
            self.mid[self.mid_start[b] + fm[b]] = a
            fm[b] += 1
            self.maxa[self.max_start[c] + fx[c]] = a
            self.maxb[self.max_start[c] + fx[c]] = b
            fx[c] += 1
        free(fm)
        free(fx)
        self.best = -1
        self.nodes = 0
        self.budget = budget
        self.exhausted = False

    def __dealloc__(self):
        free(self.mid_start)
        free(self.max_start)
        free(self.mid)
        free(self.maxa)
        free(self.maxb)
        free(self.part)
        free(self.best_assign)

    cdef void dfs(self, int v, int top, int dead, int cur):
        cdef int lab, d, c, t, pa, pb, hi, nxt
        if self.exhausted:
            return
        if v == self.n:
            if cur > self.best:
                self.best = cur
                for t in range(self.n):
                    self.best_assign[t] = self.part[t]
            return
        hi = top + 2
        if hi > 3:
            hi = 3
        for lab in range(hi):
            self.nodes += 1
            if self.nodes > self.budget:
                self.exhausted = True
                return
            self.part[v] = lab
            d = 0
            c = 0
            for t in range(self.mid_start[v], self.mid_start[v + 1]):
                if self.part[self.mid[t]] == lab:
                    d += 1
            for t in range(self.max_start[v], self.max_start[v + 1]):
                pa = self.part[self.maxa[t]]
                pb = self.part[self.maxb[t]]
                if pa == pb:
                    continue
                if lab == pa or lab == pb:
                    d += 1
                else:
                    c += 1
            if self.total - dead - d <= self.best:
                continue
            nxt = top
            if lab > nxt:
                nxt = lab
            self.dfs(v + 1, nxt, dead + d, cur + c)
            if self.exhausted:
                return


def best_partition(int n, edges, node_budget):
    if n == 0:
        return 0, [], 0
    cdef _Part s = _Part(n, edges, min(int(node_budget), 2**62))
    s.dfs(0, -1, 0, 0)
    assign = [s.best_assign[t] for t in range(n)]
    if s.exhausted:
        raise BudgetExhausted(s.nodes - 1, s.best, [tuple(assign)])
    return s.best, assign, s.nodes
