"""Structural quantities of a (G, H, pi) instance and an inequality audit.

Everything here is observational.  The inequalities audited are asymptotic
statements about G^3(n, p), so at desk scale they may fail; each line records
its two sides, whether it holds, and whether the hypotheses it rests on are
met by the instance.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .bounds import Constants
from .hypergraph import (
    Graph2,
    Hypergraph3,
    Partition3,
    _pair,
    crossing_links,
    is_balanced,
    link_graph,
    partition_split,
    q_set,
    shadow,
)
from .motifs import count_f5hat, f5hat_copies, is_f5_free

E_SRI_EXHAUSTIVE_MAX_N = 16


def _logs(n: int) -> tuple[float, float]:
    """``(ln n, ln ln n)``; ``nan`` where undefined."""
    ln = math.log(n) if n >= 2 else math.nan
    lnln = math.log(ln) if n >= 3 else math.nan
    return ln, lnln


def codegree_cap(p: float, n: int) -> float:
    """``p n sqrt(ln n) / ln ln n``, the assumed ceiling on pair codegrees."""
    ln, lnln = _logs(n)
    return p * n * math.sqrt(ln) / lnln


def heavy_pair_cap(n: int) -> float:
    """``n^2 exp(-sqrt(ln n))``, the allowance for pairs with large codegree into a set."""
    ln, _ = _logs(n)
    return n * n * math.exp(-math.sqrt(ln))


# ---------------------------------------------------------------------------
# derived graphs and vertex classes


def shadow_j(h: Hypergraph3, pi: Partition3) -> Graph2:
    """Shadow of the edges with two or more vertices in V1, induced on V1."""
    a = pi.assignment
    h1 = Hypergraph3(h.n, (e for e in h.edges if sum(a[v] == 1 for v in e) >= 2))
    return shadow(h1).induced(pi.part(1))


@dataclass
class BadPairs:
    q: set
    b: Hypergraph3
    h_trimmed: Hypergraph3 | None


def b_pi(g: Hypergraph3, pi: Partition3, p: float, h: Hypergraph3 | None = None) -> BadPairs:
    """Edges of G covering a pair of Q(pi), and H with those edges removed."""
    q = q_set(g, pi, p)
    a = pi.assignment
    bad = []
    for e in g.edges:
        x, y, z = e
        if _pair(x, y) in q or _pair(x, z) in q or _pair(y, z) in q:
            assert sum(a[v] == 1 for v in e) >= 2
            bad.append(e)
    b = Hypergraph3(g.n, bad)
    trimmed = None if h is None else h.difference(b)
    return BadPairs(q, b, trimmed)


def s_threshold(n: int, consts: Constants, regime: str) -> float:
    if regime == "divided":
        return consts.eps1 * n / math.sqrt(math.log(n))
    if regime == "undivided":
        return consts.eps1 * n
    raise ValueError(f"unknown regime {regime!r}")


def classify_s(
    g: Hypergraph3,
    h: Hypergraph3,
    pi: Partition3,
    consts: Constants,
    p: float,
    regime: str,
    j: Graph2 | None = None,
) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
    """``(S, S1, S2)``: high J-degree vertices of V1, split by crossing degree in H."""
    n = g.n
    if n < 2:
        raise ValueError("need n >= 2")
    j = shadow_j(h, pi) if j is None else j
    thr = s_threshold(n, consts, regime)
    s = frozenset(x for x in pi.part(1) if j.degree(x) >= thr)
    v2, v3 = pi.part(2), pi.part(3)
    rich = consts.eps2 * p * n * n
    s1 = frozenset(x for x in s if len(link_graph(h, x, v2, v3)) >= rich)
    return s, s1, s - s1


def good_bad_split(
    g: Hypergraph3,
    missing: Iterable,
    jp: Graph2,
    consts: Constants,
    p: float,
    n: int,
    pi: Partition3,
) -> tuple[set, set]:
    """Split missing crossing edges by how much their V2-V3 pair sees N^J'(x).

    ``x`` is the V1 vertex of the edge and the pair's neighbourhood is taken
    in G.  The two bands of ``d^J'(x)`` use different thresholds; an edge
    whose ``x`` lies above both bands is good.
    """
    ln, lnln = _logs(n)
    lo_band = consts.eps1 * n / math.sqrt(ln)
    hi_band = consts.eps1 * n
    t1 = p * n * lnln / (500 * math.sqrt(ln))
    t2 = 3 * consts.eps1 * p * n
    a = pi.assignment
    good, bad = set(), set()
    for e in missing:
        e = tuple(sorted(e))
        xs = [v for v in e if a[v] == 1]
        if len(xs) != 1:
            raise ValueError(f"{e} is not a crossing edge")
        x = xs[0]
        y, z = (v for v in e if v != x)
        nbx = jp.neighbors(x)
        d = len(nbx)
        hit = len(g.neighbors(y, z) & nbx)
        if (d <= lo_band and hit >= t1 and d > 0) or (lo_band < d <= hi_band and hit >= t2):
            bad.add(e)
        else:
            good.add(e)
    return good, bad


def jprime(j: Graph2, s: Iterable[int], v1: Iterable[int]) -> Graph2:
    """``J[S] + J[V1 - S]``: the J-edges not joining S to the rest of V1."""
    s = frozenset(s) & frozenset(v1)
    return Graph2(j.n, [(x, y) for x, y in j if (x in s) == (y in s)])


def split_h1(h1: Hypergraph3, pi: Partition3, s: frozenset, s1: frozenset) -> tuple[Hypergraph3, Hypergraph3, Hypergraph3]:
    """``H1(1), H1(2), H1(3)`` for the class ``S`` and its rich part ``S1``."""
    v1 = pi.part(1)
    rest = v1 - s
    first, second, third = [], [], []
    for e in h1.edges:
        if len(s.intersection(e)) >= 2 or len(rest.intersection(e)) >= 2:
            first.append(e)
        elif len(s1.intersection(e)) == 1:
            second.append(e)
        else:
            third.append(e)
    n = h1.n
    return Hypergraph3(n, first), Hypergraph3(n, second), Hypergraph3(n, third)


# ---------------------------------------------------------------------------
# K(v, E, A, T)


@dataclass
class KResult:
    k: set
    g: set
    witnesses: dict = field(default_factory=dict)

    @property
    def sizes(self) -> tuple[int, int]:
        return len(self.k), len(self.g)


def k_of(g: Hypergraph3, v: int, edges: Iterable, a: Iterable[int], t: Iterable) -> KResult:
    """Triples ``xyz`` (x in A, yz in T) for which some ``e`` in E holds x and misses y, z.

    The second set keeps those present in G; for each one the witness
    ``(yzv, yzx, e)`` is an F5 copy of G.
    """
    a = frozenset(a)
    t = sorted({_pair(*yz) for yz in t})
    es = sorted({tuple(sorted(e)) for e in edges})
    if v in a:
        raise ValueError("A must avoid v")
    if not all(0 <= x < g.n for x in a):
        raise ValueError("A has out-of-range vertices")
    for y, z in t:
        if y in a or z in a or v in (y, z) or tuple(sorted((v, y, z))) not in g:
            raise ValueError(f"pair {(y, z)} is not a link pair of v outside A")
    for e in es:
        if v not in e or not a.intersection(e) or e not in g:
            raise ValueError(f"{e} is not an edge of G through v meeting A")
    k, present, wit = set(), set(), {}
    for x in sorted(a):
        through = [e for e in es if x in e]
        if not through:
            continue
        for y, z in t:
            for e in through:
                if y not in e and z not in e:
                    tri = tuple(sorted((x, y, z)))
                    k.add(tri)
                    if tri in g:
                        present.add(tri)
                        wit[tri] = (tuple(sorted((y, z, v))), tri, e)
                    break
    return KResult(k, present, wit)


# ---------------------------------------------------------------------------
# E_{s,r,i}


@dataclass
class ESriResult:
    holds: bool
    exhaustive: bool
    checked: int
    worst_count: int
    worst: tuple | None


def _adjacency(g: Hypergraph3) -> np.ndarray:
    n = g.n
    adj = np.zeros((n, n, n), dtype=np.int8)
    if len(g):
        e = np.asarray(g.edges)
        for a, b, c in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
            adj[e[:, a], e[:, b], e[:, c]] = 1
    return adj


def e_sri_holds(
    g: Hypergraph3,
    s: int,
    r: float,
    i: float,
    candidates: Sequence[Iterable[int]] | None = None,
) -> ESriResult:
    """Whether every vertex v and s-set S avoiding v see at most r heavy link pairs.

    A pair ``{y, z}`` outside S counts for ``(v, S)`` when ``vyz`` is an edge
    and ``d_S(y, z) >= i``.  All s-sets are tried when ``n`` is at most
    ``E_SRI_EXHAUSTIVE_MAX_N`` and no candidates are given; otherwise only the
    candidate sets are tried and the result is marked as not exhaustive.
    """
    n = g.n
    if not (0 <= s <= n):
        raise ValueError("need 0 <= s <= n")
    if candidates is None:
        if n > E_SRI_EXHAUSTIVE_MAX_N:
            raise ValueError(f"exhaustive check limited to n <= {E_SRI_EXHAUSTIVE_MAX_N}; pass candidates")
        sets = combinations(range(n), s)
        exhaustive = True
    else:
        sets = (tuple(sorted(c)) for c in candidates)
        exhaustive = False
    adj = _adjacency(g)
    tri = np.triu(np.ones((n, n), dtype=bool), 1)
    worst, worst_count, checked = None, -1, 0
    for sset in sets:
        if len(sset) != s:
            raise ValueError("candidate set of the wrong size")
        idx = list(sset)
        deg = adj[:, :, idx].sum(axis=2, dtype=np.int64)
        outside = np.ones(n, dtype=bool)
        outside[idx] = False
        heavy = (deg >= i) & tri & outside[:, None] & outside[None, :]
        counts = np.einsum("vyz,yz->v", adj, heavy.astype(np.int8), dtype=np.int64)
        counts[idx] = -1
        checked += 1
        v = int(np.argmax(counts))
        if counts[v] > worst_count:
            worst_count, worst = int(counts[v]), (v, sset)
    holds = worst_count <= r
    return ESriResult(bool(holds), exhaustive, checked, max(worst_count, 0), worst)


# ---------------------------------------------------------------------------
# concentration census


def concentration_census(
    g: Hypergraph3,
    p: float,
    pi: Partition3 | None = None,
    s: Iterable[int] | None = None,
    tolerance: float = 0.15,
) -> dict:
    """Degree, crossing degree and codegree statistics next to their reference values."""
    n = g.n
    e = np.asarray(g.edges, dtype=np.int64).reshape(-1, 3)
    deg = np.bincount(e.ravel(), minlength=n)
    ln, lnln = _logs(n)
    expected = p * comb(n - 1, 2)
    out = {
        "n": n,
        "p": p,
        "edges": len(g),
        "min_degree": int(deg.min()) if n else 0,
        "max_degree": int(deg.max()) if n else 0,
        "expected_degree": expected,
        "half_pn2": p * n * n / 2,
        "degrees_within_tolerance": bool(np.all(np.abs(deg - expected) <= tolerance * expected)) if n else True,
    }
    if len(e):
        pid = np.concatenate([e[:, 0] * n + e[:, 1], e[:, 0] * n + e[:, 2], e[:, 1] * n + e[:, 2]])
        codeg = np.bincount(pid, minlength=n * n)
        maxco = int(codeg.max())
    else:
        codeg = np.zeros(n * n, dtype=np.int64)
        maxco = 0
    cap = codegree_cap(p, n)
    out["max_codegree"] = maxco
    out["codegree_cap"] = cap if math.isfinite(cap) else None
    out["codegree_within_cap"] = bool(math.isfinite(cap) and maxco <= cap)
    if pi is not None:
        a = np.asarray(pi.assignment)
        sizes = pi.sizes
        cross = np.zeros(n, dtype=np.int64)
        if len(e):
            lab = a[e]
            rainbow = np.sort(lab, axis=1).tolist()
            mask = np.array([r == [1, 2, 3] for r in rainbow], dtype=bool)
            cross = np.bincount(e[mask].ravel(), minlength=n)
        ratios = []
        for v in range(n):
            others = [sizes[k] for k in range(3) if k != a[v] - 1]
            expect = p * others[0] * others[1]
            if expect > 0:
                ratios.append(float(cross[v] / expect))
        out["crossing_ratio_min"] = min(ratios) if ratios else None
        out["crossing_ratio_max"] = max(ratios) if ratios else None
    if s is not None:
        s = sorted(set(s))
        mask = np.zeros(n, dtype=bool)
        mask[s] = True
        d_s = np.zeros((n, n), dtype=np.int64)
        if len(e):
            for x, y, z in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
                sel = mask[e[:, z]]
                np.add.at(d_s, (e[sel, x], e[sel, y]), 1)
        out_s = ~mask
        heavy = (d_s >= 3 * p * n) & out_s[:, None] & out_s[None, :]
        heavy = np.triu(heavy, 1)
        out["heavy_pairs"] = int(heavy.sum())
        out["heavy_pair_cap"] = heavy_pair_cap(n) if n >= 2 else None
        out["heavy_pairs_within_cap"] = bool(n >= 2 and heavy.sum() <= heavy_pair_cap(n))
    return out


# ---------------------------------------------------------------------------
# audit


@dataclass
class AuditLine:
    line_id: str
    lhs: float | None
    rhs: float | None
    holds: bool
    preconditions_met: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=False)


@dataclass
class AnalysisReport:
    n: int
    p: float
    sizes: dict
    regime: str
    lines: list[AuditLine] = field(default_factory=list)

    def line(self, line_id: str) -> AuditLine:
        for ln in self.lines:
            if ln.line_id == line_id:
                return ln
        raise KeyError(line_id)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "regime": self.regime,
            "sizes": dict(self.sizes),
            "lines": [asdict(x) for x in self.lines],
        }

    def to_json_lines(self) -> list[str]:
        return [x.to_json() for x in self.lines]


def _num(x) -> float | None:
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _ge(lhs, rhs) -> bool:
    return lhs is not None and rhs is not None and lhs >= rhs


def _le(lhs, rhs) -> bool:
    return lhs is not None and rhs is not None and lhs <= rhs


def _line(line_id, lhs, rhs, holds_fn, pre) -> AuditLine:
    lhs, rhs = _num(lhs), _num(rhs)
    return AuditLine(line_id, lhs, rhs, bool(holds_fn(lhs, rhs)), bool(pre))


def claim_pair_counts(g: Hypergraph3, h: Hypergraph3, pi: Partition3, j: Graph2, q: set) -> list[int]:
    """For each J-edge outside Q, the V2-V3 pairs spanning an F5-hat with it.

    ``v0`` is the smallest third vertex of an H-edge on the J-edge, and pairs
    using ``v0`` are dropped.
    """
    links = crossing_links(g, pi, pi.part(1))
    out = []
    for x1, x2 in sorted(j):
        if (x1, x2) in q:
            continue
        v0 = min(h.neighbors(x1, x2))
        common = links[x1] & links[x2]
        out.append(sum(1 for y, z in common if v0 != y and v0 != z))
    return out


def audit_propositions(
    g: Hypergraph3,
    h: Hypergraph3,
    pi: Partition3,
    consts: Constants,
    p: float,
    t_value: int | None = None,
    pi_maximizes: bool | None = None,
    h_is_maximum: bool = False,
) -> AnalysisReport:
    """Evaluate every audited inequality on one instance.

    ``t_value`` is the exact size of a largest tripartite subhypergraph of G;
    lines that need it are reported without a verdict when it is absent.
    ``pi_maximizes`` says whether ``pi`` maximizes the crossing edges of H
    (unknown counts as not met).  ``h_is_maximum`` enables the final
    comparison of |H| with t(G).
    """
    free, _ = is_f5_free(h)
    if not free:
        raise ValueError("H contains a copy of F5")
    n = g.n
    ln, lnln = _logs(n)
    rl = math.sqrt(ln) if n >= 2 else math.nan
    d, e1, e2, e3 = consts.delta, consts.eps1, consts.eps2, consts.eps3

    sp = partition_split(g, h, pi)
    g_pi = len(sp.crossing) + len(sp.missing)
    bp = b_pi(g, pi, p, h)
    q, b, ht = bp.q, bp.b, bp.h_trimmed
    spt = partition_split(g, ht, pi)
    j = shadow_j(h, pi)
    v1 = pi.part(1)
    hbar = len(sp.missing)
    h1 = len(sp.h1)
    sum_inside = h1 + len(sp.h2) + len(sp.h3)
    shadow_h1 = shadow(sp.h1)
    disjoint_q = not any(pr in q for pr in shadow_h1)
    balanced = is_balanced(pi)
    maximizing = bool(pi_maximizes)
    prop12_pre = balanced and maximizing and sum_inside <= d * p * n**3 and disjoint_q

    regime_cut = d * p * n**3 / ln if n >= 2 else math.nan
    regime = "divided" if hbar <= regime_cut else "undivided"

    classes = {}
    for reg in ("divided", "undivided"):
        classes[reg] = classify_s(g, h, pi, consts, p, reg, j) if n >= 2 else (frozenset(),) * 3
    s, s1, s2 = classes["divided"]
    s_, s1_, s2_ = classes["undivided"]

    fhat = count_f5hat(g, h, pi)
    copies = list(f5hat_copies(g, h, pi))
    hbar_set = sp.missing.edge_set
    forced = sum(
        1
        for c in copies
        if tuple(sorted((c.w1, c.y, c.z))) in hbar_set or tuple(sorted((c.w2, c.y, c.z))) in hbar_set
    )

    cap = codegree_cap(p, n)
    lines: list[AuditLine] = []

    # missing crossing edges against the edges inside V1
    lines.append(_line("missing_ge_3_inside_v1", hbar, 3 * h1, _ge, prop12_pre))
    lines.append(
        _line(
            "missing_ge_3_inside_v1_trimmed",
            len(spt.missing),
            3 * len(spt.h1),
            _ge,
            balanced and maximizing and len(spt.h1) + len(spt.h2) + len(spt.h3) <= d * p * n**3,
        )
    )
    # t(G) against the best partition plus the Q(pi) bonus
    rhs13 = g_pi + len(q) * d * n * n * p * p
    lines.append(AuditLine("t_ge_crossing_plus_q_bonus", _num(t_value), _num(rhs13),
                           _ge(_num(t_value), _num(rhs13)), balanced and t_value is not None))
    # F5-hat pairs per J-edge outside Q
    counts = claim_pair_counts(g, h, pi, j, q)
    lines.append(_line("fhat_pairs_per_j_edge_min", min(counts) if counts else None, p * p * n * n / 12,
                       lambda a, b: not counts or _ge(a, b), bool(counts)))
    lines.append(_line("fhat_copies_force_missing", forced, len(copies), lambda a, b: a == b, True))

    # J' bounds for the class of the active regime
    s_act = s if regime == "divided" else s_
    jp = jprime(j, s_act, v1)
    dmax = jp.max_degree()
    lines.append(_line("missing_ge_30pn_jprime", hbar, 30 * p * n * len(jp), _ge,
                       prop12_pre and dmax <= e1 * n))
    lines.append(_line("missing_ge_20pn_jprime_boosted", hbar, 20 * p * n * len(jp) * rl / lnln, _ge,
                       prop12_pre and dmax <= e1 * n / rl))
    good, bad = good_bad_split(g, sp.missing.edges, jp, consts, p, n, pi) if n >= 3 else (set(), set())

    # class sizes and the S1 / S2 bounds, both regimes
    for reg, (cs, c1, c2), cap_s, tag in (
        ("divided", classes["divided"], e3 * n / rl, ""),
        ("undivided", classes["undivided"], e3 * n, "_undivided"),
    ):
        pre = prop12_pre and regime == reg
        lines.append(_line(f"s_size{tag}", len(cs), cap_s, _le, pre))
        lines.append(_line(f"missing_ge_20pn2_s1{tag}", hbar, 20 * p * n * n * len(c1), _ge, pre))
        lines.append(_line(f"missing_ge_pn2_s2_over_20{tag}", hbar, p * n * n * len(c2) / 20, _ge, pre))
        parts = split_h1(sp.h1, pi, cs, c1)
        for k, name in enumerate(("pairs", "rich", "poor")):
            lines.append(_line(f"h1_case_{name}{tag}", 3 * len(parts[k]), h1, _ge, regime == reg))

    # chain from |H| to t(G)
    wlog = h1 >= len(sp.h2) and h1 >= len(sp.h3)
    top = len(sp.crossing) + 3 * h1
    lines.append(_line("chain_start", len(h), top, _le, wlog))
    mid = len(spt.crossing) + 3 * len(spt.h1) + 3 * (len(h) - len(ht))
    lines.append(_line("chain_trim_identity", top, mid, lambda a, b: a == b, True))
    a1 = len(spt.crossing) + 3 * len(spt.h1) + 3 * len(b)
    b1 = g_pi + 3 * len(b)
    lines.append(_line("chain_step_trimmed_missing", a1, b1, _le, prop12_pre))
    b2 = g_pi + 3 * len(q) * cap
    lines.append(_line("chain_step_codegree", b1, b2, _le, True))
    b3 = g_pi + len(q) * d * p * p * n * n
    lines.append(_line("chain_step_density", b2, b3, _le, True))
    lines.append(AuditLine("chain_step_partition_gain", _num(b3), _num(t_value),
                           _le(_num(b3), _num(t_value)), balanced and t_value is not None))
    if h_is_maximum:
        lines.append(AuditLine("maximum_ge_t", float(len(h)), _num(t_value),
                               _ge(float(len(h)), _num(t_value)), t_value is not None))
    lines.append(_line("regime_divided", hbar, regime_cut, _le, True))

    sizes = {
        "H": len(h),
        "H_pi": len(sp.crossing),
        "H_bar": hbar,
        "H1": h1,
        "H2": len(sp.h2),
        "H3": len(sp.h3),
        "G_pi": g_pi,
        "Q": len(q),
        "J": len(j),
        "J_prime": len(jp),
        "B": len(b),
        "H_trimmed": len(ht),
        "B_cap_H": len(h) - len(ht),
        "S": len(s),
        "S1": len(s1),
        "S2": len(s2),
        "S_undivided": len(s_),
        "S1_undivided": len(s1_),
        "S2_undivided": len(s2_),
        "fhat": fhat,
        "good": len(good),
        "bad": len(bad),
        "t": t_value,
    }
    return AnalysisReport(n, p, sizes, regime, lines)
