import math
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from f5lab.analysis import (
    audit_propositions,
    b_pi,
    classify_s,
    concentration_census,
    e_sri_holds,
    good_bad_split,
    jprime,
    k_of,
    shadow_j,
    split_h1,
)
from f5lab.bounds import Constants
from f5lab.experiments import ExperimentConfig, dump_jsonl, run_audit
from f5lab.hypergraph import Graph2, Hypergraph3, Partition3, build, complete, partition_split, q_set, turan
from f5lab.motifs import is_f5_free
from f5lab.random_model import sample_g3
from f5lab.solver import max_f5_free

from conftest import host_and_partition, host_sub_partition

GOLDEN = Path(__file__).parent / "data" / "audit_n12_p04.jsonl"
CONSTS = Constants()


def test_shadow_j_examples():
    s, pi = turan(6)
    assert len(shadow_j(s, pi)) == 0
    pi = Partition3((1, 1, 1, 2, 3))
    assert set(shadow_j(build(5, [(0, 1, 2)]), pi)) == {(0, 1), (0, 2), (1, 2)}
    assert set(shadow_j(build(5, [(0, 1, 3)]), pi)) == {(0, 1)}


def test_b_pi_examples():
    _, pi = turan(9)
    g = complete(9)
    bp = b_pi(g, pi, 1.0, g)
    assert not bp.q and len(bp.b) == 0 and bp.h_trimmed == g
    empty_q = b_pi(g, pi, 0.0, g)
    assert len(empty_q.b) == 0
    # V1 = {0, 1, 2}; with G having no crossing edges every V1 pair is in Q
    g2 = build(9, [(0, 1, 5)])
    bp = b_pi(g2, pi, 0.5, g2)
    assert (0, 1) in bp.q and (0, 1, 5) in bp.b and len(bp.h_trimmed) == 0


def test_classify_s_examples():
    n = 12
    pi = Partition3((1,) * 6 + (2, 2, 2, 3, 3, 3))
    g = complete(n)
    s, s1, s2 = classify_s(g, Hypergraph3(n), pi, CONSTS, 0.5, "divided")
    assert not s
    # V1 pairwise joined in J and no crossing H edges: every V1 vertex is poor
    h = build(n, [(0, 1, 2), (0, 3, 4), (0, 5, 1), (1, 3, 5), (2, 3, 6), (2, 4, 5), (1, 4, 7), (2, 5, 8)])
    h = build(n, [e for e in h if sum(pi.assignment[v] == 1 for v in e) >= 2])
    j = Graph2(n, [(a, b) for a in range(6) for b in range(a + 1, 6)])
    s, s1, s2 = classify_s(g, h, pi, Constants(eps1=1e-3), 0.5, "undivided", j=j)
    assert s == s2 == frozenset(range(6)) and not s1
    single = Graph2(n, [(0, 1)])
    assert not classify_s(g, h, pi, Constants(eps1=0.9), 0.5, "divided", j=single)[0]


def test_good_bad_split_examples():
    n = 9
    pi = Partition3((1, 1, 1, 2, 2, 2, 3, 3, 3))
    g = complete(n)
    assert good_bad_split(g, [], Graph2(n), CONSTS, 0.5, n, pi) == (set(), set())
    miss = [(0, 3, 6), (0, 4, 7)]
    good, bad = good_bad_split(g, miss, Graph2(n, [(1, 2)]), CONSTS, 0.5, n, pi)
    assert good == set(miss) and not bad
    # eps1 = 0.3 puts d(x) = 2 in the upper band (1.82, 2.7], where the
    # threshold 3 eps1 p n = 0.81 is met by both J'-neighbours of x
    c = Constants(eps1=0.3)
    jp = Graph2(n, [(0, 1), (0, 2)])
    good, bad = good_bad_split(g, [(0, 3, 6)], jp, c, 0.1, n, pi)
    assert bad == {(0, 3, 6)} and not good


def test_k_of_examples():
    g = build(6, [(0, 1, 5), (0, 2, 3), (1, 2, 3), (0, 1, 2)])
    assert k_of(g, 0, [], {1}, [(2, 3)]).sizes == (0, 0)
    r = k_of(g, 0, [(0, 1, 5)], {1}, [(2, 3)])
    assert r.sizes == (1, 1)
    g_missing = build(6, [(0, 1, 5), (0, 2, 3)])
    assert k_of(g_missing, 0, [(0, 1, 5)], {1}, [(2, 3)]).sizes == (1, 0)
    assert k_of(g, 0, [(0, 1, 2)], {1}, [(2, 3)]).sizes == (0, 0)
    with pytest.raises(ValueError):
        k_of(g, 0, [(0, 2, 3)], {1}, [(2, 3)])


def test_k_of_witnesses_are_f5():
    g = build(6, [(0, 1, 5), (0, 2, 3), (1, 2, 3)])
    r = k_of(g, 0, [(0, 1, 5)], {1}, [(2, 3)])
    (wit,) = r.witnesses.values()
    assert not is_f5_free(build(6, wit))[0]


def test_e_sri_examples():
    g = sample_g3(9, 0.4, 1)
    assert e_sri_holds(g, 3, 0, 100).holds
    assert e_sri_holds(g, 2, 36, 1).holds
    assert e_sri_holds(Hypergraph3(9), 3, 0, 1).holds
    res = e_sri_holds(complete(7), 2, 0, 1)
    assert not res.holds and res.exhaustive and res.checked == 21
    res = e_sri_holds(complete(20), 2, 0, 1, candidates=[(0, 1)])
    assert not res.exhaustive and res.checked == 1
    with pytest.raises(ValueError):
        e_sri_holds(complete(20), 2, 0, 1)


def test_census_closed_forms():
    c = concentration_census(Hypergraph3(10), 0.3)
    assert c["max_degree"] == 0 and c["max_codegree"] == 0 and c["codegree_within_cap"]
    n = 10
    c = concentration_census(complete(n), 1.0)
    assert c["min_degree"] == c["max_degree"] == math.comb(n - 1, 2)
    assert c["max_codegree"] == n - 2 and c["degrees_within_tolerance"]


def test_audit_on_turan_host_reads_equality():
    s, pi = turan(6)
    rep = audit_propositions(s, s, pi, CONSTS, 1.0, t_value=len(s), pi_maximizes=True)
    ln = rep.line("missing_ge_3_inside_v1")
    assert (ln.lhs, ln.rhs, ln.holds, ln.preconditions_met) == (0.0, 0.0, True, True)
    assert rep.sizes["H_bar"] == 0 and rep.sizes["H1"] == 0


def test_audit_on_empty_subgraph():
    g = sample_g3(8, 0.5, 3)
    _, pi = turan(8)
    rep = audit_propositions(g, Hypergraph3(8), pi, CONSTS, 0.5)
    assert rep.sizes["H_bar"] == rep.sizes["G_pi"] and rep.sizes["H1"] == 0
    assert rep.line("missing_ge_3_inside_v1").holds


def test_audit_rejects_non_free_subgraph():
    g = complete(5)
    with pytest.raises(ValueError):
        audit_propositions(g, g, Partition3((1, 1, 2, 2, 3)), CONSTS, 0.5)


def test_audit_golden_file():
    cfg = ExperimentConfig(kind="audit", n=[12], c=[0.4], trials=1, seed=2024)
    assert dump_jsonl(run_audit(cfg).records) == GOLDEN.read_text()


@given(host_sub_partition(max_n=8), st.floats(0, 1))
def test_audit_invariants(case, p):
    g, h, pi = case
    if not is_f5_free(h)[0]:
        return
    rep = audit_propositions(g, h, pi, CONSTS, p)
    sz = rep.sizes
    assert all(v >= 0 for k, v in sz.items() if v is not None)
    assert sz["H_pi"] + sz["H1"] + sz["H2"] + sz["H3"] == sz["H"]
    assert sz["B_cap_H"] + sz["H_trimmed"] == sz["H"]
    assert sz["S1"] + sz["S2"] == sz["S"]
    assert sz["S1_undivided"] + sz["S2_undivided"] == sz["S_undivided"]
    assert sz["good"] + sz["bad"] == sz["H_bar"]
    assert rep.line("fhat_copies_force_missing").holds
    assert rep.line("chain_trim_identity").holds
    assert rep.line("regime_divided").holds == (rep.regime == "divided")


@given(host_sub_partition(max_n=8), st.floats(0, 1))
def test_b_pi_partitions_h(case, p):
    g, h, pi = case
    bp = b_pi(g, pi, p, h)
    assert sum(1 for e in h if e in bp.b) + len(bp.h_trimmed) == len(h)
    assert not any(e in bp.b for e in bp.h_trimmed)
    assert bp.q == q_set(g, pi, p)


@given(host_sub_partition(max_n=8), st.data())
def test_class_split_and_good_bad_partition(case, data):
    g, h, pi = case
    if g.n < 3:
        return
    for reg in ("divided", "undivided"):
        s, s1, s2 = classify_s(g, h, pi, CONSTS, 0.5, reg)
        assert s1 | s2 == s and not (s1 & s2)
    j = shadow_j(h, pi)
    s = data.draw(st.sets(st.sampled_from(sorted(pi.part(1))) if pi.part(1) else st.nothing()))
    jp = jprime(j, s, pi.part(1))
    assert jp <= j
    missing = partition_split(g, h, pi).missing
    good, bad = good_bad_split(g, missing.edges, jp, CONSTS, 0.5, g.n, pi)
    assert good | bad == set(missing.edges) and not (good & bad)
    h1 = partition_split(g, h, pi).h1
    parts = split_h1(h1, pi, frozenset(s), frozenset())
    assert sum(len(x) for x in parts) == len(h1)


@given(host_and_partition(max_n=8), st.data())
def test_k_of_size_bounds(case, data):
    g, pi = case
    if g.n < 4 or not len(g):
        return
    v = data.draw(st.integers(0, g.n - 1))
    others = [u for u in range(g.n) if u != v]
    a = data.draw(st.sets(st.sampled_from(others)))
    link = [(y, z) for y in others for z in others if y < z and y not in a and z not in a and (v, y, z) in g]
    t = data.draw(st.lists(st.sampled_from(link), unique=True) if link else st.just([]))
    through = [e for e in g if v in e and a.intersection(e)]
    es = data.draw(st.lists(st.sampled_from(through), unique=True) if through else st.just([]))
    r = k_of(g, v, es, a, t)
    assert len(r.g) <= len(r.k) <= len(a) * len(t)


def test_audit_runs_on_solver_output():
    g = sample_g3(9, 0.5, 4)
    h = max_f5_free(g).witness
    _, pi = turan(9)
    rep = audit_propositions(g, h, pi, CONSTS, 0.5)
    assert rep.n == 9 and rep.to_json_lines()
