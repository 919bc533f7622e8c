from itertools import combinations

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from f5lab.hypergraph import Hypergraph3, Partition3

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def hypergraphs(draw, min_n=0, max_n=8, max_edges=None):
    n = draw(st.integers(min_n, max_n))
    triples = list(combinations(range(n), 3))
    if not triples:
        return Hypergraph3(n)
    picked = draw(st.lists(st.sampled_from(triples), unique=True, max_size=max_edges or len(triples)))
    return Hypergraph3(n, picked)


@st.composite
def partitions(draw, n):
    return Partition3(tuple(draw(st.lists(st.integers(1, 3), min_size=n, max_size=n))))


@st.composite
def host_and_partition(draw, max_n=8):
    g = draw(hypergraphs(min_n=1, max_n=max_n))
    return g, draw(partitions(g.n))


@st.composite
def host_sub_partition(draw, max_n=8):
    g, pi = draw(host_and_partition(max_n=max_n))
    keep = draw(st.lists(st.booleans(), min_size=len(g), max_size=len(g)))
    h = g.restrict(e for e, k in zip(g.edges, keep) if k)
    return g, h, pi


# criterion number -> one-line PASS/FAIL report, filled by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
