"""Seeded sampling of the binomial random 3-uniform hypergraph.

Every triple of ``range(n)`` gets one uniform draw in lexicographic triple
order from numpy's PCG64 generator; the triple is kept when its draw is below
``p``.  Because the draws do not depend on ``p``, samples with the same seed
are nested as ``p`` grows.

Trial seeds are derived with :func:`derive_seed`, which feeds the master seed
and the integer coordinates of the trial into :class:`numpy.random.SeedSequence`
and takes the first 64-bit word of its state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import chain, combinations

import numpy as np

from .hypergraph import Hypergraph3

KINDS = ("sqrt_log", "log", "constant")


@dataclass(frozen=True)
class PSchedule:
    kind: str
    c: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown schedule kind {self.kind!r}; expected one of {KINDS}")
        if not self.c > 0:
            raise ValueError("schedule coefficient must be positive")

    def __call__(self, n: int) -> float:
        return schedule_p(self, n)


def schedule_p(sched: PSchedule, n: int) -> float:
    if n < 2:
        raise ValueError("schedules need n >= 2")
    if sched.kind == "sqrt_log":
        p = sched.c * math.sqrt(math.log(n)) / n
    elif sched.kind == "log":
        p = sched.c * math.log(n) / n
    else:
        p = sched.c
    return min(max(p, 0.0), 1.0)


def derive_seed(master: int, *coords: int) -> int:
    """Mix a master seed with trial coordinates into one 64-bit seed."""
    ss = np.random.SeedSequence([int(master) & (2**64 - 1), *(int(c) for c in coords)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@lru_cache(maxsize=8)
def triples_array(n: int) -> np.ndarray:
    """All triples of ``range(n)`` in lexicographic order, shape ``(C(n,3), 3)``."""
    m = math.comb(n, 3)
    flat = np.fromiter(chain.from_iterable(combinations(range(n), 3)), dtype=np.int32, count=3 * m)
    out = flat.reshape(m, 3)
    out.setflags(write=False)
    return out


def uniform_draws(n: int, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    return rng.random(math.comb(n, 3))


def sample_edges(n: int, p: float, seed: int) -> np.ndarray:
    """Edge array of one sample; same rule as :func:`sample_g3` without the wrapper."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    return triples_array(n)[uniform_draws(n, seed) < p]


def sample_g3(n: int, p: float, seed: int) -> Hypergraph3:
    return Hypergraph3(n, map(tuple, sample_edges(n, p, seed).tolist()))
