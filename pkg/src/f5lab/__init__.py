"""Random Turan experiments for the generalized triangle F5 on 3-uniform hypergraphs."""

from ._backend import BACKEND
from .hypergraph import F5, Graph2, Hypergraph3, Partition3, build, complete, complete_tripartite, turan
from .motifs import count_f5, count_f5hat, count_k4minus, is_f5_free
from .random_model import PSchedule, sample_g3, schedule_p
from .solver import SolveResult, SolverBudgetExceeded, is_tripartite, max_f5_free, t_of_g

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "F5",
    "Graph2",
    "Hypergraph3",
    "Partition3",
    "PSchedule",
    "SolveResult",
    "SolverBudgetExceeded",
    "build",
    "complete",
    "complete_tripartite",
    "count_f5",
    "count_f5hat",
    "count_k4minus",
    "is_f5_free",
    "is_tripartite",
    "max_f5_free",
    "sample_g3",
    "schedule_p",
    "t_of_g",
    "turan",
]
