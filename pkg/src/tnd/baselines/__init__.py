from .compare import (
    CompareConfig,
    CompareReport,
    CompareRow,
    Delta,
    Method,
    compare,
    relative_delta,
)
from .heuristics import (
    BaselineConfig,
    BaselineMethod,
    heuristic_link_deletion,
    heuristic_link_swapping,
)
from .oracle import BruteConfig, brute_force_optimum
from .spanning import mdst, mst
