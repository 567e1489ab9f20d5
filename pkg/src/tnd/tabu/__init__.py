from .config import InitMethod, SolverConfig, default_tabu_capacity, resolve_config
from .select import CandidatePool, Selection, select_best_non_tabu, select_from_ranked
from .solver import (
    BatchReport,
    SolveReport,
    TraceRecord,
    initial_tree,
    random_initial_tree,
    solve,
    solve_batch,
)
from .tabu_list import TabuList, tabu_contains, tabu_push
