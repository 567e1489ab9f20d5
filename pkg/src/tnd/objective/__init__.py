from .base import (
    Distances,
    ObjectiveValue,
    SwapNeighborhood,
    as_matrix,
    budget_feasible,
    demand_weighted_lower_bound,
    entropy_objective,
    incremental_swap_objective,
    network_objective,
    objective,
    swap_distances,
    swap_objectives,
)
from .detour import DetourProfile, default_grid, detour_profile
from .flows import Arc, LinkFlows, link_flows
