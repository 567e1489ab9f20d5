from .greedy import (
    AugmentConfig,
    AugmentedNetwork,
    add_edge_distances,
    augment,
    candidate_z,
    lower_bound_gap_trace,
)
