from .base import Edge, Instance, Station, Swap, normalize, normalize_swap
from .errors import (
    ConfigError,
    DataError,
    DimensionMismatchError,
    InfeasibleError,
    InvalidInstanceError,
    InvalidPartitionError,
    InvalidSwapError,
    MissingEdgeError,
    PruferDecodeError,
    SizeGuardError,
)
from .kruskal import UnionFind, kruskal
from .network import Network
from .prufer import iter_trees, prufer_decode, prufer_encode, random_tree
from .tree import (
    Component,
    PairwiseDistances,
    SpanningTree,
    apply_swap,
    count_swap_pairs,
    reconnect_candidates,
    split_tree,
    tree_pair_distances,
    tree_path,
)
