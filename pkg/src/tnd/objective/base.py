from dataclasses import dataclass
from typing import Iterator, Optional, Union

from scipy.special import logsumexp
import numpy as np

from ..core import (
    DimensionMismatchError,
    Edge,
    InvalidInstanceError,
    InvalidSwapError,
    Network,
    PairwiseDistances,
    SpanningTree,
    normalize,
    split_tree,
)


# Total passenger-kilometers.
ObjectiveValue = float

Distances = Union[PairwiseDistances, np.ndarray]


def as_matrix(c: Distances) -> np.ndarray:
    return c.c if isinstance(c, PairwiseDistances) else np.asarray(c, dtype=float)


def _check_dims(c: np.ndarray, d: np.ndarray):
    if c.shape != d.shape:
        raise DimensionMismatchError(f"Distances {c.shape} and demand {d.shape} differ.")


def objective(c: Distances, d: np.ndarray) -> ObjectiveValue:
    """Sum of d[i][j] * c[i][j] over ordered station pairs."""
    c, d = as_matrix(c), np.asarray(d, dtype=float)
    _check_dims(c, d)
    # Unreachable pairs without demand contribute nothing.
    with np.errstate(invalid="ignore"):
        return float(np.sum(np.where(d > 0, d * c, 0.0)))


def _oriented_split(
    tree: SpanningTree, a, b
) -> tuple[np.ndarray, np.ndarray, int, int]:
    c1, c2 = split_tree(tree, a)
    b = normalize(*b)
    if b[0] in c1 and b[1] in c2:
        u, v = b
    elif b[1] in c1 and b[0] in c2:
        v, u = b
    else:
        raise InvalidSwapError(f"Edge {b} does not reconnect the split at {a}.")
    return c1.array, c2.array, u, v


def _within(c: np.ndarray, d: np.ndarray, s1: np.ndarray, s2: np.ndarray) -> float:
    # Each component keeps its own tree, so its internal distances are unchanged.
    w1 = d[np.ix_(s1, s1)] * c[np.ix_(s1, s1)]
    w2 = d[np.ix_(s2, s2)] * c[np.ix_(s2, s2)]
    return float(w1.sum() + w2.sum())


def incremental_swap_objective(
    tree: SpanningTree,
    a,
    b,
    cached: PairwiseDistances,
    t: np.ndarray,
    d: np.ndarray,
) -> ObjectiveValue:
    """
    Objective of the tree with 'a' swapped for 'b', read off the cached distances of
    'tree'. Every trip between the two components must use 'b'.
    """
    c = as_matrix(cached)
    s1, s2, u, v = _oriented_split(tree, a, b)
    demand = d[np.ix_(s1, s2)] + d[np.ix_(s2, s1)].T
    cross = c[s1, u][:, None] + t[u, v] + c[v, s2][None, :]
    return _within(c, d, s1, s2) + float(np.sum(demand * cross))


@dataclass(frozen=True, eq=False)
class SwapNeighborhood:
    """Objective of every reconnection after removing one link."""

    removed: Edge

    # Stations of the first and second components, sorted.
    s1: np.ndarray
    s2: np.ndarray

    # z[p, q] is the objective when linking s1[p] to s2[q].
    z: np.ndarray

    @property
    def size(self) -> int:
        return self.z.size

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Normalized endpoints (lo, hi) of each candidate, same shape as 'z'."""
        u, v = np.meshgrid(self.s1, self.s2, indexing="ij")
        return np.minimum(u, v), np.maximum(u, v)

    def __iter__(self) -> Iterator[tuple[Edge, ObjectiveValue]]:
        lo, hi = self.edges()
        for p, q in np.ndindex(self.z.shape):
            yield (int(lo[p, q]), int(hi[p, q])), float(self.z[p, q])


def swap_objectives(
    tree: SpanningTree,
    a,
    cached: PairwiseDistances,
    t: np.ndarray,
    d: np.ndarray,
    demand_sym: Optional[np.ndarray] = None,
) -> SwapNeighborhood:
    """
    Vectorized incremental_swap_objective over all reconnections of 'a'. With
    r and s the cross demand of each station, the cross term of linking u to v is
    c[S1, u].r + c[v, S2].s + t[u, v] * sum(r).
    """
    c = as_matrix(cached)
    a = normalize(*a)
    c1, c2 = split_tree(tree, a)
    s1, s2 = c1.array, c2.array
    if demand_sym is None:
        demand_sym = d + d.T
    cross = demand_sym[np.ix_(s1, s2)]
    r, s = cross.sum(axis=1), cross.sum(axis=0)
    left = c[np.ix_(s1, s1)] @ r
    right = c[np.ix_(s2, s2)] @ s
    z = (
        _within(c, d, s1, s2)
        + left[:, None]
        + right[None, :]
        + t[np.ix_(s1, s2)] * cross.sum()
    )
    return SwapNeighborhood(a, s1, s2, z)


def swap_distances(
    tree: SpanningTree,
    a,
    b,
    cached: PairwiseDistances,
    t: np.ndarray,
) -> PairwiseDistances:
    """Tree-path distances after swapping 'a' for 'b', updating only the cross pairs."""
    c = as_matrix(cached).copy()
    s1, s2, u, v = _oriented_split(tree, a, b)
    cross = c[s1, u][:, None] + t[u, v] + c[v, s2][None, :]
    c[np.ix_(s1, s2)] = cross
    c[np.ix_(s2, s1)] = cross.T
    return PairwiseDistances(c)


def entropy_objective(c: Distances, d: np.ndarray, lambda_: float) -> float:
    """
    Sum over ordered pairs of d * log(sum over paths of exp(-lambda * length)). A
    tree has a single path per pair, so this is -lambda times the objective.
    """
    if not lambda_ > 0:
        raise ValueError(f"Unsupported heterogeneity parameter: {lambda_}")
    c, d = as_matrix(c), np.asarray(d, dtype=float)
    _check_dims(c, d)
    paths = -lambda_ * c[..., None]
    return float(np.sum(d * logsumexp(paths, axis=-1)))


def demand_weighted_lower_bound(d: np.ndarray, t: np.ndarray) -> float:
    """Objective if every trip rode its direct link."""
    d, t = np.asarray(d, dtype=float), np.asarray(t, dtype=float)
    _check_dims(t, d)
    return float(np.sum(d * t))


def budget_feasible(z: ObjectiveValue, tau: Optional[float]) -> bool:
    return tau is None or z <= tau


def network_objective(network: Network, t: np.ndarray, d: np.ndarray) -> ObjectiveValue:
    """Objective of a general network, routing each trip on a shortest path."""
    if not network.is_connected():
        raise InvalidInstanceError("The network does not connect all stations.")
    return objective(network.shortest_paths(t), d)
