from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .base import Edge, normalize
from .errors import (
    DimensionMismatchError,
    InvalidInstanceError,
    InvalidPartitionError,
    InvalidSwapError,
    MissingEdgeError,
)


@dataclass(frozen=True)
class SpanningTree:
    """
    A spanning tree over stations 0..n-1. Edges are normalized (i < j) and stored
    sorted, so two trees with the same links compare equal.
    """

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.n < 2:
            raise InvalidInstanceError(f"A tree needs at least 2 stations: {self.n}")
        edges = tuple(sorted({normalize(i, j) for i, j in self.edges}))
        if len(edges) != self.n - 1 or len(edges) != len(self.edges):
            raise InvalidInstanceError(
                f"A spanning tree on {self.n} stations needs {self.n - 1} distinct "
                f"edges: {self.edges}"
            )
        for i, j in edges:
            if i < 0 or j >= self.n:
                raise InvalidInstanceError(f"Edge ({i}, {j}) is outside 0..{self.n - 1}")
        object.__setattr__(self, "edges", edges)
        # n-1 distinct edges plus connectivity rules out cycles.
        if len(self.bfs_order) != self.n:
            raise InvalidInstanceError(f"Edges do not connect all stations: {edges}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> "SpanningTree":
        return cls(n, tuple(tuple(e) for e in edges))

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        neighbors = [[] for _ in range(self.n)]
        for i, j in self.edges:
            neighbors[i].append(j)
            neighbors[j].append(i)
        return tuple(tuple(sorted(ns)) for ns in neighbors)

    @cached_property
    def _rooted(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        # BFS from station 0: (visit order, parent per station, -1 for the root).
        parent = [-1] * self.n
        seen = [False] * self.n
        order = [0]
        seen[0] = True
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for v in self.adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    parent[v] = u
                    order.append(v)
                    queue.append(v)
        return tuple(order), tuple(parent)

    @property
    def bfs_order(self) -> tuple[int, ...]:
        return self._rooted[0]

    @property
    def parent(self) -> tuple[int, ...]:
        return self._rooted[1]

    @cached_property
    def subtree_sizes(self) -> np.ndarray:
        """Station count of the subtree hanging below each station (root 0)."""
        sizes = np.ones(self.n, dtype=int)
        for v in reversed(self.bfs_order[1:]):
            sizes[self.parent[v]] += sizes[v]
        return sizes

    def __contains__(self, edge) -> bool:
        return normalize(*edge) in self.edge_set

    def degrees(self) -> np.ndarray:
        return np.array([len(ns) for ns in self.adjacency], dtype=int)

    def total_length(self, t: np.ndarray) -> float:
        return float(sum(t[i, j] for i, j in self.edges))


@dataclass(frozen=True)
class Component:
    """One side of a tree split by removing a link."""

    members: frozenset[int]

    def __post_init__(self):
        if not self.members:
            raise InvalidPartitionError("A component cannot be empty.")
        object.__setattr__(self, "members", frozenset(int(m) for m in self.members))

    @property
    def size(self) -> int:
        return len(self.members)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(sorted(self.members), dtype=int)

    def __contains__(self, station: int) -> bool:
        return station in self.members


@dataclass(frozen=True, eq=False)
class PairwiseDistances:
    """Tree-path lengths 'c' between every pair of stations (read-only)."""

    c: np.ndarray

    def __post_init__(self):
        c = np.array(self.c, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @property
    def n(self) -> int:
        return self.c.shape[0]

    def __getitem__(self, pair: tuple[int, int]) -> float:
        return float(self.c[pair])


def _side_mask(tree: SpanningTree, a: Edge) -> np.ndarray:
    # Stations reachable from a[0] without crossing a.
    mask = np.zeros(tree.n, dtype=bool)
    mask[a[0]] = True
    stack = [a[0]]
    while stack:
        u = stack.pop()
        for v in tree.adjacency[u]:
            if not mask[v] and (u, v) != (a[0], a[1]):
                mask[v] = True
                stack.append(v)
    return mask


def _check_edge(tree: SpanningTree, a) -> Edge:
    a = normalize(*a)
    if a not in tree.edge_set:
        raise MissingEdgeError(f"Edge {a} is not in the tree.")
    return a


def split_tree(tree: SpanningTree, a) -> tuple[Component, Component]:
    """
    Removes 'a' from the tree and returns the two resulting components. The smaller
    component comes first. On equal sizes, the component holding the smaller
    endpoint of 'a' comes first.
    """
    a = _check_edge(tree, a)
    mask = _side_mask(tree, a)
    low = Component(frozenset(np.flatnonzero(mask).tolist()))
    high = Component(frozenset(np.flatnonzero(~mask).tolist()))
    if high.size < low.size:
        return high, low
    return low, high


def reconnect_candidates(c1: Component, c2: Component) -> list[Edge]:
    """All cross links between two disjoint components, normalized and sorted."""
    if c1.members & c2.members:
        raise InvalidPartitionError(
            f"Components overlap on {sorted(c1.members & c2.members)}"
        )
    return sorted(normalize(u, v) for u in c1.members for v in c2.members)


def apply_swap(tree: SpanningTree, a, b) -> SpanningTree:
    """Returns a new tree with 'a' removed and 'b' inserted. 'tree' is untouched."""
    a = _check_edge(tree, a)
    b = normalize(*b)
    mask = _side_mask(tree, a)
    if mask[b[0]] == mask[b[1]]:
        raise InvalidSwapError(f"Edge {b} does not reconnect the split at {a}.")
    if a == b:
        return tree
    edges = [e for e in tree.edges if e != a] + [b]
    return SpanningTree(tree.n, tuple(edges))


def tree_pair_distances(tree: SpanningTree, t: np.ndarray) -> PairwiseDistances:
    """
    Sums 't' along every tree path. Stations are visited in BFS order so each new
    station's row is its parent's row plus the connecting link.
    """
    t = np.asarray(t, dtype=float)
    if t.shape != (tree.n, tree.n):
        raise DimensionMismatchError(f"'t' has shape {t.shape} for {tree.n} stations.")
    c = np.zeros((tree.n, tree.n))
    order = np.array(tree.bfs_order)
    for k in range(1, tree.n):
        v = order[k]
        p = tree.parent[v]
        seen = order[:k]
        c[v, seen] = c[p, seen] + t[p, v]
        c[seen, v] = c[v, seen]
    return PairwiseDistances(c)


def count_swap_pairs(tree: SpanningTree) -> int:
    """Number of (removed, inserted) link pairs, identity reinsertions included."""
    sizes = tree.subtree_sizes[list(tree.bfs_order[1:])]
    return int(np.sum(sizes * (tree.n - sizes)))


def tree_path(tree: SpanningTree, i: int, j: int) -> list[Edge]:
    """Links on the unique path from i to j, in travel order."""
    if i == j:
        return []
    parent = {i: i}
    queue = deque([i])
    while queue and j not in parent:
        u = queue.popleft()
        for v in tree.adjacency[u]:
            if v not in parent:
                parent[v] = u
                queue.append(v)
    path, v = [], j
    while v != i:
        path.append(normalize(parent[v], v))
        v = parent[v]
    return path[::-1]
