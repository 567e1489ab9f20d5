from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

from scipy.sparse.csgraph import connected_components, csgraph_from_dense, shortest_path
import networkx as nx
import numpy as np

from .base import Edge, normalize
from .errors import DimensionMismatchError, InvalidInstanceError, MissingEdgeError
from .tree import SpanningTree


@dataclass(frozen=True)
class Network:
    """An undirected set of operated links. Unlike SpanningTree, cycles are allowed."""

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        edges = tuple(sorted({normalize(i, j) for i, j in self.edges}))
        for i, j in edges:
            if i < 0 or j >= self.n:
                raise InvalidInstanceError(f"Edge ({i}, {j}) is outside 0..{self.n - 1}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def complete(cls, n: int, allowed: Optional[np.ndarray] = None) -> "Network":
        i, j = np.triu_indices(n, k=1)
        if allowed is not None:
            keep = np.asarray(allowed, dtype=bool)[i, j]
            i, j = i[keep], j[keep]
        return cls(n, tuple(zip(i.tolist(), j.tolist())))

    @classmethod
    def from_tree(cls, tree: SpanningTree) -> "Network":
        return cls(tree.n, tree.edges)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> "Network":
        return cls(n, tuple(tuple(e) for e in edges))

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def __contains__(self, edge) -> bool:
        return normalize(*edge) in self.edge_set

    def __len__(self) -> int:
        return len(self.edges)

    def _csgraph(self, t: np.ndarray):
        t = np.asarray(t, dtype=float)
        if t.shape != (self.n, self.n):
            raise DimensionMismatchError(f"'t' has shape {t.shape} for {self.n} stations.")
        dense = np.full((self.n, self.n), np.inf)
        if self.edges:
            i, j = np.array(self.edges).T
            dense[i, j] = t[i, j]
            dense[j, i] = t[i, j]
        # inf marks a missing link so zero-length links survive.
        return csgraph_from_dense(dense, null_value=np.inf)

    def shortest_paths(self, t: np.ndarray) -> np.ndarray:
        """All-pairs shortest path lengths over the operated links (Dijkstra)."""
        return shortest_path(self._csgraph(t), method="D", directed=False)

    def is_connected(self) -> bool:
        adjacency = self._csgraph(np.ones((self.n, self.n)))
        count, _ = connected_components(adjacency, directed=False)
        return count == 1

    def is_tree(self) -> bool:
        return len(self.edges) == self.n - 1 and self.is_connected()

    def to_tree(self) -> SpanningTree:
        return SpanningTree(self.n, self.edges)

    @cached_property
    def bridges(self) -> frozenset[Edge]:
        """Links whose removal disconnects the network."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return frozenset(normalize(i, j) for i, j in nx.bridges(graph))

    def with_edge(self, edge) -> "Network":
        return Network(self.n, self.edges + (normalize(*edge),))

    def without_edge(self, edge) -> "Network":
        edge = normalize(*edge)
        if edge not in self.edge_set:
            raise MissingEdgeError(f"Edge {edge} is not in the network.")
        return Network(self.n, tuple(e for e in self.edges if e != edge))

    def non_edges(self, allowed: Optional[np.ndarray] = None) -> list[Edge]:
        """Candidate links not yet operated, sorted."""
        candidates = Network.complete(self.n, allowed).edges
        return [e for e in candidates if e not in self.edge_set]

    def degrees(self) -> np.ndarray:
        degrees = np.zeros(self.n, dtype=int)
        for i, j in self.edges:
            degrees[i] += 1
            degrees[j] += 1
        return degrees

    def total_length(self, t: np.ndarray) -> float:
        return float(sum(t[i, j] for i, j in self.edges))
