from typing import Optional

import numpy as np

from .errors import DimensionMismatchError, InvalidInstanceError
from .tree import SpanningTree


class UnionFind:
    """Disjoint sets over 0..n-1 with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        """Merges the sets of x and y. Returns False if they were already joined."""
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if self.size[x] < self.size[y]:
            x, y = y, x
        self.parent[y] = x
        self.size[x] += self.size[y]
        return True


def kruskal(
    n: int,
    w: np.ndarray,
    allowed: Optional[np.ndarray] = None,
) -> SpanningTree:
    """
    Minimum total weight spanning tree. Candidate links are scanned by
    (weight, i, j) ascending, so ties always resolve the same way. 'allowed'
    optionally restricts the candidate links.
    """
    if n < 2:
        raise InvalidInstanceError(f"A tree needs at least 2 stations: {n}")
    w = np.asarray(w, dtype=float)
    if w.shape != (n, n):
        raise DimensionMismatchError(f"'w' has shape {w.shape} for {n} stations.")
    if not np.all(np.isfinite(w)):
        raise InvalidInstanceError("'w' has non-finite entries.")
    i, j = np.triu_indices(n, k=1)
    if allowed is not None:
        keep = np.asarray(allowed, dtype=bool)[i, j]
        i, j = i[keep], j[keep]
    weights = w[i, j]
    order = np.lexsort((j, i, weights))

    uf = UnionFind(n)
    edges = []
    for k in order:
        if uf.union(int(i[k]), int(j[k])):
            edges.append((int(i[k]), int(j[k])))
            if len(edges) == n - 1:
                break
    if len(edges) != n - 1:
        raise InvalidInstanceError("Candidate links do not connect all stations.")
    return SpanningTree(n, tuple(edges))
