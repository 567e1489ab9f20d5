from itertools import product
from typing import Iterator, Optional, Sequence
import heapq

import numpy as np

from .errors import PruferDecodeError
from .tree import SpanningTree


def prufer_decode(seq: Sequence[int], n: Optional[int] = None) -> SpanningTree:
    """Labeled tree on len(seq) + 2 stations encoded by 'seq'."""
    seq = [int(s) for s in seq]
    if n is None:
        n = len(seq) + 2
    elif n != len(seq) + 2:
        raise PruferDecodeError(f"A sequence for {n} stations has length {n - 2}: {seq}")
    for s in seq:
        if not 0 <= s < n:
            raise PruferDecodeError(f"Label {s} is outside 0..{n - 1}")

    degree = [1] * n
    for s in seq:
        degree[s] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for s in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, s))
        degree[s] -= 1
        if degree[s] == 1:
            heapq.heappush(leaves, s)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return SpanningTree(n, tuple(edges))


def prufer_encode(tree: SpanningTree) -> list[int]:
    degree = [len(ns) for ns in tree.adjacency]
    removed = [False] * tree.n
    leaves = [v for v in range(tree.n) if degree[v] == 1]
    heapq.heapify(leaves)
    seq = []
    for _ in range(tree.n - 2):
        leaf = heapq.heappop(leaves)
        removed[leaf] = True
        neighbor = next(v for v in tree.adjacency[leaf] if not removed[v])
        seq.append(neighbor)
        degree[neighbor] -= 1
        if degree[neighbor] == 1:
            heapq.heappush(leaves, neighbor)
    return seq


def iter_trees(n: int) -> Iterator[SpanningTree]:
    """Yields all n^(n-2) labeled trees, in lexicographic sequence order."""
    for seq in product(range(n), repeat=n - 2):
        yield prufer_decode(seq, n)


def random_tree(n: int, rng: np.random.Generator) -> SpanningTree:
    """Uniformly random labeled tree drawn through its sequence."""
    return prufer_decode(rng.integers(0, n, size=n - 2).tolist(), n)
