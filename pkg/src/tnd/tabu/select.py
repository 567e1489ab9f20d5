from dataclasses import dataclass
from itertools import chain
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from ..core import Swap, normalize_swap
from ..objective import ObjectiveValue, SwapNeighborhood
from .tabu_list import TabuList


@dataclass(frozen=True)
class Selection:
    swap: Swap
    z: ObjectiveValue

    # The move improves the best objective found so far, so tabu status is ignored.
    aspiration: bool = False

    # The overall best candidate is in the tabu list.
    tabu_hit: bool = False

    # Every candidate was tabu and none improved, so the best one is taken anyway.
    fallback: bool = False


def select_from_ranked(
    ranked: Iterable[tuple[Swap, ObjectiveValue]],
    tabu: TabuList,
    z_star: ObjectiveValue,
) -> Selection:
    """
    Picks the next move from candidates given in ascending (z, swap) order. Only as
    many candidates are consumed as it takes to find a non-tabu one.
    """
    ranked = iter(ranked)
    first = next(ranked, None)
    if first is None:
        raise ValueError("Cannot select from an empty candidate set.")
    swap, z = first
    tabu_hit = swap in tabu
    if z < z_star:
        return Selection(swap, z, aspiration=True, tabu_hit=tabu_hit)
    for other, other_z in chain([first], ranked):
        if other not in tabu:
            return Selection(other, other_z, tabu_hit=tabu_hit)
    return Selection(swap, z, tabu_hit=True, fallback=True)


def select_best_non_tabu(
    candidates: Sequence[tuple[Swap, ObjectiveValue]],
    tabu: TabuList,
    z_star: ObjectiveValue,
) -> Selection:
    ranked = sorted(
        ((normalize_swap(*swap), float(z)) for swap, z in candidates),
        key=lambda c: (c[1], c[0]),
    )
    return select_from_ranked(ranked, tabu, z_star)


def _concat(parts: list[np.ndarray], dtype) -> np.ndarray:
    return np.concatenate(parts).astype(dtype) if parts else np.empty(0, dtype)


class CandidatePool:
    """
    All evaluated swaps of one iteration, flattened. Identity reinsertions and links
    outside 'allowed' are dropped.
    """

    def __init__(
        self,
        neighborhoods: Sequence[SwapNeighborhood],
        allowed: Optional[np.ndarray] = None,
    ):
        z, a_lo, a_hi, b_lo, b_hi = [], [], [], [], []
        for hood in neighborhoods:
            lo, hi = hood.edges()
            keep = ~((lo == hood.removed[0]) & (hi == hood.removed[1]))
            if allowed is not None:
                keep &= allowed[lo, hi]
            z.append(hood.z[keep])
            b_lo.append(lo[keep])
            b_hi.append(hi[keep])
            a_lo.append(np.full(keep.sum(), hood.removed[0]))
            a_hi.append(np.full(keep.sum(), hood.removed[1]))
        self.z = _concat(z, float)
        self.a_lo, self.a_hi = _concat(a_lo, int), _concat(a_hi, int)
        self.b_lo, self.b_hi = _concat(b_lo, int), _concat(b_hi, int)

    def __len__(self) -> int:
        return len(self.z)

    def _sorted(self, idx: np.ndarray) -> np.ndarray:
        keys = (
            self.b_hi[idx],
            self.b_lo[idx],
            self.a_hi[idx],
            self.a_lo[idx],
            self.z[idx],
        )
        return idx[np.lexsort(keys)]

    def _swap(self, k: int) -> Swap:
        a = (int(self.a_lo[k]), int(self.a_hi[k]))
        b = (int(self.b_lo[k]), int(self.b_hi[k]))
        return a, b

    def ranked(self, head: int = 1) -> Iterator[tuple[Swap, ObjectiveValue]]:
        """
        Candidates in ascending (z, a, b) order. The 'head' smallest (plus ties) are
        sorted up front and the rest only if the consumer reaches them.
        """
        head = max(1, head)
        if len(self) <= head:
            first, rest = self._sorted(np.arange(len(self))), None
        else:
            threshold = np.partition(self.z, head - 1)[head - 1]
            within = self.z <= threshold
            first = self._sorted(np.flatnonzero(within))
            rest = np.flatnonzero(~within)
        for k in first:
            yield self._swap(k), float(self.z[k])
        if rest is not None and rest.size:
            for k in self._sorted(rest):
                yield self._swap(k), float(self.z[k])

    def select(self, tabu: TabuList, z_star: ObjectiveValue) -> Selection:
        # At most len(tabu) of the head can be tabu.
        return select_from_ranked(self.ranked(len(tabu) + 1), tabu, z_star)
