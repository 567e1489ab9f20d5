from dataclasses import dataclass
from functools import cached_property

from ..core import ConfigError, Swap, normalize_swap


@dataclass(frozen=True)
class TabuList:
    """Bounded FIFO of executed swaps. Pushing at capacity evicts the oldest entry."""

    capacity: int
    entries: tuple[Swap, ...] = ()

    def __post_init__(self):
        if self.capacity < 0:
            raise ConfigError(f"Tabu capacity cannot be negative: {self.capacity}")

    @cached_property
    def _members(self) -> frozenset[Swap]:
        return frozenset(self.entries)

    def push(self, pair) -> "TabuList":
        if self.capacity == 0:
            return self
        entries = self.entries + (normalize_swap(*pair),)
        return TabuList(self.capacity, entries[-self.capacity :])

    def __contains__(self, pair) -> bool:
        return normalize_swap(*pair) in self._members

    def __len__(self) -> int:
        return len(self.entries)


def tabu_push(tabu: TabuList, pair) -> TabuList:
    return tabu.push(pair)


def tabu_contains(tabu: TabuList, pair) -> bool:
    return pair in tabu
