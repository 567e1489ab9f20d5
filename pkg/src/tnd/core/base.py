from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatchError, InvalidInstanceError


# An undirected station pair, always stored as (min, max).
Edge = tuple[int, int]

# A (removed edge, inserted edge) pair.
Swap = tuple[Edge, Edge]


def normalize(i: int, j: int) -> Edge:
    """Returns the undirected edge between i and j as a (min, max) pair."""
    i, j = int(i), int(j)
    if i == j:
        raise ValueError(f"Self-loops are not edges: ({i}, {j})")
    return (i, j) if i < j else (j, i)


def normalize_swap(a: Sequence[int], b: Sequence[int]) -> Swap:
    return normalize(*a), normalize(*b)


@dataclass(frozen=True)
class Station:
    # Dense 0-based index used for all matrix lookups.
    index: int

    # The id as it appears in the input files.
    source_id: str = ""

    # Human-readable name.
    name: str = ""

    # Planar coordinates in km, or (lat, lon) in degrees for geographic instances.
    x: float = 0.0
    y: float = 0.0


def _as_square(name: str, matrix, n: Optional[int] = None) -> np.ndarray:
    array = np.array(matrix, dtype=float)
    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise DimensionMismatchError(f"'{name}' must be a square matrix: {array.shape}")
    if n is not None and array.shape[0] != n:
        raise DimensionMismatchError(
            f"'{name}' has {array.shape[0]} rows but there are {n} stations."
        )
    return array


@dataclass(frozen=True, eq=False)
class Instance:
    """
    Stations, the symmetric link-distance matrix 't' (km) and the directed demand
    matrix 'd' (passengers per day). Matrices are copied and made read-only.
    """

    stations: tuple[Station, ...]
    t: np.ndarray
    d: np.ndarray

    # Travel distance budget in passenger-kilometers. None means unconstrained.
    budget: Optional[float] = None

    # Optional symmetric boolean whitelist of candidate links.
    allowed: Optional[np.ndarray] = None

    # Whether station coordinates are (lat, lon) rather than planar km.
    geo: bool = False

    # Free-form provenance (distance derivation mode, source files).
    meta: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.stations)
        if n < 2:
            raise InvalidInstanceError(f"An instance needs at least 2 stations: {n}")
        t = _as_square("t", self.t, n)
        d = _as_square("d", self.d, n)
        for name, m in (("t", t), ("d", d)):
            if not np.all(np.isfinite(m)):
                raise InvalidInstanceError(f"'{name}' has non-finite entries.")
            if np.any(m < 0):
                raise InvalidInstanceError(f"'{name}' has negative entries.")
            if np.any(np.diag(m) != 0):
                raise InvalidInstanceError(f"'{name}' has a non-zero diagonal.")
        if not np.array_equal(t, t.T):
            raise InvalidInstanceError("'t' is not symmetric.")
        if self.budget is not None and not self.budget >= 0:
            raise InvalidInstanceError(f"Unsupported budget: {self.budget}")
        for i, station in enumerate(self.stations):
            if station.index != i:
                raise InvalidInstanceError(f"Station {station} is not at index {i}.")
        t.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "d", d)
        if self.allowed is not None:
            allowed = np.array(self.allowed, dtype=bool)
            if allowed.shape != (n, n):
                raise DimensionMismatchError(f"'allowed' has shape {allowed.shape}")
            if not np.array_equal(allowed, allowed.T) or np.any(np.diag(allowed)):
                raise InvalidInstanceError("'allowed' must be symmetric, no self-loops.")
            allowed.setflags(write=False)
            object.__setattr__(self, "allowed", allowed)

    @classmethod
    def from_matrices(
        cls,
        t,
        d,
        budget: Optional[float] = None,
        names: Optional[Sequence[str]] = None,
        allowed=None,
    ) -> "Instance":
        n = len(t)
        names = names or [str(i) for i in range(n)]
        stations = tuple(Station(i, str(i), names[i]) for i in range(n))
        return cls(stations, t, d, budget=budget, allowed=allowed)

    @property
    def n(self) -> int:
        return len(self.stations)

    @cached_property
    def symmetric_demand(self) -> np.ndarray:
        """d + dᵀ: the demand exchanged by each unordered pair."""
        demand = self.d + self.d.T
        demand.setflags(write=False)
        return demand

    @property
    def total_demand(self) -> float:
        return float(self.d.sum())

    @cached_property
    def candidate_mask(self) -> np.ndarray:
        """Boolean matrix of the links that may be operated."""
        if self.allowed is not None:
            return self.allowed
        mask = ~np.eye(self.n, dtype=bool)
        mask.setflags(write=False)
        return mask

    def is_allowed(self, edge: Edge) -> bool:
        return bool(self.candidate_mask[edge[0], edge[1]])

    def label(self, i: int) -> str:
        station = self.stations[i]
        return station.name or station.source_id or str(i)
