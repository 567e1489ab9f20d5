from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from .base import Distances, as_matrix


def default_grid() -> np.ndarray:
    """Ratio thresholds 1.0, 1.1, ..., 3.0."""
    return np.round(np.linspace(1.0, 3.0, 21), 10)


@dataclass(frozen=True, eq=False)
class DetourProfile:
    # Ratio thresholds, ascending.
    grid: np.ndarray

    # Fraction of total demand whose detour ratio is at most each threshold.
    cum_demand: np.ndarray

    # Fraction of station pairs whose detour ratio is at most each threshold.
    cum_pairs: np.ndarray

    # Path over direct distance per ordered pair. NaN on the diagonal and on
    # excluded pairs.
    ratios: np.ndarray

    # Off-diagonal pairs with a zero direct distance (ratio undefined).
    excluded_pairs: int

    # Demand counted by the demand curve.
    total_demand: float

    def demand_above(self, threshold: float, d: np.ndarray) -> float:
        """Demand whose ratio exceeds 'threshold'."""
        with np.errstate(invalid="ignore"):
            above = np.nan_to_num(self.ratios, nan=-np.inf) > threshold
        return float(np.asarray(d, dtype=float)[above].sum())

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "threshold": self.grid,
                "cum_demand_frac": self.cum_demand,
                "cum_pair_frac": self.cum_pairs,
            }
        )


def detour_profile(
    c: Distances,
    t: np.ndarray,
    d: np.ndarray,
    grid: Optional[Sequence[float]] = None,
    close: bool = True,
) -> DetourProfile:
    """
    Cumulative distributions of c/t, weighted by demand and by pair count. With
    'close', the largest ratio is appended to the grid when it lies beyond it, so
    both curves end at 1.0.
    """
    c = as_matrix(c)
    t, d = np.asarray(t, dtype=float), np.asarray(d, dtype=float)
    grid = default_grid() if grid is None else np.sort(np.asarray(grid, dtype=float))

    off_diagonal = ~np.eye(len(t), dtype=bool)
    valid = off_diagonal & (t > 0)
    ratios = np.full(t.shape, np.nan)
    ratios[valid] = c[valid] / t[valid]

    valid_ratios = ratios[valid]
    weights = d[valid]
    if close and valid_ratios.size and valid_ratios.max() > grid[-1]:
        grid = np.append(grid, valid_ratios.max())

    within = valid_ratios[None, :] <= grid[:, None]
    total = float(weights.sum())
    if total > 0:
        cum_demand = (within * weights[None, :]).sum(axis=1) / total
    else:
        cum_demand = np.ones(len(grid))
    if valid_ratios.size:
        cum_pairs = within.sum(axis=1) / valid_ratios.size
    else:
        cum_pairs = np.ones(len(grid))

    return DetourProfile(
        grid=grid,
        cum_demand=cum_demand,
        cum_pairs=cum_pairs,
        ratios=ratios,
        excluded_pairs=int(np.sum(off_diagonal & (t == 0))),
        total_demand=total,
    )
