"""Small instances shared by the tests."""

from typing import Optional

import numpy as np
import pandas as pd

from tnd.core import Instance, SpanningTree, random_tree


INST3_T = [[0, 1, 3], [1, 0, 2], [3, 2, 0]]
INST3_D = [[0, 10, 5], [10, 0, 0], [5, 0, 0]]


def inst3(budget: Optional[float] = None) -> Instance:
    return Instance.from_matrices(INST3_T, INST3_D, budget=budget)


def metric_instance(n: int, seed: int, size: int = 20, max_trips: int = 50) -> Instance:
    """Integer grid stations, Manhattan link distances and integer demand."""
    rng = np.random.default_rng(seed)
    coords = rng.integers(0, size, size=(n, 2))
    t = np.abs(coords[:, None, :] - coords[None, :, :]).sum(axis=-1).astype(float)
    d = rng.integers(0, max_trips, size=(n, n)).astype(float)
    np.fill_diagonal(d, 0.0)
    return Instance.from_matrices(t, d)


def seeded_tree(n: int, seed: int) -> SpanningTree:
    return random_tree(n, np.random.default_rng(seed))


def write_frames(directory, **frames: pd.DataFrame) -> dict[str, str]:
    """Writes each frame to '<name>.csv' under 'directory'. Returns paths by name."""
    paths = {}
    for name, df in frames.items():
        paths[name] = str(directory / f"{name}.csv")
        df.to_csv(paths[name], index=False)
    return paths


def inst3_files(directory) -> dict[str, str]:
    return write_frames(
        directory,
        nodes=pd.DataFrame(
            {
                "id": ["A", "B", "C"],
                "name": ["Alpha", "Beta", "Gamma"],
                "x": [0, 1, 3],
                "y": [0, 0, 0],
            }
        ),
        demand=pd.DataFrame(
            {
                "origin": ["A", "B", "A", "C"],
                "destination": ["B", "A", "C", "A"],
                "trips": [10, 10, 5, 5],
            }
        ),
        distances=pd.DataFrame(
            {"i": ["A", "A", "B"], "j": ["B", "C", "C"], "km": [1, 3, 2]}
        ),
    )
