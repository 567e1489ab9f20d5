from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core import ConfigError, Instance, Station
from .instance import derive_distances


@dataclass
class SyntheticConfig:
    # Number of stations.
    n: int = 111

    # Number of high-demand hubs. The first stations are the hubs.
    centers: int = 4

    # Seed of the PCG64 generator.
    seed: int = 7

    # Distance (km) between consecutive hubs along an arm.
    arm_spacing: float = 8.0

    # Spread (km) of ordinary stations around their hub.
    spread: float = 2.5

    # Population multiplier of a hub over an ordinary station.
    hub_weight: float = 20.0

    # Trips per day per unit of pop_i * pop_j / km.
    gravity: float = 1e-4


def _hub_positions(centers: int, spacing: float) -> np.ndarray:
    # Hub 0 sits at the junction and the others alternate over three arms.
    angles = np.radians([90.0, 210.0, 330.0])
    positions = [(0.0, 0.0)]
    for k in range(1, centers):
        arm, reach = (k - 1) % 3, spacing * ((k - 1) // 3 + 1)
        positions.append((reach * np.cos(angles[arm]), reach * np.sin(angles[arm])))
    return np.array(positions)


def generate_synthetic(
    n: int,
    centers: int,
    seed: int,
    config: Optional[SyntheticConfig] = None,
) -> Instance:
    """
    A Y-shaped, poly-centric city: hubs along three arms, stations scattered around
    them, gravity demand pop_i * pop_j / max(dist, 1) rounded to whole trips and
    Euclidean link distances.
    """
    if n < 2:
        raise ConfigError(f"'n' must be at least 2: {n}")
    if not 1 <= centers <= n:
        raise ConfigError(f"'centers' must be between 1 and {n}: {centers}")
    config = config or SyntheticConfig(n=n, centers=centers, seed=seed)
    rng = np.random.default_rng(seed)

    hubs = _hub_positions(centers, config.arm_spacing)
    owner = np.concatenate([np.arange(centers), rng.integers(0, centers, n - centers)])
    offsets = rng.normal(0.0, config.spread, size=(n, 2))
    offsets[:centers] = 0.0
    coords = np.round(hubs[owner] + offsets, 3)

    population = rng.integers(1_000, 5_000, size=n).astype(float)
    population[:centers] *= config.hub_weight

    t = derive_distances(coords, geo=False)
    gravity = config.gravity * np.outer(population, population) / np.maximum(t, 1.0)
    d = np.triu(np.round(gravity), k=1)
    d = d + d.T

    stations = tuple(
        Station(
            k,
            str(k),
            f"Hub {k}" if k < centers else f"Stop {k}",
            float(coords[k, 0]),
            float(coords[k, 1]),
        )
        for k in range(n)
    )
    meta = {"source": "synthetic", "seed": str(seed), "distances": "euclidean"}
    return Instance(stations, t, d, meta=meta)
