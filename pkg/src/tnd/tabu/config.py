from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Union

from ..core import ConfigError
from ..io.logging import get_logger


logger = get_logger(__name__)


class InitMethod(Enum):
    """How the first tree of a search is built."""

    MST = "MST"  # Minimum total length tree.
    RANDOM = "RANDOM"  # Uniformly random tree drawn from the seeded RNG.
    GIVEN = "GIVEN"  # A tree supplied by the caller (e.g., loaded from a file).


@dataclass
class SolverConfig:
    # Number of iterations.
    phi: int = 3000

    # Number of tree links sampled for removal in each iteration.
    psi: int = 7

    # Tabu list capacity. None means max(1, n // 4) for an n-station instance.
    tabu_capacity: Optional[int] = None

    # Seed of the PCG64 generator that drives every random choice of a run.
    seed: int = 314159

    # Travel distance budget. None falls back to the instance budget, if any.
    tau: Optional[float] = None

    # Initial tree.
    init: InitMethod = InitMethod.MST


def default_tabu_capacity(n: int) -> int:
    return max(1, n // 4)


def resolve_config(config: SolverConfig, n: int) -> SolverConfig:
    """
    Validates 'config' against an n-station instance and fills in derived defaults.
    Returns a new config. A 'psi' beyond the n-1 tree links is clamped.
    """
    init: Union[InitMethod, str] = config.init
    if isinstance(init, str):
        try:
            init = InitMethod[init.upper()]
        except KeyError:
            raise ConfigError(f"Unsupported InitMethod: {init}")
    if config.phi < 1:
        raise ConfigError(f"'phi' must be at least 1: {config.phi}")
    if config.psi < 1:
        raise ConfigError(f"'psi' must be at least 1: {config.psi}")
    if config.tabu_capacity is not None and config.tabu_capacity < 0:
        raise ConfigError(f"'tabu_capacity' cannot be negative: {config.tabu_capacity}")
    if config.tau is not None and config.tau < 0:
        raise ConfigError(f"'tau' cannot be negative: {config.tau}")
    psi = config.psi
    if psi > n - 1:
        logger.warning(f"'psi' of {psi} exceeds the {n - 1} tree links. Clamping.")
        psi = n - 1
    capacity = config.tabu_capacity
    if capacity is None:
        capacity = default_tabu_capacity(n)
    return replace(config, psi=psi, tabu_capacity=capacity, init=init)
