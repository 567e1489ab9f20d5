from dataclasses import dataclass, field, replace
from typing import Optional
import time

import numpy as np

from ..core import ConfigError, Edge, Instance, SpanningTree, apply_swap, kruskal
from ..core import random_tree, tree_pair_distances
from ..io.logging import get_logger
from ..objective import ObjectiveValue, budget_feasible, objective
from ..objective import swap_distances, swap_objectives
from .config import InitMethod, SolverConfig, resolve_config
from .select import CandidatePool
from .tabu_list import TabuList


logger = get_logger(__name__)


@dataclass
class TraceRecord:
    # 1-based iteration number.
    iteration: int

    # Objective of the tree after this iteration's move.
    current_z: ObjectiveValue

    # Best objective found so far.
    best_z: ObjectiveValue

    # Seconds since the search started.
    elapsed_s: float

    # The executed move.
    removed: Optional[Edge] = None
    inserted: Optional[Edge] = None

    # Move flags (see Selection).
    tabu_hit: bool = False
    aspiration: bool = False
    fallback: bool = False

    # Number of swaps evaluated this iteration.
    candidates: int = 0


@dataclass
class SolveReport:
    best_tree: SpanningTree
    best_z: ObjectiveValue
    initial_z: ObjectiveValue
    trace: list[TraceRecord] = field(default_factory=list)
    wall_time: float = 0.0
    config: Optional[SolverConfig] = None

    # Whether best_z respects the travel distance budget.
    feasible: bool = True

    # Short name of the method that produced the tree.
    method: str = "tabu"

    @property
    def iterations(self) -> int:
        return len(self.trace)


def random_initial_tree(instance: Instance, rng: np.random.Generator) -> SpanningTree:
    """Random tree over the candidate links drawn from 'rng'."""
    if instance.allowed is None:
        return random_tree(instance.n, rng)
    weights = rng.random((instance.n, instance.n))
    return kruskal(instance.n, weights + weights.T, instance.allowed)


def initial_tree(
    instance: Instance,
    config: SolverConfig,
    rng: np.random.Generator,
    given: Optional[SpanningTree] = None,
) -> SpanningTree:
    if given is not None:
        if given.n != instance.n:
            raise ConfigError(f"Given tree has {given.n} stations, not {instance.n}.")
        return given
    if config.init == InitMethod.MST:
        return kruskal(instance.n, instance.t, instance.allowed)
    if config.init == InitMethod.RANDOM:
        return random_initial_tree(instance, rng)
    raise ConfigError(f"InitMethod '{config.init}' needs an initial tree.")


def solve(
    instance: Instance,
    config: SolverConfig,
    initial: Optional[SpanningTree] = None,
) -> SolveReport:
    """
    Link swapping with tabu search. Each iteration samples 'psi' tree links, scores
    every reconnection of each through the incremental objective and moves to the
    best swap that is not tabu. An improving swap is always taken. Non-improving
    moves enter the tabu list.
    """
    cfg = resolve_config(config, instance.n)
    t, d = instance.t, instance.d
    demand_sym = instance.symmetric_demand
    rng = np.random.default_rng(cfg.seed)
    start = time.perf_counter()

    tree = initial_tree(instance, cfg, rng, initial)
    cached = tree_pair_distances(tree, t)
    z = objective(cached, d)
    best_tree, best_z, initial_z = tree, z, z
    tabu = TabuList(cfg.tabu_capacity)
    trace = []
    logger.info(
        f"Tabu search on {instance.n} stations: phi={cfg.phi} psi={cfg.psi} "
        f"capacity={cfg.tabu_capacity} seed={cfg.seed} initial z={z}"
    )

    for iteration in range(1, cfg.phi + 1):
        picks = rng.choice(len(tree.edges), size=cfg.psi, replace=False)
        hoods = [
            swap_objectives(tree, tree.edges[p], cached, t, d, demand_sym)
            for p in picks
        ]
        pool = CandidatePool(hoods, instance.allowed)
        if len(pool) == 0:
            logger.info(f"No swap available at iteration {iteration}. Stopping.")
            break
        choice = pool.select(tabu, best_z)
        a, b = choice.swap
        cached = swap_distances(tree, a, b, cached, t)
        tree = apply_swap(tree, a, b)
        z = choice.z
        if z < best_z:
            best_tree, best_z = tree, z
        else:
            tabu = tabu.push(choice.swap)
        if choice.fallback:
            logger.debug(f"Iteration {iteration}: every candidate is tabu, moving anyway.")
        trace.append(
            TraceRecord(
                iteration=iteration,
                current_z=z,
                best_z=best_z,
                elapsed_s=time.perf_counter() - start,
                removed=a,
                inserted=b,
                tabu_hit=choice.tabu_hit,
                aspiration=choice.aspiration,
                fallback=choice.fallback,
                candidates=len(pool),
            )
        )

    best_z = objective(tree_pair_distances(best_tree, t), d)
    tau = cfg.tau if cfg.tau is not None else instance.budget
    feasible = budget_feasible(best_z, tau)
    if not feasible:
        logger.warning(f"Best objective {best_z} exceeds the budget {tau}.")
    wall_time = time.perf_counter() - start
    logger.info(f"Tabu search done in {wall_time:.3f}s: best z={best_z}")
    return SolveReport(
        best_tree=best_tree,
        best_z=best_z,
        initial_z=initial_z,
        trace=trace,
        wall_time=wall_time,
        config=cfg,
        feasible=feasible,
    )


@dataclass
class BatchReport:
    """Independent solves with consecutive seeds."""

    seeds: list[int]
    best_zs: list[ObjectiveValue]
    wall_times: list[float]

    # The run with the lowest objective (earliest seed on ties).
    best: SolveReport

    @property
    def runs(self) -> int:
        return len(self.seeds)

    @property
    def mean_z(self) -> float:
        return float(np.mean(self.best_zs))

    @property
    def min_z(self) -> float:
        return float(np.min(self.best_zs))

    @property
    def max_z(self) -> float:
        return float(np.max(self.best_zs))

    @property
    def mean_wall_time(self) -> float:
        return float(np.mean(self.wall_times))


def solve_batch(
    instance: Instance,
    config: SolverConfig,
    runs: int,
    initial: Optional[SpanningTree] = None,
) -> BatchReport:
    if runs < 1:
        raise ConfigError(f"'runs' must be at least 1: {runs}")
    seeds, zs, times, best = [], [], [], None
    for k in range(runs):
        report = solve(instance, replace(config, seed=config.seed + k), initial)
        seeds.append(report.config.seed)
        zs.append(report.best_z)
        times.append(report.wall_time)
        if best is None or report.best_z < best.best_z:
            best = report
    logger.info(f"Batch of {runs}: min z={min(zs)} max z={max(zs)}")
    return BatchReport(seeds=seeds, best_zs=zs, wall_times=times, best=best)
