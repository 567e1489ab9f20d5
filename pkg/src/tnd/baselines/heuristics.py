from dataclasses import dataclass
from enum import Enum
from typing import Optional
import time

from ..core import ConfigError, InvalidInstanceError, Instance, Network, SpanningTree
from ..core import apply_swap, normalize, tree_pair_distances, tree_path
from ..io.logging import get_logger
from ..objective import incremental_swap_objective, objective, swap_distances
from ..tabu import SolveReport, TraceRecord
from .spanning import mst


logger = get_logger(__name__)


class BaselineMethod(Enum):
    SWAP = "SWAP"  # Link swapping over every station pair.
    DELETE = "DELETE"  # Link deletion from the complete network.


@dataclass
class BaselineConfig:
    method: BaselineMethod = BaselineMethod.SWAP

    # Iteration cap for link swapping. None means one pass over all station pairs.
    # Larger caps make further passes until a pass brings no improvement.
    iterations: Optional[int] = None


def heuristic_link_swapping(
    instance: Instance,
    iterations: Optional[int] = None,
    initial: Optional[SpanningTree] = None,
) -> SolveReport:
    """
    Starting from the MST (or 'initial'), visits station pairs in lexicographic
    order. For a pair not yet linked, tries inserting it against each link on the
    tree path it closes and applies the best strictly improving exchange. A visited
    pair is not visited again in the same pass.
    """
    start = time.perf_counter()
    t, d = instance.t, instance.d
    pairs = Network.complete(instance.n, instance.allowed).edges
    limit = len(pairs) if iterations is None else iterations
    if limit < 0:
        raise ConfigError(f"'iterations' cannot be negative: {limit}")

    tree = initial if initial is not None else mst(instance)
    cached = tree_pair_distances(tree, t)
    z = initial_z = objective(cached, d)
    trace = []
    improved_this_pass = False
    for k in range(limit):
        if k and k % len(pairs) == 0:
            if not improved_this_pass:
                break
            improved_this_pass = False
        b = pairs[k % len(pairs)]
        removed, evaluated = None, 0
        if b not in tree:
            path = tree_path(tree, *b)
            evaluated = len(path)
            best_z, a = min(
                (incremental_swap_objective(tree, a, b, cached, t, d), a) for a in path
            )
            if best_z < z:
                cached = swap_distances(tree, a, b, cached, t)
                tree = apply_swap(tree, a, b)
                z, removed, improved_this_pass = best_z, a, True
        trace.append(
            TraceRecord(
                iteration=k + 1,
                current_z=z,
                best_z=z,
                elapsed_s=time.perf_counter() - start,
                removed=removed,
                inserted=b if removed else None,
                candidates=evaluated,
            )
        )
    return SolveReport(
        best_tree=tree,
        best_z=objective(tree_pair_distances(tree, t), d),
        initial_z=initial_z,
        trace=trace,
        wall_time=time.perf_counter() - start,
        method="swap",
    )


def heuristic_link_deletion(instance: Instance) -> SolveReport:
    """
    Starting from every candidate link, repeatedly deletes the non-bridge link whose
    removal gives the lowest objective, until a spanning tree remains.
    """
    start = time.perf_counter()
    t, d = instance.t, instance.d
    network = Network.complete(instance.n, instance.allowed)
    if not network.is_connected():
        raise InvalidInstanceError("Candidate links do not connect all stations.")
    c = network.shortest_paths(t)
    z = initial_z = objective(c, d)
    trace = []
    while len(network) > instance.n - 1:
        best = None
        for e in network.edges:
            if e in network.bridges:
                continue
            if t[e] > c[e]:
                # Not on any shortest path, so no distance changes.
                key, c_e = (z, e), c
            else:
                c_e = network.without_edge(e).shortest_paths(t)
                key = (objective(c_e, d), e)
            if best is None or key < best[0]:
                best = (key, c_e)
        (z, e), c = best
        network = network.without_edge(e)
        trace.append(
            TraceRecord(
                iteration=len(trace) + 1,
                current_z=z,
                best_z=z,
                elapsed_s=time.perf_counter() - start,
                removed=normalize(*e),
            )
        )
    logger.info(f"Link deletion removed {len(trace)} links: z={z}")
    tree = network.to_tree()
    return SolveReport(
        best_tree=tree,
        best_z=objective(tree_pair_distances(tree, t), d),
        initial_z=initial_z,
        trace=trace,
        wall_time=time.perf_counter() - start,
        method="delete",
    )

