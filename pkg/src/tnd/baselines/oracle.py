from dataclasses import dataclass

from ..core import InvalidInstanceError, Instance, SizeGuardError, SpanningTree
from ..core import iter_trees, tree_pair_distances
from ..io.logging import get_logger
from ..objective import ObjectiveValue, objective


logger = get_logger(__name__)


@dataclass
class BruteConfig:
    # Largest instance enumerated without 'force' (n^(n-2) trees).
    max_n: int = 8

    # Enumerate anyway beyond 'max_n'.
    force: bool = False


def brute_force_optimum(
    instance: Instance,
    max_n: int = 8,
    force: bool = False,
) -> tuple[SpanningTree, ObjectiveValue]:
    """
    Exact optimum over every labeled tree. Ties go to the lexicographically smallest
    edge list. Trees using links outside the instance whitelist are skipped.
    """
    n = instance.n
    if n > max_n and not force:
        raise SizeGuardError(
            f"Enumerating {n}^{n - 2} trees on {n} stations exceeds the limit of "
            f"{max_n} stations. Use force to override."
        )
    logger.info(f"Enumerating {n ** max(0, n - 2)} trees on {n} stations.")
    best_key, best_tree = None, None
    for tree in iter_trees(n):
        if not all(map(instance.is_allowed, tree.edges)):
            continue
        key = (objective(tree_pair_distances(tree, instance.t), instance.d), tree.edges)
        if best_key is None or key < best_key:
            best_key, best_tree = key, tree
    if best_tree is None:
        raise InvalidInstanceError("Candidate links do not connect all stations.")
    return best_tree, best_key[0]
