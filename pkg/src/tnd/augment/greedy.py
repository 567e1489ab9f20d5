from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

import numpy as np

from ..core import ConfigError, Edge, Instance, Network, SpanningTree, normalize
from ..io.logging import get_logger
from ..objective import ObjectiveValue, objective


logger = get_logger(__name__)


@dataclass
class AugmentConfig:
    # Number of links to add to the starting tree.
    alpha: int = 10

    # Recompute all shortest paths from scratch every this many additions.
    refresh_every: int = 25


@dataclass
class AugmentedNetwork:
    # The network augmentation started from.
    base: Network

    # Added links, in order.
    added: list[Edge] = field(default_factory=list)

    # Objective before any addition, then after each one.
    z_trace: list[ObjectiveValue] = field(default_factory=list)

    # All-pairs shortest path lengths of the final network.
    distances: Optional[np.ndarray] = None

    @property
    def alpha(self) -> int:
        return len(self.added)

    @property
    def network(self) -> Network:
        return Network(self.base.n, self.base.edges + tuple(self.added))

    @property
    def z(self) -> ObjectiveValue:
        return self.z_trace[-1]

    def step_networks(self) -> Iterator[Network]:
        """The base network, then the network after each addition."""
        for k in range(len(self.added) + 1):
            yield Network(self.base.n, self.base.edges + tuple(self.added[:k]))


def add_edge_distances(c: np.ndarray, e, t_e: float) -> np.ndarray:
    """Shortest path lengths after adding link e (length t_e) to a network with lengths c."""
    if t_e < 0:
        raise ValueError(f"Link length cannot be negative: {t_e}")
    i, j = normalize(*e)
    via_ij = c[:, i][:, None] + t_e + c[j, :][None, :]
    via_ji = c[:, j][:, None] + t_e + c[i, :][None, :]
    return np.minimum(c, np.minimum(via_ij, via_ji))


def candidate_z(c: np.ndarray, e, t_e: float, d: np.ndarray) -> ObjectiveValue:
    """Objective after adding e, given exact all-pairs distances c of the current network."""
    return objective(add_edge_distances(c, e, t_e), d)


def augment(
    graph: Union[SpanningTree, Network, AugmentedNetwork],
    instance: Instance,
    alpha: int,
    refresh_every: int = 25,
) -> AugmentedNetwork:
    """
    Greedily adds the candidate link that lowers the objective most, 'alpha' times.
    Ties go to the lexicographically smallest link. Continuing an AugmentedNetwork
    extends its additions.
    """
    if alpha < 0:
        raise ConfigError(f"'alpha' cannot be negative: {alpha}")
    if refresh_every < 1:
        raise ConfigError(f"'refresh_every' must be at least 1: {refresh_every}")
    t, d = instance.t, instance.d
    if isinstance(graph, AugmentedNetwork):
        result = AugmentedNetwork(graph.base, list(graph.added), list(graph.z_trace))
        network = graph.network
    else:
        network = Network.from_tree(graph) if isinstance(graph, SpanningTree) else graph
        result = AugmentedNetwork(network)
    c = network.shortest_paths(t)
    z = objective(c, d)
    if not result.z_trace:
        result.z_trace.append(z)

    candidates = network.non_edges(instance.allowed)
    if alpha > len(candidates):
        logger.warning(
            f"'alpha' of {alpha} exceeds the {len(candidates)} remaining links. Clamping."
        )
        alpha = len(candidates)

    for step in range(1, alpha + 1):
        best = None
        for e in candidates:
            if t[e] >= c[e]:
                # A link no shorter than the current path changes nothing.
                key = (z, e)
            else:
                key = (candidate_z(c, e, t[e], d), e)
            if best is None or key < best:
                best = key
        _, e = best
        candidates.remove(e)
        network = network.with_edge(e)
        if step % refresh_every == 0:
            c = network.shortest_paths(t)
        else:
            c = add_edge_distances(c, e, t[e])
        z = objective(c, d)
        result.added.append(e)
        result.z_trace.append(z)
        logger.debug(f"Added link {e}: z={z}")
    result.distances = c
    return result


def lower_bound_gap_trace(network: AugmentedNetwork, td: float) -> list[float]:
    """Lower bound over objective for each step. Defined as 1 where z is 0."""
    return [td / z if z > 0 else 1.0 for z in network.z_trace]
