from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from ..core import SpanningTree, split_tree


# A directed link (from station, to station).
Arc = tuple[int, int]


@dataclass
class LinkFlows:
    """Passengers per day riding each tree link, per direction."""

    x: dict[Arc, float] = field(default_factory=dict)

    def __getitem__(self, arc: Arc) -> float:
        return self.x.get(arc, 0.0)

    def total_distance(self, t: np.ndarray) -> float:
        """Sum of t * x over the links. Equals the tree objective."""
        return float(sum(t[i, j] * flow for (i, j), flow in self.x.items()))

    def to_frame(self) -> pd.DataFrame:
        rows = [(i, j, flow) for (i, j), flow in sorted(self.x.items())]
        return pd.DataFrame(rows, columns=["origin", "destination", "flow"])


def link_flows(tree: SpanningTree, d: np.ndarray) -> LinkFlows:
    """
    Each trip has one tree path, so the flow on i->j is all demand from the side of
    i to the side of j.
    """
    d = np.asarray(d, dtype=float)
    flows = LinkFlows()
    for i, j in tree.edges:
        c1, c2 = split_tree(tree, (i, j))
        side_i, side_j = (c1, c2) if i in c1 else (c2, c1)
        flows.x[(i, j)] = float(d[np.ix_(side_i.array, side_j.array)].sum())
        flows.x[(j, i)] = float(d[np.ix_(side_j.array, side_i.array)].sum())
    return flows
