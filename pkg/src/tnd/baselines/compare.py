from dataclasses import dataclass, field
from enum import Enum
from itertools import permutations
from typing import Optional, Sequence, Union
import time

import pandas as pd

from ..core import Edge, Instance, SpanningTree, tree_pair_distances
from ..io.logging import get_logger
from ..objective import ObjectiveValue, objective
from ..tabu import SolverConfig, solve
from .heuristics import heuristic_link_deletion, heuristic_link_swapping
from .oracle import BruteConfig, brute_force_optimum
from .spanning import mdst, mst


logger = get_logger(__name__)


class Method(Enum):
    MST = "MST"
    MDST = "MDST"
    TABU = "TABU"
    SWAP = "SWAP"
    DELETE = "DELETE"
    BRUTE = "BRUTE"

    @property
    def label(self) -> str:
        # Link swapping and deletion only follow the published iteration structure.
        if self in (Method.SWAP, Method.DELETE):
            return f"{self.value.lower()} (reimplemented)"
        return self.value.lower()


@dataclass
class CompareConfig:
    # Methods to run, in report order.
    methods: list[Method] = field(
        default_factory=lambda: [Method.MST, Method.MDST, Method.TABU],
    )

    # Iteration cap for link swapping. None means one pass over all station pairs.
    swap_iterations: Optional[int] = None


@dataclass
class CompareRow:
    method: str
    label: str
    z: ObjectiveValue
    wall_time: float
    iterations: int
    edges: list[Edge]

    # Sum of link distances and the largest station degree of the tree.
    length: float
    max_degree: int


@dataclass
class Delta:
    """Relative change (z_b - z_a) / z_a of method b against method a."""

    method_a: str
    method_b: str
    delta: Optional[float]


@dataclass
class CompareReport:
    rows: list[CompareRow] = field(default_factory=list)
    deltas: list[Delta] = field(default_factory=list)

    def row(self, method: Union[Method, str]) -> CompareRow:
        name = method.value if isinstance(method, Method) else method.upper()
        return next(r for r in self.rows if r.method == name)

    def delta(self, a: Union[Method, str], b: Union[Method, str]) -> Optional[float]:
        a, b = self.row(a).method, self.row(b).method
        return next(x.delta for x in self.deltas if (x.method_a, x.method_b) == (a, b))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {
                    "method": r.method,
                    "label": r.label,
                    "z": r.z,
                    "wall_time": r.wall_time,
                    "iterations": r.iterations,
                    "length": r.length,
                    "max_degree": r.max_degree,
                }
                for r in self.rows
            ]
        )

    def deltas_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(x.method_a, x.method_b, x.delta) for x in self.deltas],
            columns=["method_a", "method_b", "delta"],
        )


def relative_delta(z_a: float, z_b: float) -> Optional[float]:
    return None if z_a == 0 else (z_b - z_a) / z_a


def _make_row(
    instance: Instance,
    method: Method,
    tree: SpanningTree,
    wall_time: float,
    iterations: int,
) -> CompareRow:
    return CompareRow(
        method=method.value,
        label=method.label,
        z=objective(tree_pair_distances(tree, instance.t), instance.d),
        wall_time=wall_time,
        iterations=iterations,
        edges=list(tree.edges),
        length=tree.total_length(instance.t),
        max_degree=int(tree.degrees().max()),
    )


def compare(
    instance: Instance,
    methods: Sequence[Method],
    solver: Optional[SolverConfig] = None,
    swap_iterations: Optional[int] = None,
    brute: Optional[BruteConfig] = None,
) -> CompareReport:
    """Runs each method on 'instance' and reports objectives and pairwise deltas."""
    solver = solver or SolverConfig()
    brute = brute or BruteConfig()
    report = CompareReport()
    for method in methods:
        method = Method[method.upper()] if isinstance(method, str) else method
        start = time.perf_counter()
        iterations = 0
        if method == Method.MST:
            tree = mst(instance)
        elif method == Method.MDST:
            tree = mdst(instance)
        elif method == Method.TABU:
            result = solve(instance, solver)
            tree, iterations = result.best_tree, result.iterations
        elif method == Method.SWAP:
            result = heuristic_link_swapping(instance, swap_iterations)
            tree, iterations = result.best_tree, result.iterations
        elif method == Method.DELETE:
            result = heuristic_link_deletion(instance)
            tree, iterations = result.best_tree, result.iterations
        elif method == Method.BRUTE:
            tree, _ = brute_force_optimum(instance, brute.max_n, brute.force)
        else:
            raise ValueError(f"Unsupported Method: {method}")
        wall_time = time.perf_counter() - start
        report.rows.append(_make_row(instance, method, tree, wall_time, iterations))
        logger.info(f"{method.label}: z={report.rows[-1].z} in {wall_time:.3f}s")

    for a, b in permutations(report.rows, 2):
        report.deltas.append(Delta(a.method, b.method, relative_delta(a.z, b.z)))
    return report
