from dataclasses import asdict, dataclass, field
from typing import TYPE_CHECKING, Any, Optional, Sequence
import hashlib
import json
import os

import numpy as np
import pandas as pd

from ..core import DataError, Instance, Network
from ..objective import detour_profile, link_flows, network_objective
from ..objective import demand_weighted_lower_bound
from .data import enum_dict_factory, file_sha256, load_dataclass_json, load_json
from .data import save_csv, save_json, to_dict

if TYPE_CHECKING:
    from ..augment import AugmentedNetwork
    from ..baselines import CompareReport
    from ..tabu import BatchReport, SolveReport


@dataclass
class RunManifest:
    """Everything that determines a run. Echoed into each summary it produced."""

    command: str

    # Input file paths by role (nodes, demand, distances, whitelist, tree).
    inputs: dict[str, str] = field(default_factory=dict)

    # How link distances were obtained: file, euclidean, haversine or synthetic.
    distance_mode: str = ""

    # Config values by config id.
    config: dict[str, Any] = field(default_factory=dict)

    methods: list[str] = field(default_factory=list)
    output_dir: str = ""
    seed: Optional[int] = None


def manifest_hash(manifest: RunManifest) -> str:
    """sha256 of the canonical JSON form of the manifest."""
    data = asdict(manifest, dict_factory=enum_dict_factory)
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def load_manifest(file_path: str) -> RunManifest:
    """Loads a manifest.json and checks it against its recorded hash."""
    manifest = load_dataclass_json(file_path, RunManifest)
    recorded = load_json(file_path).get("hash")
    if recorded != manifest_hash(manifest):
        raise DataError(f"'{file_path}' does not match its recorded hash.")
    return manifest


def _edge_rows(instance: Instance, edges: Sequence[tuple[int, int]]) -> list[dict]:
    # Station ids in "i,j" so the file loads back as a tree or network.
    return [
        {
            "i": instance.stations[i].source_id or str(i),
            "j": instance.stations[j].source_id or str(j),
            "name_i": instance.label(i),
            "name_j": instance.label(j),
            "km": float(instance.t[i, j]),
        }
        for i, j in edges
    ]


def edges_geojson(instance: Instance, network: Network, flows=None) -> dict:
    """
    One LineString per link, [lon, lat] ordered. Properties carry the link length,
    the direct demand between its ends and, for trees, the flow in both directions.
    """
    features = []
    for (i, j), row in zip(network.edges, _edge_rows(instance, network.edges)):
        a, b = instance.stations[i], instance.stations[j]
        properties = dict(row, demand=float(instance.d[i, j] + instance.d[j, i]))
        if flows is not None:
            properties["flow"] = flows[(i, j)] + flows[(j, i)]
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [[a.y, a.x], [b.y, b.x]],
                },
                "properties": properties,
            }
        )
    return {"type": "FeatureCollection", "features": features}


def _finish(
    output_dir: str,
    manifest: RunManifest,
    summary: dict[str, Any],
    files: list[str],
) -> dict[str, str]:
    # manifest.json and the hashes of the deterministic files go into summary.json.
    manifest_file = os.path.join(output_dir, "manifest.json")
    digest = manifest_hash(manifest)
    manifest_data = dict(to_dict(manifest), hash=digest)
    save_json(manifest_file, manifest_data, indent=4, sort_keys=True)
    paths = {os.path.basename(f): f for f in files + [manifest_file]}
    summary = dict(
        summary,
        manifest_hash=digest,
        files={name: file_sha256(path) for name, path in sorted(paths.items())},
    )
    paths["summary.json"] = os.path.join(output_dir, "summary.json")
    save_json(paths["summary.json"], summary, indent=4, sort_keys=True)
    return paths


def trace_frame(report: "SolveReport") -> pd.DataFrame:
    return pd.DataFrame(
        {
            "iteration": [r.iteration for r in report.trace],
            "current_z": [r.current_z for r in report.trace],
            "best_z": [r.best_z for r in report.trace],
            "elapsed_s": [r.elapsed_s for r in report.trace],
            "tabu_hit": [int(r.tabu_hit) for r in report.trace],
        },
        columns=["iteration", "current_z", "best_z", "elapsed_s", "tabu_hit"],
    )


def write_outputs(
    report: "SolveReport",
    instance: Instance,
    manifest: RunManifest,
    output_dir: str,
    grid: Optional[Sequence[float]] = None,
    close: bool = True,
) -> dict[str, str]:
    """
    Writes the result of one solve: summary.json, manifest.json, trace.csv,
    detour.csv, tree_edges.csv, flows.csv and, for geographic instances,
    edges.geojson. Returns the written paths by file name.
    """
    tree = report.best_tree
    network = Network.from_tree(tree)
    flows = link_flows(tree, instance.d)
    c = network.shortest_paths(instance.t)
    detour = detour_profile(c, instance.t, instance.d, grid, close)

    files = {
        "tree_edges.csv": pd.DataFrame(_edge_rows(instance, tree.edges)),
        "flows.csv": flows.to_frame(),
        "detour.csv": detour.to_frame(),
    }
    written = []
    for name, df in files.items():
        written.append(os.path.join(output_dir, name))
        save_csv(written[-1], df)
    if instance.geo:
        written.append(os.path.join(output_dir, "edges.geojson"))
        save_json(written[-1], edges_geojson(instance, network, flows), indent=2)

    # trace.csv holds timings, so it is left out of the hashed files.
    trace_file = os.path.join(output_dir, "trace.csv")
    save_csv(trace_file, trace_frame(report))

    summary = {
        "method": report.method,
        "best_z": report.best_z,
        "initial_z": report.initial_z,
        "lower_bound": demand_weighted_lower_bound(instance.d, instance.t),
        "feasible": report.feasible,
        "iterations": report.iterations,
        "edges": _edge_rows(instance, tree.edges),
        "length": tree.total_length(instance.t),
        "config": to_dict(report.config) if report.config is not None else None,
        "wall_time": report.wall_time,
        "excluded_detour_pairs": detour.excluded_pairs,
    }
    paths = _finish(output_dir, manifest, summary, written)
    paths["trace.csv"] = trace_file
    return paths


def write_batch(
    batch: "BatchReport",
    instance: Instance,
    manifest: RunManifest,
    output_dir: str,
) -> dict[str, str]:
    """Writes runs.csv (one row per seed) and the outputs of the best run."""
    paths = write_outputs(batch.best, instance, manifest, output_dir)
    runs_file = os.path.join(output_dir, "runs.csv")
    save_csv(
        runs_file,
        pd.DataFrame(
            {
                "seed": batch.seeds,
                "best_z": batch.best_zs,
                "wall_time": batch.wall_times,
            }
        ),
    )
    summary_file = paths["summary.json"]
    summary = load_json(summary_file)
    summary["batch"] = {
        "runs": batch.runs,
        "mean_z": batch.mean_z,
        "min_z": batch.min_z,
        "max_z": batch.max_z,
        "mean_wall_time": batch.mean_wall_time,
    }
    save_json(summary_file, summary, indent=4, sort_keys=True)
    paths["runs.csv"] = runs_file
    return paths


def write_compare(
    report: "CompareReport",
    manifest: RunManifest,
    output_dir: str,
) -> dict[str, str]:
    """Writes compare.csv (one row per method) and compare_deltas.csv."""
    compare_file = os.path.join(output_dir, "compare.csv")
    deltas_file = os.path.join(output_dir, "compare_deltas.csv")
    save_csv(compare_file, report.to_frame().drop(columns=["wall_time"]))
    save_csv(deltas_file, report.deltas_frame())
    summary = {
        "rows": [
            {"method": r.method, "z": r.z, "wall_time": r.wall_time, "edges": r.edges}
            for r in report.rows
        ],
    }
    return _finish(output_dir, manifest, summary, [compare_file, deltas_file])


def write_augment(
    result: "AugmentedNetwork",
    instance: Instance,
    manifest: RunManifest,
    output_dir: str,
) -> dict[str, str]:
    """Writes augment.csv (one row per step, step 0 is the starting network)."""
    from ..augment import lower_bound_gap_trace

    td = demand_weighted_lower_bound(instance.d, instance.t)
    ratios = lower_bound_gap_trace(result, td)
    edges = [(None, None)] + result.added
    augment_file = os.path.join(output_dir, "augment.csv")
    save_csv(
        augment_file,
        pd.DataFrame(
            {
                "step": np.arange(len(result.z_trace)),
                "edge_i": pd.array([e[0] for e in edges], dtype="Int64"),
                "edge_j": pd.array([e[1] for e in edges], dtype="Int64"),
                "z": result.z_trace,
                "lower_bound_ratio": ratios,
            }
        ),
    )
    edges_file = os.path.join(output_dir, "network_edges.csv")
    save_csv(edges_file, pd.DataFrame(_edge_rows(instance, result.network.edges)))
    written = [augment_file, edges_file]
    if instance.geo:
        written.append(os.path.join(output_dir, "edges.geojson"))
        save_json(written[-1], edges_geojson(instance, result.network), indent=2)
    summary = {
        "alpha": result.alpha,
        "z": result.z,
        "lower_bound": td,
        "added": result.added,
    }
    return _finish(output_dir, manifest, summary, written)


@dataclass
class NetworkMetrics:
    z: float
    lower_bound: float
    # Lower bound over objective (1 when the objective is 0).
    ratio: float
    length: float
    links: int
    is_tree: bool
    # Highest-degree stations as (label, degree), busiest first.
    hubs: list[tuple[str, int]]


def network_metrics(
    instance: Instance,
    network: Network,
    top: int = 5,
) -> NetworkMetrics:
    z = network_objective(network, instance.t, instance.d)
    td = demand_weighted_lower_bound(instance.d, instance.t)
    degrees = network.degrees()
    order = sorted(range(instance.n), key=lambda k: (-degrees[k], k))[:top]
    return NetworkMetrics(
        z=z,
        lower_bound=td,
        ratio=td / z if z > 0 else 1.0,
        length=network.total_length(instance.t),
        links=len(network),
        is_tree=network.is_tree(),
        hubs=[(instance.label(k), int(degrees[k])) for k in order],
    )


def write_metrics(
    instance: Instance,
    network: Network,
    manifest: RunManifest,
    output_dir: str,
    grid: Optional[Sequence[float]] = None,
    close: bool = True,
) -> dict[str, str]:
    """
    Evaluates an operated network: metrics go to summary.json, next to detour.csv
    and, for trees, flows.csv.
    """
    metrics = network_metrics(instance, network)
    c = network.shortest_paths(instance.t)
    detour_file = os.path.join(output_dir, "detour.csv")
    detour = detour_profile(c, instance.t, instance.d, grid, close)
    save_csv(detour_file, detour.to_frame())
    written = [detour_file]
    if metrics.is_tree:
        written.append(os.path.join(output_dir, "flows.csv"))
        flows = link_flows(network.to_tree(), instance.d)
        save_csv(written[-1], flows.to_frame())
    return _finish(output_dir, manifest, to_dict(metrics), written)
