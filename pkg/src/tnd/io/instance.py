from typing import Optional, Union
import os

from scipy.spatial.distance import cdist
import numpy as np
import pandas as pd

from ..core import DataError, Instance, InvalidInstanceError, Network, SpanningTree
from ..core import Station
from .data import load_csv, save_csv
from .logging import get_logger


logger = get_logger(__name__)

# Mean Earth radius in km.
EARTH_RADIUS_KM = 6371.0088


def haversine(lat_lon: np.ndarray) -> np.ndarray:
    """Great-circle distances (km) between all pairs of (lat, lon) points in degrees."""
    lat, lon = np.radians(lat_lon[:, 0]), np.radians(lat_lon[:, 1])
    dlat = lat[:, None] - lat[None, :]
    dlon = lon[:, None] - lon[None, :]
    cos_cos = np.cos(lat[:, None]) * np.cos(lat[None, :])
    h = np.sin(dlat / 2) ** 2 + cos_cos * np.sin(dlon / 2) ** 2
    distances = 2 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(np.clip(h, 0.0, 1.0)))
    np.fill_diagonal(distances, 0.0)
    return distances


def derive_distances(coords: np.ndarray, geo: bool) -> np.ndarray:
    """Euclidean distances for planar coordinates, great-circle for geographic ones."""
    if geo:
        return haversine(coords)
    return cdist(coords, coords)


def _row(k: int) -> int:
    # DataError rows count data lines from 1, header excluded.
    return int(k) + 1


def _require(df: pd.DataFrame, columns: list[str], path: str):
    missing = [c for c in columns if c not in df.columns]
    if missing:
        raise DataError(f"'{path}' is missing columns {missing}")


def _numeric(df: pd.DataFrame, column: str, path: str) -> np.ndarray:
    values = pd.to_numeric(df[column], errors="coerce").to_numpy(dtype=float)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        value = df[column].iloc[bad[0]]
        raise DataError(f"Bad '{column}' in '{path}': {value}", _row(bad[0]))
    return values


def _indices(
    df: pd.DataFrame,
    column: str,
    index: dict[str, int],
    path: str,
) -> np.ndarray:
    mapped = df[column].astype(str).str.strip().map(index)
    unknown = np.flatnonzero(mapped.isna().to_numpy())
    if unknown.size:
        value = df[column].iloc[unknown[0]]
        raise DataError(f"Unknown station id in '{path}': {value}", _row(unknown[0]))
    return mapped.to_numpy(dtype=int)


def load_stations(nodes_path: str, geo: bool = False) -> tuple[Station, ...]:
    """Stations re-indexed densely in file order. The file ids are kept as 'source_id'."""
    nodes = load_csv(nodes_path, dtype={"id": str, "name": str})
    x_col, y_col = ("lat", "lon") if geo else ("x", "y")
    _require(nodes, ["id", x_col, y_col], nodes_path)
    ids = nodes["id"].astype(str).str.strip()
    duplicated = np.flatnonzero(ids.duplicated().to_numpy())
    if duplicated.size:
        k = duplicated[0]
        raise DataError(f"Duplicate station id: {ids.iloc[k]}", _row(k))
    names = nodes["name"].fillna("") if "name" in nodes.columns else ids
    xs, ys = _numeric(nodes, x_col, nodes_path), _numeric(nodes, y_col, nodes_path)
    return tuple(
        Station(k, ids.iloc[k], str(names.iloc[k]), float(xs[k]), float(ys[k]))
        for k in range(len(nodes))
    )


def load_demand(demand_path: str, index: dict[str, int]) -> np.ndarray:
    """Directed demand matrix. Unlisted pairs have no demand and repeated rows add up."""
    demand = load_csv(demand_path, dtype={"origin": str, "destination": str})
    _require(demand, ["origin", "destination", "trips"], demand_path)
    i = _indices(demand, "origin", index, demand_path)
    j = _indices(demand, "destination", index, demand_path)
    trips = _numeric(demand, "trips", demand_path)
    negative = np.flatnonzero(trips < 0)
    if negative.size:
        k = negative[0]
        raise DataError(f"Negative trips: {trips[k]}", _row(k))
    loops = np.flatnonzero(i == j)
    if loops.size:
        k = loops[0]
        origin = demand["origin"].iloc[k]
        raise DataError(f"Demand from a station to itself: {origin}", _row(k))
    d = np.zeros((len(index), len(index)))
    np.add.at(d, (i, j), trips)
    return d


def load_distances(
    distances_path: str,
    index: dict[str, int],
    fallback: np.ndarray,
) -> np.ndarray:
    """Link distances from file. Pairs the file does not list come from 'fallback'."""
    rows = load_csv(distances_path, dtype={"i": str, "j": str})
    _require(rows, ["i", "j", "km"], distances_path)
    i = _indices(rows, "i", index, distances_path)
    j = _indices(rows, "j", index, distances_path)
    km = _numeric(rows, "km", distances_path)
    n = len(index)
    t = np.full((n, n), np.nan)
    np.fill_diagonal(t, 0.0)
    for k in range(len(rows)):
        if km[k] < 0:
            raise DataError(f"Negative distance: {km[k]}", _row(k))
        if i[k] == j[k]:
            if km[k] != 0:
                raise DataError(f"Non-zero distance to itself: {km[k]}", _row(k))
            continue
        known = t[i[k], j[k]]
        if not np.isnan(known) and known != km[k]:
            raise DataError(f"Conflicting distances: {known} and {km[k]}", _row(k))
        t[i[k], j[k]] = t[j[k], i[k]] = km[k]
    missing = np.isnan(t)
    if missing.any():
        logger.warning(f"{missing.sum() // 2} station pairs have no distance. Deriving.")
        t[missing] = fallback[missing]
    return t


def load_whitelist(whitelist_path: str, index: dict[str, int]) -> np.ndarray:
    rows = load_csv(whitelist_path, dtype={"i": str, "j": str})
    _require(rows, ["i", "j"], whitelist_path)
    i = _indices(rows, "i", index, whitelist_path)
    j = _indices(rows, "j", index, whitelist_path)
    allowed = np.zeros((len(index), len(index)), dtype=bool)
    allowed[i, j] = allowed[j, i] = True
    np.fill_diagonal(allowed, False)
    return allowed


def load_instance(
    nodes_path: str,
    demand_path: str,
    distances_path: Optional[str] = None,
    whitelist_path: Optional[str] = None,
    geo: bool = False,
    budget: Optional[float] = None,
) -> Instance:
    for path in (nodes_path, demand_path, distances_path, whitelist_path):
        if path and not os.path.exists(path):
            raise FileNotFoundError(f"Missing input file: {path}")
    stations = load_stations(nodes_path, geo)
    if len(stations) < 2:
        raise InvalidInstanceError(
            f"An instance needs at least 2 stations: {len(stations)}"
        )
    index = {s.source_id: s.index for s in stations}
    d = load_demand(demand_path, index)
    derived = derive_distances(np.array([(s.x, s.y) for s in stations]), geo)
    if distances_path:
        t, mode = load_distances(distances_path, index, derived), "file"
    else:
        t, mode = derived, "haversine" if geo else "euclidean"
    allowed = load_whitelist(whitelist_path, index) if whitelist_path else None
    logger.info(f"Loaded {len(stations)} stations, {d.sum()} trips, {mode} distances.")
    return Instance(
        stations,
        t,
        d,
        budget=budget,
        allowed=allowed,
        geo=geo,
        meta={"nodes": nodes_path, "demand": demand_path, "distances": mode},
    )


def write_instance(instance: Instance, output_dir: str) -> dict[str, str]:
    """
    Writes nodes.csv, demand.csv and distances.csv in the ingestion schema, with full
    float precision so that loading them back gives the same instance.
    """
    x_col, y_col = ("lat", "lon") if instance.geo else ("x", "y")
    nodes = pd.DataFrame(
        {
            "id": [s.source_id or str(s.index) for s in instance.stations],
            "name": [s.name for s in instance.stations],
            x_col: [s.x for s in instance.stations],
            y_col: [s.y for s in instance.stations],
        }
    )
    ids = nodes["id"].to_numpy()
    frames = {}
    i, j = np.nonzero(instance.d)
    frames["demand"] = pd.DataFrame(
        {"origin": ids[i], "destination": ids[j], "trips": instance.d[i, j]}
    )
    i, j = np.triu_indices(instance.n, k=1)
    frames["distances"] = pd.DataFrame(
        {"i": ids[i], "j": ids[j], "km": instance.t[i, j]}
    )
    if instance.allowed is not None:
        i, j = np.nonzero(np.triu(instance.allowed))
        frames["whitelist"] = pd.DataFrame({"i": ids[i], "j": ids[j]})

    paths = {"nodes": os.path.join(output_dir, "nodes.csv")}
    save_csv(paths["nodes"], nodes, float_format=None)
    for name, df in frames.items():
        paths[name] = os.path.join(output_dir, f"{name}.csv")
        save_csv(paths[name], df, float_format=None)
    return paths


def load_tree(path: str, instance: Instance) -> Union[SpanningTree, Network]:
    """
    Links 'i,j' by station id. Returns a SpanningTree when they form one, else a
    Network.
    """
    if not os.path.exists(path):
        raise FileNotFoundError(f"Missing input file: {path}")
    rows = load_csv(path, dtype={"i": str, "j": str})
    _require(rows, ["i", "j"], path)
    index = {s.source_id: s.index for s in instance.stations}
    i, j = _indices(rows, "i", index, path), _indices(rows, "j", index, path)
    loops = np.flatnonzero(i == j)
    if loops.size:
        k = loops[0]
        raise DataError(f"Link from a station to itself: {rows['i'].iloc[k]}", _row(k))
    network = Network(instance.n, tuple(zip(i.tolist(), j.tolist())))
    return network.to_tree() if network.is_tree() else network
