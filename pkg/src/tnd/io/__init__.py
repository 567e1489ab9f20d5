from .data import (
    PathConfig,
    EnumSubType,
    DEFAULT_CONFIG,
    enum_dict_factory,
    enum_from_str,
    ensure_path,
    file_sha256,
    load_csv,
    load_dataclass_json,
    load_json,
    save_csv,
    save_json,
    to_dict,
)
from .logging import init_logger, get_logger
from .instance import (
    EARTH_RADIUS_KM,
    derive_distances,
    haversine,
    load_demand,
    load_distances,
    load_instance,
    load_stations,
    load_tree,
    load_whitelist,
    write_instance,
)
from .outputs import (
    NetworkMetrics,
    RunManifest,
    edges_geojson,
    load_manifest,
    manifest_hash,
    network_metrics,
    trace_frame,
    write_augment,
    write_batch,
    write_compare,
    write_metrics,
    write_outputs,
)
from .synthetic import SyntheticConfig, generate_synthetic
