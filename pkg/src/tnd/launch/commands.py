from typing import Optional
import os
import sys
import time

from omegaconf import OmegaConf
import coma

from .base import (
    BatchConfig,
    ConfigFlag,
    Configs as Cfgs,
    DetourConfig,
    InstanceConfig,
    flag_hooks,
    init,
)

from ..augment import AugmentConfig, augment
from ..baselines import (
    BaselineConfig,
    BaselineMethod,
    BruteConfig,
    CompareConfig,
    brute_force_optimum,
    compare,
    heuristic_link_deletion,
    heuristic_link_swapping,
    mdst,
    mst,
)
from ..core import (
    ConfigError,
    DataError,
    InfeasibleError,
    Instance,
    Network,
    SpanningTree,
    tree_pair_distances,
)
from ..io import (
    PathConfig,
    RunManifest,
    SyntheticConfig,
    ensure_path,
    enum_from_str,
    generate_synthetic,
    get_logger,
    init_logger,
    load_instance,
    load_tree,
    to_dict,
    write_augment,
    write_batch,
    write_compare,
    write_instance,
    write_metrics,
    write_outputs,
)
from ..objective import objective
from ..tabu import InitMethod, SolveReport, SolverConfig, solve, solve_batch


logger = get_logger(__name__)


def as_object(cfg):
    """Converts an omegaconf config to its plain dataclass. Plain objects pass through."""
    return OmegaConf.to_object(cfg) if OmegaConf.is_config(cfg) else cfg


def start_run(paths: PathConfig) -> str:
    """Creates the run directory and points the 'tnd' logger at its tnd.log."""
    init_logger("tnd", ensure_path(os.path.join(paths.run_dir, "tnd.log")))
    return paths.run_dir


def read_instance(paths: PathConfig, instance: InstanceConfig) -> Instance:
    return load_instance(
        paths.nodes_file,
        paths.demand_file,
        distances_path=paths.distances_file or None,
        whitelist_path=paths.whitelist_file or None,
        geo=instance.geo,
        budget=instance.budget,
    )


def read_tree(paths: PathConfig, instance: Instance) -> SpanningTree:
    if not paths.tree_file:
        raise ConfigError("A tree file is needed: set paths::tree_file.")
    tree = load_tree(paths.tree_file, instance)
    if not isinstance(tree, SpanningTree):
        raise DataError(f"'{paths.tree_file}' is not a spanning tree.")
    return tree


def given_tree(paths: PathConfig, instance: Instance, solver: SolverConfig):
    if enum_from_str(InitMethod, solver.init) == InitMethod.GIVEN:
        return read_tree(paths, instance)
    return None


def make_manifest(
    command: str,
    paths: PathConfig,
    instance: Optional[Instance],
    methods: list[str],
    seed: Optional[int] = None,
    **configs,
) -> RunManifest:
    inputs = {
        "nodes": paths.nodes_file,
        "demand": paths.demand_file,
        "distances": paths.distances_file,
        "whitelist": paths.whitelist_file,
        "tree": paths.tree_file,
    }
    return RunManifest(
        command=command,
        inputs={k: v for k, v in inputs.items() if v},
        distance_mode=instance.meta.get("distances", "") if instance else "",
        config={k: to_dict(v) for k, v in configs.items()},
        methods=methods,
        output_dir=paths.run_dir,
        seed=seed,
    )


def tree_report(instance: Instance, tree: SpanningTree, method: str, start: float):
    """Wraps a directly constructed tree as a SolveReport."""
    z = objective(tree_pair_distances(tree, instance.t), instance.d)
    return SolveReport(
        best_tree=tree,
        best_z=z,
        initial_z=z,
        wall_time=time.perf_counter() - start,
        method=method,
    )


def check_budget(report: SolveReport, instance: Instance, tau: Optional[float]):
    tau = tau if tau is not None else instance.budget
    if tau is not None and report.best_z > tau:
        raise InfeasibleError(report.best_z, tau)


def solve_(
    paths: PathConfig,
    instance: InstanceConfig,
    solver: SolverConfig,
    detour: DetourConfig,
):
    paths, instance, solver, detour = map(as_object, (paths, instance, solver, detour))
    run_dir = start_run(paths)
    inst = read_instance(paths, instance)
    initial = given_tree(paths, inst, solver)
    report = solve(inst, solver, initial)
    manifest = make_manifest(
        "solve", paths, inst, ["tabu"], solver.seed, solver=solver, detour=detour
    )
    write_outputs(report, inst, manifest, run_dir, detour.grid, detour.close)
    logger.info(f"Best z={report.best_z}. Outputs in {run_dir}")
    check_budget(report, inst, solver.tau)


def batch_(
    paths: PathConfig,
    instance: InstanceConfig,
    solver: SolverConfig,
    batch: BatchConfig,
):
    paths, instance, solver, batch = map(as_object, (paths, instance, solver, batch))
    run_dir = start_run(paths)
    inst = read_instance(paths, instance)
    initial = given_tree(paths, inst, solver)
    result = solve_batch(inst, solver, batch.runs, initial)
    manifest = make_manifest(
        "batch", paths, inst, ["tabu"], solver.seed, solver=solver, batch=batch
    )
    write_batch(result, inst, manifest, run_dir)
    logger.info(f"Mean z={result.mean_z} over {result.runs} runs. Outputs in {run_dir}")
    check_budget(result.best, inst, solver.tau)


def spanning_command(method: str):
    """Builds the 'mst' or 'mdst' command."""
    build = {"mst": mst, "mdst": mdst}[method]

    def command(paths: PathConfig, instance: InstanceConfig, detour: DetourConfig):
        paths, instance, detour = map(as_object, (paths, instance, detour))
        run_dir = start_run(paths)
        inst = read_instance(paths, instance)
        start = time.perf_counter()
        report = tree_report(inst, build(inst), method, start)
        manifest = make_manifest(method, paths, inst, [method], detour=detour)
        write_outputs(report, inst, manifest, run_dir, detour.grid, detour.close)
        logger.info(f"{method.upper()} z={report.best_z}. Outputs in {run_dir}")

    return command


def brute(
    paths: PathConfig,
    instance: InstanceConfig,
    brute_cfg: BruteConfig,
    detour: DetourConfig,
):
    paths, instance, brute_cfg, detour = map(
        as_object, (paths, instance, brute_cfg, detour)
    )
    run_dir = start_run(paths)
    inst = read_instance(paths, instance)
    start = time.perf_counter()
    tree, _ = brute_force_optimum(inst, brute_cfg.max_n, brute_cfg.force)
    report = tree_report(inst, tree, "brute", start)
    manifest = make_manifest(
        "brute", paths, inst, ["brute"], brute=brute_cfg, detour=detour
    )
    write_outputs(report, inst, manifest, run_dir, detour.grid, detour.close)
    logger.info(f"Optimum z={report.best_z}. Outputs in {run_dir}")


def baseline(
    paths: PathConfig,
    instance: InstanceConfig,
    baseline_cfg: BaselineConfig,
    detour: DetourConfig,
):
    paths, instance, baseline_cfg, detour = map(
        as_object, (paths, instance, baseline_cfg, detour)
    )
    method = enum_from_str(BaselineMethod, baseline_cfg.method)
    run_dir = start_run(paths)
    inst = read_instance(paths, instance)
    if method == BaselineMethod.SWAP:
        initial = read_tree(paths, inst) if paths.tree_file else None
        report = heuristic_link_swapping(inst, baseline_cfg.iterations, initial)
    elif method == BaselineMethod.DELETE:
        report = heuristic_link_deletion(inst)
    else:
        raise ConfigError(f"Unsupported BaselineMethod: {method}")
    manifest = make_manifest(
        "baseline", paths, inst, [report.method], baseline=baseline_cfg, detour=detour
    )
    write_outputs(report, inst, manifest, run_dir, detour.grid, detour.close)
    logger.info(f"{method.value} z={report.best_z}. Outputs in {run_dir}")


def augment_(
    paths: PathConfig,
    instance: InstanceConfig,
    solver: SolverConfig,
    augment_cfg: AugmentConfig,
):
    """Greedy link additions, starting from the tree in paths::tree_file if set, else
    from a tabu search solution."""
    paths, instance, solver, augment_cfg = map(
        as_object, (paths, instance, solver, augment_cfg)
    )
    run_dir = start_run(paths)
    inst = read_instance(paths, instance)
    if paths.tree_file:
        start, methods = load_tree(paths.tree_file, inst), ["given"]
    else:
        start, methods = solve(inst, solver).best_tree, ["tabu"]
    result = augment(start, inst, augment_cfg.alpha, augment_cfg.refresh_every)
    manifest = make_manifest(
        "augment",
        paths,
        inst,
        methods + ["augment"],
        solver.seed,
        solver=solver,
        augment=augment_cfg,
    )
    write_augment(result, inst, manifest, run_dir)
    logger.info(f"Added {result.alpha} links: z={result.z}. Outputs in {run_dir}")


def compare_(
    paths: PathConfig,
    instance: InstanceConfig,
    solver: SolverConfig,
    compare_cfg: CompareConfig,
    brute_cfg: BruteConfig,
):
    paths, instance, solver, compare_cfg, brute_cfg = map(
        as_object, (paths, instance, solver, compare_cfg, brute_cfg)
    )
    run_dir = start_run(paths)
    inst = read_instance(paths, instance)
    report = compare(
        inst,
        compare_cfg.methods,
        solver=solver,
        swap_iterations=compare_cfg.swap_iterations,
        brute=brute_cfg,
    )
    manifest = make_manifest(
        "compare",
        paths,
        inst,
        [r.method for r in report.rows],
        solver.seed,
        solver=solver,
        compare=compare_cfg,
        brute=brute_cfg,
    )
    write_compare(report, manifest, run_dir)
    for row in report.rows:
        logger.info(f"{row.label}: z={row.z}")


def gen(paths: PathConfig, synthetic: SyntheticConfig):
    """Writes a synthetic instance to paths::data_dir."""
    paths, synthetic = as_object(paths), as_object(synthetic)
    start_run(paths)
    inst = generate_synthetic(synthetic.n, synthetic.centers, synthetic.seed, synthetic)
    written = write_instance(inst, paths.data_dir)
    logger.info(f"Synthetic instance with {inst.n} stations: {written}")


def metrics(paths: PathConfig, instance: InstanceConfig, detour: DetourConfig):
    """Evaluates the network in paths::tree_file, which need not be a tree."""
    paths, instance, detour = map(as_object, (paths, instance, detour))
    run_dir = start_run(paths)
    inst = read_instance(paths, instance)
    if not paths.tree_file:
        raise ConfigError("A network file is needed: set paths::tree_file.")
    network = load_tree(paths.tree_file, inst)
    if isinstance(network, SpanningTree):
        network = Network.from_tree(network)
    manifest = make_manifest("metrics", paths, inst, ["metrics"], detour=detour)
    write_metrics(inst, network, manifest, run_dir, detour.grid, detour.close)
    logger.info(f"Metrics written to {run_dir}")


def split_methods(values: list[str]) -> list[str]:
    """Accepts '--methods mst,mdst tabu' in any mix of commas and spaces."""
    return [m.upper() for value in values for m in value.split(",") if m]


# Flags over the 'solver' config, shared by every command that runs the tabu search.
SOLVER_FLAGS = (
    ConfigFlag("--phi", Cfgs.solver, "phi", type=int, help="number of iterations"),
    ConfigFlag("--psi", Cfgs.solver, "psi", type=int, help="links sampled per move"),
    ConfigFlag("--tabu", Cfgs.solver, "tabu_capacity", type=int, help="tabu capacity"),
    ConfigFlag("--seed", Cfgs.solver, "seed", type=int, help="random seed"),
    ConfigFlag("--tau", Cfgs.solver, "tau", type=float, help="distance budget"),
    ConfigFlag(
        "--init",
        Cfgs.solver,
        "init",
        str.upper,
        type=str.lower,
        choices=["mst", "random", "given"],
        help="initial tree",
    ),
)


def register():
    """Registers all known commands with Coma."""
    coma.register("test.launch", lambda: print("Successfully launched."))

    coma.register(
        "solve",
        solve_,
        **flag_hooks(*SOLVER_FLAGS),
        **Cfgs.add(Cfgs.paths, Cfgs.instance, Cfgs.solver, Cfgs.detour),
    )
    coma.register(
        "batch",
        batch_,
        **flag_hooks(
            *SOLVER_FLAGS,
            ConfigFlag("--runs", Cfgs.batch, "runs", type=int, help="number of runs"),
        ),
        **Cfgs.add(Cfgs.paths, Cfgs.instance, Cfgs.solver, Cfgs.batch),
    )
    for method in ("mst", "mdst"):
        coma.register(
            method,
            spanning_command(method),
            **Cfgs.add(Cfgs.paths, Cfgs.instance, Cfgs.detour),
        )

    coma.register(
        "brute",
        brute,
        **flag_hooks(
            ConfigFlag(
                "--force",
                Cfgs.brute,
                "force",
                action="store_true",
                help="enumerate beyond the station limit",
            )
        ),
        **Cfgs.add(Cfgs.paths, Cfgs.instance, Cfgs.brute, Cfgs.detour),
    )
    # The method word, when given, must come before any 'id::field=value' override.
    coma.register(
        "baseline",
        baseline,
        **flag_hooks(
            ConfigFlag(
                "method",
                Cfgs.baseline,
                "method",
                str.upper,
                nargs="?",
                type=str.lower,
                choices=["swap", "delete"],
                help="link swapping or link deletion",
            )
        ),
        **Cfgs.add(Cfgs.paths, Cfgs.instance, Cfgs.baseline, Cfgs.detour),
    )
    coma.register(
        "augment",
        augment_,
        **flag_hooks(
            *SOLVER_FLAGS,
            ConfigFlag("--alpha", Cfgs.augment, "alpha", type=int, help="links to add"),
        ),
        **Cfgs.add(Cfgs.paths, Cfgs.instance, Cfgs.solver, Cfgs.augment),
    )
    coma.register(
        "compare",
        compare_,
        **flag_hooks(
            *SOLVER_FLAGS,
            ConfigFlag(
                "--methods",
                Cfgs.compare,
                "methods",
                split_methods,
                nargs="+",
                help="methods to compare, e.g. mst,mdst,tabu",
            ),
        ),
        **Cfgs.add(Cfgs.paths, Cfgs.instance, Cfgs.solver, Cfgs.compare, Cfgs.brute),
    )
    coma.register(
        "gen",
        gen,
        **flag_hooks(
            ConfigFlag("--n", Cfgs.synthetic, "n", type=int, help="station count"),
            ConfigFlag("--centers", Cfgs.synthetic, "centers", type=int, help="hubs"),
            ConfigFlag("--seed", Cfgs.synthetic, "seed", type=int, help="random seed"),
        ),
        **Cfgs.add(Cfgs.paths, Cfgs.synthetic),
    )
    coma.register(
        "metrics",
        metrics,
        **Cfgs.add(Cfgs.paths, Cfgs.instance, Cfgs.detour),
    )


def exit_code(exc: BaseException) -> int:
    """0 success, 1 usage or config error, 2 data error, 3 budget violated."""
    if isinstance(exc, InfeasibleError):
        return 3
    if isinstance(exc, (DataError, FileNotFoundError)):
        return 2
    return 1


def launch():
    """Launches the application with Coma."""
    init()
    register()
    try:
        coma.wake()
    except AttributeError:
        if len(sys.argv) == 1:
            os.chdir(os.environ["DEFAULT_CONFIG_DIR"])
            coma.wake(args=[os.environ["DEFAULT_COMMAND"]])
        else:
            raise
    except SystemExit as e:
        # argparse reports usage errors with status 2.
        if e.code == 2:
            sys.exit(1)
        raise
    except Exception as e:
        get_logger("tnd").error(f"{type(e).__name__}: {e}")
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(exit_code(e))
