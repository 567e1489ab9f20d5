from pathlib import Path
import json
import shutil
import subprocess
import sys

import pandas as pd
import pytest

from tnd.augment import AugmentConfig
from tnd.baselines import BaselineConfig, BruteConfig, CompareConfig, Method
from tnd.core import (
    ConfigError,
    DataError,
    InfeasibleError,
    InvalidInstanceError,
    SizeGuardError,
)
from tnd.io import PathConfig, SyntheticConfig, load_manifest, manifest_hash
from tnd.launch import exit_code
from tnd.launch.base import BatchConfig, DetourConfig, InstanceConfig
from tnd.launch.commands import (
    as_object,
    augment_,
    baseline,
    batch_,
    brute,
    compare_,
    gen,
    metrics,
    solve_,
    spanning_command,
)
from tnd.tabu import SolverConfig

from builders import inst3_files


@pytest.fixture
def paths(tmp_path) -> PathConfig:
    files = inst3_files(tmp_path)
    return PathConfig(
        root_dir=str(tmp_path),
        data_dir=str(tmp_path),
        nodes_file=files["nodes"],
        demand_file=files["demand"],
        distances_file=files["distances"],
        output_dir=str(tmp_path / "results"),
        run_dir=str(tmp_path / "results" / "run"),
    )


def summary(paths: PathConfig) -> dict:
    with open(f"{paths.run_dir}/summary.json", encoding="utf-8") as f:
        return json.load(f)


@pytest.mark.parametrize(
    "error, code",
    [
        (InfeasibleError(60.0, 50.0), 3),
        (DataError("bad row", 3), 2),
        (InvalidInstanceError("not symmetric"), 2),
        (FileNotFoundError("nodes.csv"), 2),
        (SizeGuardError("too big"), 1),
        (ConfigError("phi"), 1),
        (ValueError("other"), 1),
    ],
)
def test_exit_codes(error, code):
    assert exit_code(error) == code


def test_as_object_passes_plain_configs_through():
    config = SolverConfig(phi=7)
    assert as_object(config) is config


def test_solve_command(paths):
    solve_(paths, InstanceConfig(), SolverConfig(phi=20), DetourConfig())
    result = summary(paths)
    assert result["best_z"] == 50.0
    assert result["config"]["phi"] == 20
    manifest = load_manifest(f"{paths.run_dir}/manifest.json")
    assert manifest.command == "solve"
    assert manifest.distance_mode == "file"
    assert manifest.config["solver"]["init"] == "MST"
    assert manifest_hash(manifest) == result["manifest_hash"]


def test_solve_command_over_budget(paths):
    with pytest.raises(InfeasibleError) as error:
        solve_(paths, InstanceConfig(budget=40.0), SolverConfig(phi=5), DetourConfig())
    assert exit_code(error.value) == 3
    assert summary(paths)["feasible"] is False


def test_solve_from_a_given_tree(paths, tmp_path):
    tree_file = tmp_path / "tree.csv"
    pd.DataFrame({"i": ["A", "C"], "j": ["C", "B"]}).to_csv(tree_file, index=False)
    paths.tree_file = str(tree_file)
    config = SolverConfig(phi=3, init="given")
    solve_(paths, InstanceConfig(), config, DetourConfig())
    assert summary(paths)["initial_z"] == 130.0


def test_solve_from_a_given_tree_needs_a_file(paths):
    config = SolverConfig(phi=3, init="given")
    with pytest.raises(ConfigError):
        solve_(paths, InstanceConfig(), config, DetourConfig())


def test_batch_command(paths):
    batch_(paths, InstanceConfig(), SolverConfig(phi=5), BatchConfig(runs=3))
    assert summary(paths)["batch"]["runs"] == 3


@pytest.mark.parametrize("method", ["mst", "mdst"])
def test_spanning_commands(paths, method):
    spanning_command(method)(paths, InstanceConfig(), DetourConfig())
    assert summary(paths)["method"] == method
    assert summary(paths)["best_z"] == 50.0


def test_brute_command_and_size_guard(paths):
    brute(paths, InstanceConfig(), BruteConfig(), DetourConfig())
    assert summary(paths)["best_z"] == 50.0

    gen(paths, SyntheticConfig(n=20, centers=2))
    big = PathConfig(
        nodes_file=f"{paths.data_dir}/nodes.csv",
        demand_file=f"{paths.data_dir}/demand.csv",
        distances_file=f"{paths.data_dir}/distances.csv",
        run_dir=paths.run_dir,
    )
    with pytest.raises(SizeGuardError) as error:
        brute(big, InstanceConfig(), BruteConfig(), DetourConfig())
    assert exit_code(error.value) == 1


@pytest.mark.parametrize("method", ["SWAP", "DELETE"])
def test_baseline_command(paths, method):
    baseline(paths, InstanceConfig(), BaselineConfig(method=method), DetourConfig())
    assert summary(paths)["method"] == method.lower()


def test_augment_command(paths):
    augment_(paths, InstanceConfig(), SolverConfig(phi=5), AugmentConfig(alpha=1))
    result = summary(paths)
    assert result["alpha"] == 1
    assert result["z"] == 50.0


def test_compare_command(paths):
    config = CompareConfig(methods=[Method.MST, Method.MDST, Method.TABU])
    compare_(paths, InstanceConfig(), SolverConfig(phi=10), config, BruteConfig())
    rows = pd.read_csv(f"{paths.run_dir}/compare.csv")
    assert list(rows["method"]) == ["MST", "MDST", "TABU"]
    assert rows["z"].iloc[-1] == 50.0


def test_metrics_reads_back_solve_outputs(paths):
    spanning_command("mst")(paths, InstanceConfig(), DetourConfig())
    paths.tree_file = f"{paths.run_dir}/tree_edges.csv"
    metrics(paths, InstanceConfig(), DetourConfig())
    result = summary(paths)
    assert result["is_tree"] is True
    assert result["z"] == 50.0

    paths.tree_file = ""
    with pytest.raises(ConfigError):
        metrics(paths, InstanceConfig(), DetourConfig())


def test_missing_input_file(paths):
    paths.nodes_file = f"{paths.data_dir}/absent.csv"
    with pytest.raises(FileNotFoundError) as error:
        solve_(paths, InstanceConfig(), SolverConfig(phi=1), DetourConfig())
    assert exit_code(error.value) == 2


REPO = Path(__file__).resolve().parents[1]


@pytest.fixture
def workdir(tmp_path) -> Path:
    """A copy of the launch configs whose data directory holds the 3-station files."""
    (tmp_path / "data").mkdir()
    inst3_files(tmp_path / "data")
    launch_dir = tmp_path / "launch"
    shutil.copytree(REPO / "launch", launch_dir)
    text = (launch_dir / "paths.yaml").read_text(encoding="utf-8")
    distances = "distances_file: ${data_dir}/distances.csv"
    text = text.replace('distances_file: ""', distances)
    text = text.replace("${oc.env:TND_OUTPUT_DIR,${root_dir}/results}", "../results")
    (launch_dir / "paths.yaml").write_text(text, encoding="utf-8")
    return launch_dir


def run(workdir: Path, *args: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, str(REPO / "src" / "main.py"), *args],
        cwd=workdir,
        capture_output=True,
        text=True,
    )


def run_summary(workdir: Path, run_id: str) -> dict:
    with open(workdir.parent / "results" / run_id / "summary.json") as f:
        return json.load(f)


def test_launch_smoke(workdir):
    result = run(workdir, "test.launch")
    assert result.returncode == 0
    assert "Successfully launched." in result.stdout
    assert run(workdir, "solve", "--dry-run").returncode == 0


def test_launch_solver_flags(workdir):
    flags = ["--phi", "7", "--psi", "1", "--tabu", "3", "--seed", "5"]
    args = [*flags, "--init", "random", "paths::run_id=flags"]
    assert run(workdir, "solve", *args).returncode == 0
    run_dir = workdir.parent / "results" / "flags"
    solver = load_manifest(run_dir / "manifest.json").config["solver"]
    assert (solver["phi"], solver["psi"], solver["seed"]) == (7, 1, 5)
    assert solver["tabu_capacity"] == 3
    assert solver["init"] == "RANDOM"
    assert run_summary(workdir, "flags")["best_z"] == 50.0


def test_launch_overrides_still_apply(workdir):
    assert run(workdir, "solve", "solver::phi=4", "paths::run_id=dots").returncode == 0
    assert run_summary(workdir, "dots")["config"]["phi"] == 4


def test_launch_exit_codes(workdir):
    assert run(workdir, "solve", "--phi", "many").returncode == 1
    assert run(workdir, "nonsense").returncode == 1
    missing = run(workdir, "mst", "paths::nodes_file=../data/absent.csv")
    assert missing.returncode == 2
    assert "Error:" in missing.stderr
    over = run(workdir, "solve", "--phi", "5", "--tau", "40", "paths::run_id=over")
    assert over.returncode == 3
    assert run_summary(workdir, "over")["feasible"] is False


def test_launch_brute_size_guard_and_force(workdir):
    gen = run(workdir, "gen", "--n", "20", "--centers", "2", "paths::data_dir=../big")
    assert gen.returncode == 0
    assert len(pd.read_csv(workdir.parent / "big" / "nodes.csv")) == 20
    assert run(workdir, "brute", "paths::data_dir=../big").returncode == 1

    assert run(workdir, "brute", "brute::max_n=2").returncode == 1
    forced = run(workdir, "brute", "--force", "brute::max_n=2", "paths::run_id=bf")
    assert forced.returncode == 0
    assert run_summary(workdir, "bf")["best_z"] == 50.0


def test_launch_command_flags(workdir):
    assert run(workdir, "baseline", "delete", "paths::run_id=del").returncode == 0
    assert run_summary(workdir, "del")["method"] == "delete"
    assert run(workdir, "baseline", "shuffle").returncode == 1

    assert run(workdir, "augment", "--alpha", "1", "--phi", "3").returncode == 0
    assert run_summary(workdir, "latest")["alpha"] == 1

    compared = run(workdir, "compare", "--methods", "mst,tabu", "--phi", "3")
    assert compared.returncode == 0
    rows = pd.read_csv(workdir.parent / "results" / "latest" / "compare.csv")
    assert list(rows["method"]) == ["MST", "TABU"]

    assert run(workdir, "batch", "--runs", "2", "--phi", "3").returncode == 0
    assert run_summary(workdir, "latest")["batch"]["runs"] == 2


def test_launch_logging_switches(workdir):
    log_file = workdir.parent / "results" / "latest" / "tnd.log"

    loud = run(workdir, "mst")
    assert "MST z=" in loud.stderr
    assert "MST z=" in log_file.read_text(encoding="utf-8")

    quiet = run(workdir, "mst", "--quiet")
    assert "MST z=" not in quiet.stderr
    assert "MST z=" in log_file.read_text(encoding="utf-8")

    assert run(workdir, "mst", "--json", "--quiet").returncode == 0
    records = [json.loads(line) for line in log_file.read_text().splitlines()]
    assert any("MST z=" in r["message"] for r in records)
    assert all(r["level"] for r in records)

    assert run(workdir, "mst", "--log-level", "warning").returncode == 0
    assert "MST z=" not in log_file.read_text(encoding="utf-8")
