from collections import namedtuple
from dataclasses import dataclass, field
from typing import Any, Callable, Optional
import logging

import coma

from ..augment import AugmentConfig
from ..baselines import BaselineConfig, BruteConfig, CompareConfig
from ..io import PathConfig, SyntheticConfig, logging as log
from ..objective import default_grid
from ..tabu import SolverConfig


@dataclass
class InstanceConfig:
    # Read coordinates as 'lat,lon' degrees and use great-circle distances.
    geo: bool = False

    # Travel distance budget in passenger-kilometers. None means unconstrained.
    budget: Optional[float] = None


@dataclass
class DetourConfig:
    # Ratio thresholds of the cumulative detour curves.
    grid: list[float] = field(default_factory=lambda: default_grid().tolist())

    # Extend the grid to the largest ratio so both curves reach 1.
    close: bool = True


@dataclass
class BatchConfig:
    # Number of solves, with seeds solver.seed, solver.seed + 1, ...
    runs: int = 100


# Links a unique config ID with its data type.
ConfigData = namedtuple("ConfigData", "id_ type_")


class Configs:
    """Registry for all known configs."""

    augment = ConfigData("augment", AugmentConfig)
    baseline = ConfigData("baseline", BaselineConfig)
    batch = ConfigData("batch", BatchConfig)
    brute = ConfigData("brute", BruteConfig)
    compare = ConfigData("compare", CompareConfig)
    detour = ConfigData("detour", DetourConfig)
    instance = ConfigData("instance", InstanceConfig)
    paths = ConfigData("paths", PathConfig)
    solver = ConfigData("solver", SolverConfig)
    synthetic = ConfigData("synthetic", SyntheticConfig)

    @staticmethod
    def add(*cfgs_data: ConfigData):
        """Converts the given config data to a valid coma config dict."""
        return {cfg.id_: cfg.type_ for cfg in cfgs_data}


class ConfigFlag:
    """
    A command-line flag that overrides one config field when it is given. 'convert'
    maps the parsed value onto the field. Other keywords go to argparse.
    """

    def __init__(
        self,
        flag: str,
        config: ConfigData,
        field_name: str,
        convert: Optional[Callable[[Any], Any]] = None,
        **options,
    ):
        self.flag = flag
        self.config = config
        self.field_name = field_name
        self.dest = flag.lstrip("-").replace("-", "_")
        self.convert = convert or (lambda value: value)
        self.options = {"default": None, **options}


def flag_hooks(*flags: ConfigFlag) -> dict:
    """Parser and pre-init hooks that write the given flags into their configs."""
    parser_hook = coma.hooks.sequence(
        *(coma.hooks.parser_hook.factory(f.flag, **f.options) for f in flags)
    )

    @coma.hooks.hook
    def pre_init_hook(known_args, configs):
        for f in flags:
            value = getattr(known_args, f.dest, None)
            if value is not None:
                setattr(configs[f.config.id_], f.field_name, f.convert(value))

    return dict(parser_hook=parser_hook, pre_init_hook=pre_init_hook)


@coma.hooks.hook
def pre_config_hook(known_args):
    """This pre-config hook sets the global logging level and output switches."""
    log.DEFAULT_LEVEL = getattr(logging, known_args.log_level.upper())
    log.TO_CONSOLE = not known_args.quiet
    log.AS_JSON = known_args.json


@coma.hooks.hook
def pre_run_hook(known_args):
    """This pre-run hook exits early. Useful for debugging init hooks."""
    if known_args.dry_run:
        print("Dry run.")
        quit()


def init():
    """Initiate Coma with application-specific non-default hooks and configs."""
    # ===== 1. Create any additional hooks. =====

    # Parser hook for flagging a dry run.
    dry_run_hook = coma.hooks.parser_hook.factory(
        "--dry-run",
        action="store_true",
        help="exit during pre-run",
    )
    logging_level_hook = coma.hooks.parser_hook.factory(
        "--log-level",
        default="info",
        choices=["debug", "info", "warning", "error", "critical"],
        help="set the default global log level",
    )
    quiet_hook = coma.hooks.parser_hook.factory(
        "--quiet",
        action="store_true",
        help="log to the run directory only, not the console",
    )
    json_hook = coma.hooks.parser_hook.factory(
        "--json",
        action="store_true",
        help="write log records as JSON lines",
    )

    # ===== 2. Initialize. =====

    coma.initiate(
        # Add the dry run and logging parser hooks.
        parser_hook=coma.hooks.sequence(
            coma.hooks.parser_hook.default,
            dry_run_hook,
            logging_level_hook,
            quiet_hook,
            json_hook,
        ),
        # Add the logging hook.
        pre_config_hook=pre_config_hook,
        # Override the default CLI config_id-to-config_field separator from ':' to '::'.
        # This allows config_field to contain ':' (e.g., a dictionary).
        post_config_hook=coma.hooks.post_config_hook.multi_cli_override_factory(
            coma.config.cli.override_factory(sep="::"),
        ),
        # Add the dry run hook.
        pre_run_hook=pre_run_hook,
    )
