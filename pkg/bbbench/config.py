import os
import os.path
import platform
import time
import traceback
from collections import OrderedDict
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import psutil
from omegaconf import OmegaConf
from omegaconf.errors import OmegaConfBaseException
from yaml.error import YAMLError

import bbbench
from bbtls.basetypes import EmptyClassDefault, EmptyDictDefault, ListDefault
from bbtls.descent import Method, Safeguard, StopKind
from bbtls.problems import PROBLEMS
from bbbench.exceptions import BenchConfigError, ConfigError
from bbbench.benchlogging import log_exception


@dataclass
class BenchLogConfig(object):
    enable: bool = False
    name: str = "bbbench-{date}-{time}"   # {date}, {time} and other run.* entries are substituted
    ext: str = ".log"
    dir: str = "."
    level: str = "INFO"


@dataclass
class BenchOptions(object):
    log: BenchLogConfig = EmptyClassDefault(BenchLogConfig)


SUMMARY_FORMATS = ("csv", "json", "md", "markdown", "markdown-table")


@dataclass
class BenchConfig(object):
    """One benchmark grid: every (method, epsilon, alpha0) combination is a separate run"""
    problem: str = "rosenbrock"
    # quadratic problem: diagonal and linear term
    diag: Optional[List[float]] = None
    shift: Optional[List[float]] = None
    # overrides the problem's canonical start point
    x0: Optional[List[float]] = None
    methods: List[str] = ListDefault("bb1", "bb2", "bb3")
    epsilons: List[float] = ListDefault(1e-1, 1e-2, 1e-4, 1e-8)
    max_iter: int = 5000
    alpha0: List[float] = ListDefault(1e-3)
    safeguard: str = "none"
    stop: str = "target"
    out: Optional[str] = None
    format: str = "csv"
    trace_dir: Optional[str] = None
    # number of parallel workers, <0 for one per CPU
    jobs: int = 1


@dataclass
class BBBenchConfig(object):
    opts: BenchOptions = EmptyClassDefault(BenchOptions)
    bench: BenchConfig = EmptyClassDefault(BenchConfig)
    run: Dict[str, Any] = EmptyDictDefault()


def check_bench_config(config: BenchConfig) -> BenchConfig:
    """Checks the invariants of a BenchConfig. Raises BenchConfigError naming the offending field."""
    if config.problem not in PROBLEMS:
        raise BenchConfigError("problem", f"unknown problem '{config.problem}', available: {', '.join(PROBLEMS)}")
    if not config.methods:
        raise BenchConfigError("methods", "at least one method is required")
    for method in config.methods:
        if method not in Method.__members__:
            raise BenchConfigError("methods", f"unknown method '{method}', available: {', '.join(Method.__members__)}")
    if not config.epsilons:
        raise BenchConfigError("epsilons", "at least one tolerance is required")
    if not all(eps > 0 for eps in config.epsilons):
        raise BenchConfigError("epsilons", f"tolerances must be positive, got {', '.join(map(repr, config.epsilons))}")
    if not config.alpha0:
        raise BenchConfigError("alpha0", "at least one initial steplength is required")
    if not all(alpha0 > 0 for alpha0 in config.alpha0):
        raise BenchConfigError("alpha0", f"initial steplengths must be positive, got {', '.join(map(repr, config.alpha0))}")
    if config.max_iter < 1:
        raise BenchConfigError("max_iter", f"must be at least 1, got {config.max_iter}")
    try:
        Safeguard.parse(config.safeguard)
    except ConfigError as exc:
        raise BenchConfigError("safeguard", exc.message)
    if config.stop not in StopKind.__members__:
        raise BenchConfigError("stop", f"expected one of {', '.join(StopKind.__members__)}, got '{config.stop}'")
    if config.format not in SUMMARY_FORMATS:
        raise BenchConfigError("format", f"expected one of {', '.join(SUMMARY_FORMATS)}, got '{config.format}'")
    if config.jobs == 0:
        raise BenchConfigError("jobs", "must be nonzero")
    return config


_CONFIG_BASENAME = "bbbench.yml"

# dict of config file locations to check, in order of preference
CONFIG_LOCATIONS = OrderedDict(
    package = os.path.join(os.path.dirname(__file__), _CONFIG_BASENAME),
    local   = _CONFIG_BASENAME,
    venv    = os.environ.get('VIRTUAL_ENV', None) and os.path.join(os.environ['VIRTUAL_ENV'], _CONFIG_BASENAME),
    user    = os.path.join(os.path.expanduser("~/.config"), _CONFIG_BASENAME),
)

# set to the first config file that was actually loaded
CONFIG_LOADED = None

ConfigExceptionTypes = (OmegaConfBaseException, YAMLError, OSError)


def default_config():
    """Returns the schema with all defaults, as an OmegaConf structured config"""
    return OmegaConf.structured(BBBenchConfig)


def load_config(extra_configs: List[str] = [], extra_dotlist: List[str] = [],
                verbose: bool = False, use_sys_config: bool = True):
    """Loads the configuration: schema defaults, then system config files, then extra_configs,
    then the dotlist. Returns None (after logging the error) if anything fails to load."""
    global CONFIG_LOADED
    log = bbbench.logger()

    conf = default_config()

    if use_sys_config:
        sys_configs = [config_file for config_file in CONFIG_LOCATIONS.values()
                        if config_file and os.path.exists(config_file)]
    else:
        sys_configs = []

    for config_file in sys_configs + list(extra_configs):
        log.info(f"loading config from {config_file}")
        try:
            conf = OmegaConf.merge(conf, OmegaConf.load(config_file))
        except ConfigExceptionTypes as exc:
            if verbose:
                traceback.print_exc()
            log_exception(ConfigError(f"error reading {config_file}", exc))
            return None
        if not CONFIG_LOADED:
            CONFIG_LOADED = config_file

    if extra_dotlist:
        try:
            conf = OmegaConf.merge(conf, OmegaConf.from_dotlist(list(extra_dotlist)))
        except ConfigExceptionTypes as exc:
            if verbose:
                traceback.print_exc()
            log_exception(ConfigError("error applying command-line config settings", exc))
            return None

    _ds = time.strftime("%Y%m%d")
    _ts = time.strftime("%H%M%S")
    conf.run = OmegaConf.create(dict(
        date=_ds,
        time=_ts,
        datetime=f"{_ds}-{_ts}",
        ncpu=psutil.cpu_count(logical=True),
        node=platform.node().split('.', 1)[0]))

    return conf
