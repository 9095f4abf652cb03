"""
Run configuration: parsed flags merged with environment defaults.
"""

import logging
import os
from dataclasses import asdict, dataclass

from dotenv import load_dotenv
from sympy import isprime

logger = logging.getLogger(__name__)

SUITES = (
    "logic",
    "compat",
    "cc",
    "grassmann",
    "cliques",
    "apartments",
    "ortho-apartments",
    "transforms",
)
SUITE_COMMANDS = ("verify", "apartments", "transforms")

DEFAULT_SEED = 7
DEFAULT_SAMPLES = 200
SUITE_SAMPLES = {"logic": 500, "compat": 1000}
DEFAULT_CACHE_DIR = ".qlogic_cache"
DEFAULT_JOBS = 1
DEFAULT_LOG_LEVEL = "WARNING"
DEFAULT_MAX_VERTICES = 10_000
QUICK_DIVISOR = 10
QUICK_MINIMUM = 10
SEED_LIMIT = 2 ** 64


class ConfigError(Exception):
    """Custom exception for invalid run configuration."""


@dataclass(frozen=True)
class Environment:
    """Defaults read from the process environment (and .env)."""

    seed: int = DEFAULT_SEED
    cache_dir: str = DEFAULT_CACHE_DIR
    jobs: int = DEFAULT_JOBS
    log_level: str = DEFAULT_LOG_LEVEL
    max_vertices: int = DEFAULT_MAX_VERTICES


def _int_variable(name, default):
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError as error:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from error


def load_environment(dotenv_path=None):
    """
    Load .env (if any) and read the QLOGIC_* variables.

    Raises:
        ConfigError: if a numeric variable does not parse.
    """
    load_dotenv(dotenv_path)
    return Environment(
        seed=_int_variable("QLOGIC_SEED", DEFAULT_SEED),
        cache_dir=os.getenv("QLOGIC_CACHE_DIR") or DEFAULT_CACHE_DIR,
        jobs=_int_variable("QLOGIC_JOBS", DEFAULT_JOBS),
        log_level=(os.getenv("QLOGIC_LOG_LEVEL") or DEFAULT_LOG_LEVEL).upper(),
        max_vertices=_int_variable("QLOGIC_MAX_VERTICES", DEFAULT_MAX_VERTICES),
    )


def scaled_samples(samples, quick):
    """Sample count after --quick scaling."""
    if not quick:
        return samples
    return max(QUICK_MINIMUM, samples // QUICK_DIVISOR)


@dataclass(frozen=True)
class RunConfig:
    """
    Everything a command needs, validated before dispatch.

    ``n``, ``k`` and ``p`` are None when the suite should use its own
    parameter grid.
    """

    command: str
    suite: str = "all"
    n: int = None
    k: int = None
    p: int = None
    field_name: str = None
    seed: int = DEFAULT_SEED
    samples: int = None
    jobs: int = DEFAULT_JOBS
    quick: bool = False
    out: str = None
    dot: str = None
    case: str = None
    kind: str = None
    cache_dir: str = DEFAULT_CACHE_DIR
    max_vertices: int = DEFAULT_MAX_VERTICES

    def __post_init__(self):
        self.validate()

    def selected_suites(self):
        """Suites the command runs, in run order; none for listing commands."""
        if self.command not in SUITE_COMMANDS:
            return []
        return list(SUITES) if self.suite == "all" else [self.suite]

    def samples_for(self, suite):
        """
        Sample count for one suite: --samples if given, else the suite's own
        default, then --quick scaling.
        """
        if self.samples is not None:
            samples = self.samples
        else:
            samples = SUITE_SAMPLES.get(suite, DEFAULT_SAMPLES)
        return scaled_samples(samples, self.quick)

    def validate(self):
        """
        Raises:
            ConfigError: on any out-of-range value.
        """
        if self.suite != "all" and self.suite not in SUITES:
            raise ConfigError(f"Unknown suite {self.suite!r}")
        if not 0 <= self.seed < SEED_LIMIT:
            raise ConfigError("Seed must be a 64-bit unsigned integer")
        if self.samples is not None and self.samples < 1:
            raise ConfigError("--samples must be positive")
        if self.jobs < 1:
            raise ConfigError("--jobs must be positive")
        if self.max_vertices < 1:
            raise ConfigError("QLOGIC_MAX_VERTICES must be positive")
        if self.n is not None and self.n < 1:
            raise ConfigError("--n must be positive")
        if self.k is not None:
            if self.k < 0:
                raise ConfigError("--k must be non-negative")
            if self.n is not None and self.k > self.n:
                raise ConfigError("--k cannot exceed --n")
        if self.p is not None and not isprime(self.p):
            raise ConfigError(f"--p must be prime, got {self.p}")
        if "cc" in self.selected_suites():
            self._validate_cc()

    def _validate_cc(self):
        # dichotomy instances use n = 3k + 1; partners need 0 < dim Y < n
        if self.k is not None and self.k < 1:
            raise ConfigError(f"cc needs --k >= 1, got {self.k}")
        if self.n is not None and self.n < 2:
            raise ConfigError(f"cc needs --n >= 2, got {self.n}")
        if self.n is not None and self.k is not None and self.k >= self.n:
            raise ConfigError("cc needs --k below --n")

    def echo(self):
        """The configuration as it appears in reports (no paths)."""
        payload = asdict(self)
        for key in ("out", "dot", "cache_dir", "jobs"):
            payload.pop(key)
        payload["effective_samples"] = {
            suite: self.samples_for(suite) for suite in self.selected_suites()
        }
        return payload


def build_config(command, environment=None, **flags):
    """
    Merge explicit flags over environment defaults.

    Flags whose value is None fall back to the environment (seed, jobs) or to
    the RunConfig default.
    """
    environment = environment or Environment()
    values = {key: value for key, value in flags.items() if value is not None}
    values.setdefault("seed", environment.seed)
    values.setdefault("jobs", environment.jobs)
    values.setdefault("cache_dir", environment.cache_dir)
    values.setdefault("max_vertices", environment.max_vertices)
    try:
        config = RunConfig(command=command, **values)
    except TypeError as error:
        raise ConfigError(str(error)) from error
    logger.debug("Run configuration: %s", config)
    return config
