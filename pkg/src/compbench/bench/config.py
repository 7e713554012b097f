"""Experiment configuration loaded from a single JSON file."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

from ..graph import load_manifest
from ..ordering import SlashBurnParams

METHODS = ("labelprop", "multilevel", "fastgreedy", "leadingeigen", "infomap",
           "slashburn", "random", "identity")
DEFAULT_SLASHBURN_RATIO = 0.005


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    """A benchmark sweep.

    ``slashburn_k`` is a hub count when it is an integer >= 1 and a
    fraction of ``n`` when it is a float in (0, 1).  ``timings`` fills the
    wall-clock columns; it is off by default so repeated runs write
    identical bytes.
    """

    datasets: tuple[tuple[str, Path], ...]
    methods: tuple[str, ...] = METHODS
    block_widths: tuple[int, ...] = (512, 1024)
    seed: int = 0
    slashburn_k: int | float = DEFAULT_SLASHBURN_RATIO
    output: Path = Path("results.csv")
    jobs: int = 1
    timings: bool = False

    def __post_init__(self):
        if not self.datasets:
            raise ConfigError("no datasets configured")
        if not self.methods:
            raise ConfigError("no methods configured")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ConfigError(f"unknown methods {unknown}; expected a subset of {list(METHODS)}")
        if not self.block_widths:
            raise ConfigError("no block widths configured")
        if any(isinstance(b, bool) or not isinstance(b, int) or b < 1 for b in self.block_widths):
            raise ConfigError("block widths must be integers >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        k = self.slashburn_k
        if isinstance(k, bool) or not isinstance(k, (int, float)):
            raise ConfigError("slashburn_k must be a number")
        if isinstance(k, float) and not (0 < k < 1) and not (k >= 1 and k.is_integer()):
            raise ConfigError("slashburn_k must be a count >= 1 or a ratio in (0, 1)")
        if isinstance(k, int) and k < 1:
            raise ConfigError("slashburn_k must be a count >= 1 or a ratio in (0, 1)")

    def hub_count(self, n: int) -> int:
        k = self.slashburn_k
        if isinstance(k, float) and k < 1:
            return SlashBurnParams.from_ratio(n, k).k
        return int(k)

    def with_overrides(self, **overrides) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def _datasets(raw, base: Path) -> tuple[tuple[str, Path], ...]:
    def resolve(p):
        p = Path(p)
        return p if p.is_absolute() else base / p

    if isinstance(raw, dict):
        return tuple((str(name), resolve(p)) for name, p in raw.items())
    if isinstance(raw, list):
        out = []
        for item in raw:
            if isinstance(item, dict) and {"name", "path"} <= item.keys():
                out.append((str(item["name"]), resolve(item["path"])))
            elif isinstance(item, (list, tuple)) and len(item) == 2:
                out.append((str(item[0]), resolve(item[1])))
            else:
                raise ConfigError(f"bad dataset entry {item!r}")
        return tuple(out)
    raise ConfigError("datasets must be an object or a list")


def config_from_dict(raw: dict, base: Path = Path(".")) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    known = {"datasets", "manifest", "methods", "block_widths", "seed", "slashburn_k",
             "output", "jobs", "timings"}
    extra = set(raw) - known
    if extra:
        raise ConfigError(f"unknown config keys: {sorted(extra)}")
    datasets: tuple = ()
    if "manifest" in raw:
        mpath = Path(raw["manifest"])
        mpath = mpath if mpath.is_absolute() else base / mpath
        try:
            datasets += tuple(load_manifest(mpath).items())
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read manifest {mpath}: {exc}") from exc
    if "datasets" in raw:
        datasets += _datasets(raw["datasets"], base)
    kwargs = {"datasets": datasets}
    if "methods" in raw:
        kwargs["methods"] = tuple(raw["methods"])
    if "block_widths" in raw:
        kwargs["block_widths"] = tuple(raw["block_widths"])
    for key in ("seed", "jobs"):
        if key in raw:
            if not isinstance(raw[key], int) or isinstance(raw[key], bool):
                raise ConfigError(f"{key} must be an integer")
            kwargs[key] = raw[key]
    if "slashburn_k" in raw:
        kwargs["slashburn_k"] = raw["slashburn_k"]
    if "timings" in raw:
        kwargs["timings"] = bool(raw["timings"])
    if "output" in raw:
        out = Path(raw["output"])
        kwargs["output"] = out if out.is_absolute() else base / out
    return ExperimentConfig(**kwargs)


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_dict(raw, path.parent)
