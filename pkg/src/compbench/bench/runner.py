"""Load -> detect -> order -> cost pipeline over a configured sweep."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ..blockcost import CostParams, cost2
from ..community import DETECTORS, DetectParams, detect
from ..graph import Graph, read_edge_list
from ..ordering import (
    SlashBurnParams,
    identity_ordering,
    naive_community_ordering,
    random_ordering,
    slashburn_ordering,
)
from .config import ExperimentConfig
from .report import ReportRow

log = logging.getLogger(__name__)


@dataclass
class RunResult:
    rows: list[ReportRow]
    failures: list[str] = field(default_factory=list)
    datasets_ok: int = 0

    @property
    def exit_code(self) -> int:
        return 1 if self.failures else 0


def build_ordering(graph: Graph, method: str, seed: int, hub_count: int):
    """Return ``(ordering, detection or None)`` for one pipeline method."""
    if method in DETECTORS:
        found = detect(method, graph, DetectParams(seed=seed))
        return naive_community_ordering(graph, found.partition), found
    if method == "slashburn":
        ordering, _ = slashburn_ordering(graph, SlashBurnParams(hub_count))
        return ordering, None
    if method == "random":
        return random_ordering(graph.num_nodes, seed), None
    if method == "identity":
        return identity_ordering(graph.num_nodes), None
    raise ValueError(f"unknown method {method!r}")


def run_cell(dataset: str, graph: Graph, method: str, config: ExperimentConfig) -> list[ReportRow]:
    """All block widths for one (dataset, method) pair."""
    start = time.perf_counter()
    ordering, found = build_ordering(graph, method, config.seed, config.hub_count(graph.num_nodes))
    built = time.perf_counter()
    detect_s = found.seconds if found else 0.0
    order_s = built - start - detect_s
    rows = []
    for b in config.block_widths:
        t0 = time.perf_counter()
        report = cost2(graph, ordering, CostParams(b))
        cost_s = time.perf_counter() - t0
        rows.append(ReportRow(
            dataset=dataset, method=method, seed=config.seed, b=b,
            n=report.n, m=report.m,
            num_communities=found.num_communities if found else None,
            objective=found.objective if found else None,
            cost1=report.nonempty_blocks, nonempty_fraction=report.nonempty_fraction,
            cost2_total_bits=report.total_bits, bits_per_link=report.bits_per_link,
            detect_ms=_ms(detect_s) if config.timings and found else None,
            order_ms=_ms(order_s) if config.timings else None,
            cost_ms=_ms(cost_s) if config.timings else None,
        ))
    return rows


def _ms(seconds: float) -> float:
    return round(seconds * 1000.0, 3)


def run_experiment(config: ExperimentConfig) -> RunResult:
    """Evaluate every (dataset, method, b) in config order.

    Each dataset is read once.  A dataset that cannot be loaded, or a cell
    that raises, is logged and skipped.  With ``jobs > 1`` cells run in
    worker processes; rows are still emitted in config order.
    """
    result = RunResult(rows=[])
    graphs: dict[str, Graph] = {}
    for name, path in config.datasets:
        try:
            graphs[name] = read_edge_list(path)
        except (OSError, ValueError) as exc:
            msg = f"dataset {name!r} ({path}): {exc}"
            log.error(msg)
            result.failures.append(msg)
    cells = [(name, method) for name, _ in config.datasets if name in graphs
             for method in config.methods]
    if config.jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            futures = [pool.submit(run_cell, name, graphs[name], method, config)
                       for name, method in cells]
            outcomes = [_outcome(f.result) for f in futures]
    else:
        outcomes = [_outcome(run_cell, name, graphs[name], method, config)
                    for name, method in cells]
    ok_datasets = set()
    for (name, method), (rows, error) in zip(cells, outcomes):
        if error is not None:
            msg = f"dataset {name!r}, method {method!r}: {error}"
            log.error(msg)
            result.failures.append(msg)
            continue
        ok_datasets.add(name)
        result.rows.extend(rows)
    result.datasets_ok = len(ok_datasets)
    return result


def _outcome(fn, *args):
    try:
        return fn(*args), None
    except Exception as exc:  # one bad cell must not sink the sweep
        return None, f"{type(exc).__name__}: {exc}"
