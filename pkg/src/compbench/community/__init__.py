"""Community detection: five traditional detectors plus their objectives."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from ..graph import Graph
from .eigen import leading_eigenvector
from .fastgreedy import fast_greedy
from .infomap import infomap_two_level
from .labelprop import label_propagation
from .louvain import louvain_multilevel
from .params import DetectParams
from .partition import (
    Partition,
    PartitionMismatch,
    map_equation_codelength,
    modularity,
    read_partition,
    write_partition,
)

__all__ = [
    "DETECTORS",
    "DetectParams",
    "Detection",
    "Partition",
    "PartitionMismatch",
    "detect",
    "fast_greedy",
    "infomap_two_level",
    "label_propagation",
    "leading_eigenvector",
    "louvain_multilevel",
    "map_equation_codelength",
    "modularity",
    "read_partition",
    "write_partition",
]

# method name -> (detector, objective it reports)
DETECTORS: dict[str, tuple[Callable[[Graph, DetectParams], Partition], Callable]] = {
    "labelprop": (label_propagation, modularity),
    "multilevel": (louvain_multilevel, modularity),
    "fastgreedy": (fast_greedy, modularity),
    "leadingeigen": (leading_eigenvector, modularity),
    "infomap": (infomap_two_level, map_equation_codelength),
}


@dataclass(frozen=True)
class Detection:
    method: str
    partition: Partition
    objective: float
    objective_name: str
    seconds: float

    @property
    def num_communities(self) -> int:
        return self.partition.num_communities


def detect(method: str, graph: Graph, params: DetectParams | None = None) -> Detection:
    """Run a named detector and score its partition."""
    try:
        detector, objective = DETECTORS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; expected one of {sorted(DETECTORS)}") from None
    params = params or DetectParams()
    start = time.perf_counter()
    partition = detector(graph, params)
    elapsed = time.perf_counter() - start
    name = "codelength" if objective is map_equation_codelength else "modularity"
    return Detection(method, partition, objective(graph, partition), name, elapsed)
