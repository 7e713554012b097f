"""Node partitions, their quality functions, and on-disk format."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..graph import Graph


class PartitionMismatch(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Partition:
    """Canonical community labelling: ids are contiguous and numbered by smallest member."""

    label_of: np.ndarray

    def __post_init__(self):
        labels = canonical_labels(self.label_of)
        labels.setflags(write=False)
        object.__setattr__(self, "label_of", labels)

    @property
    def num_nodes(self) -> int:
        return len(self.label_of)

    @property
    def num_communities(self) -> int:
        return int(self.label_of.max()) + 1 if len(self.label_of) else 0

    def sizes(self) -> np.ndarray:
        return np.bincount(self.label_of, minlength=self.num_communities)

    def communities(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_communities)]
        for v, c in enumerate(self.label_of.tolist()):
            out[c].append(v)
        return out

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.label_of, other.label_of)

    def __repr__(self):
        return f"Partition(n={self.num_nodes}, communities={self.num_communities})"

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(np.arange(n))

    @classmethod
    def whole(cls, n: int) -> "Partition":
        return cls(np.zeros(n, dtype=np.int64))


def canonical_labels(labels) -> np.ndarray:
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise ValueError("labels must be one-dimensional")
    if len(labels) == 0:
        return np.zeros(0, dtype=np.int64)
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inverse.reshape(-1)]


def _check(graph: Graph, partition: Partition) -> None:
    if partition.num_nodes != graph.num_nodes:
        raise PartitionMismatch(
            f"partition covers {partition.num_nodes} nodes, graph has {graph.num_nodes}")


def modularity(graph: Graph, partition: Partition) -> float:
    """Newman modularity ``sum_c (L_c / m - (D_c / 2m)^2)``.

    ``L_c`` is the number of edges inside community ``c`` and ``D_c`` its
    total degree.  Returns 0.0 for edgeless graphs.
    """
    _check(graph, partition)
    m = graph.num_edges
    if m == 0:
        return 0.0
    lab = partition.label_of
    c = partition.num_communities
    src = graph.sources()
    inside = lab[src] == lab[graph.indices]
    # every internal edge is seen twice
    internal = np.bincount(lab[src[inside]], minlength=c) / 2.0
    total_deg = np.bincount(lab, weights=graph.degrees(), minlength=c)
    # the float sum is accurate to ~1e-15 for any graph we can hold in memory
    return float(np.sum(internal / m) - np.sum((total_deg / (2.0 * m)) ** 2))


def plogp(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log2(x[pos])
    return out


def map_equation_codelength(graph: Graph, partition: Partition) -> float:
    """Two-level map equation in bits for an undirected, unweighted walk.

    Visit rates are ``deg / 2m``; a module's exit rate is its cut size over
    ``2m``.  Edgeless graphs have codelength 0.
    """
    _check(graph, partition)
    m = graph.num_edges
    if m == 0:
        return 0.0
    lab = partition.label_of
    c = partition.num_communities
    deg = graph.degrees().astype(float)
    src = graph.sources()
    crossing = lab[src] != lab[graph.indices]
    exit_flow = np.bincount(lab[src[crossing]], minlength=c) / (2.0 * m)
    module_flow = np.bincount(lab, weights=deg, minlength=c) / (2.0 * m)
    node_flow = deg / (2.0 * m)
    return codelength_from_flows(exit_flow, module_flow, node_flow)


def codelength_from_flows(exit_flow, module_flow, node_flow) -> float:
    q = float(np.sum(exit_flow))
    value = (float(plogp(q)) - 2.0 * float(np.sum(plogp(exit_flow)))
             - float(np.sum(plogp(node_flow)))
             + float(np.sum(plogp(np.asarray(exit_flow) + np.asarray(module_flow)))))
    return max(value, 0.0)


def write_partition(graph: Graph, partition: Partition, path: str | Path,
                    meta: dict | None = None) -> None:
    """Write ``label community`` lines plus a ``<path>.json`` sidecar."""
    _check(graph, partition)
    path = Path(path)
    labels = graph.labels()
    with open(path, "w") as fh:
        for v, c in enumerate(partition.label_of.tolist()):
            fh.write(f"{labels[v]} {c}\n")
    sidecar = {"num_communities": partition.num_communities, **(meta or {})}
    with open(sidecar_path(path), "w") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)


def read_partition(graph: Graph, path: str | Path) -> Partition:
    index = graph.node_of_label()
    labels = np.full(graph.num_nodes, -1, dtype=np.int64)
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.split()
            if not s:
                continue
            if len(s) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'node community'")
            try:
                labels[index[s[0]]] = int(s[1])
            except KeyError:
                raise PartitionMismatch(f"{path}:{lineno}: unknown node {s[0]!r}") from None
    if (labels < 0).any():
        raise PartitionMismatch(f"{path}: {int((labels < 0).sum())} nodes unlabelled")
    return Partition(labels)


def sidecar_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")
