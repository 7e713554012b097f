"""Node orderings: community-based, SlashBurn, and baselines.

An :class:`Ordering` maps every node to its row/column in the reordered
adjacency matrix.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.sparse.csgraph import connected_components as _cc

from .community.partition import Partition, PartitionMismatch
from .graph import Graph


class OrderingError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Ordering:
    position_of: np.ndarray

    def __post_init__(self):
        pos = np.array(self.position_of, dtype=np.int64)
        n = len(pos)
        if pos.ndim != 1 or not np.array_equal(np.sort(pos), np.arange(n)):
            raise OrderingError("ordering is not a bijection on [0, n)")
        pos.setflags(write=False)
        object.__setattr__(self, "position_of", pos)

    def __len__(self):
        return len(self.position_of)

    def __eq__(self, other):
        if not isinstance(other, Ordering):
            return NotImplemented
        return np.array_equal(self.position_of, other.position_of)

    def __repr__(self):
        return f"Ordering(n={len(self)})"

    def node_at(self) -> np.ndarray:
        """Inverse view: ``node_at()[p]`` is the node placed at position ``p``."""
        inv = np.empty_like(self.position_of)
        inv[self.position_of] = np.arange(len(self))
        return inv

    @classmethod
    def from_sequence(cls, nodes) -> "Ordering":
        """Build from the list of nodes in position order."""
        nodes = np.asarray(nodes, dtype=np.int64)
        if not np.array_equal(np.sort(nodes), np.arange(len(nodes))):
            raise OrderingError("node sequence is not a permutation")
        pos = np.empty(len(nodes), dtype=np.int64)
        pos[nodes] = np.arange(len(nodes))
        return cls(pos)


def identity_ordering(n: int) -> Ordering:
    return Ordering(np.arange(n))


def random_ordering(n: int, seed: int = 0) -> Ordering:
    return Ordering(np.random.default_rng(seed).permutation(n))


def invert(ordering: Ordering) -> Ordering:
    return Ordering(ordering.node_at())


def compose(outer: Ordering, inner: Ordering) -> Ordering:
    """Apply ``inner`` first, then ``outer``: ``v -> outer[inner[v]]``."""
    if len(outer) != len(inner):
        raise OrderingError(f"size mismatch: {len(outer)} vs {len(inner)}")
    return Ordering(outer.position_of[inner.position_of])


def naive_community_ordering(graph: Graph, partition: Partition) -> Ordering:
    """Largest communities first; inside a community, highest degree first.

    Equal-size communities are ordered by their smallest member; equal
    degrees by node id.
    """
    if partition.num_nodes != graph.num_nodes:
        raise PartitionMismatch(
            f"partition covers {partition.num_nodes} nodes, graph has {graph.num_nodes}")
    lab = partition.label_of
    sizes = partition.sizes()
    # canonical labels are numbered by smallest member, so the label is the tie-break
    nodes = np.lexsort((np.arange(graph.num_nodes), -graph.degrees(), lab, -sizes[lab]))
    return Ordering.from_sequence(nodes)


@dataclass(frozen=True)
class SlashBurnParams:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")

    @classmethod
    def from_ratio(cls, n: int, ratio: float = 0.005) -> "SlashBurnParams":
        # round first so that e.g. 0.005 * 100000 stays 500 rather than 501
        return cls(max(1, math.ceil(round(ratio * n, 9))))


def slashburn_ordering(graph: Graph, params: SlashBurnParams) -> tuple[Ordering, int]:
    """Hub-removal ordering; returns the ordering and the number of slashes.

    Each iteration removes the ``k`` highest-degree nodes of the working
    graph (degree recomputed on the working graph, ties to the lower id)
    and gives them the lowest free positions.  The nodes outside the giant
    component of what remains are spokes: they take the highest free
    positions, filled from the back, sorted by component size, then degree
    (both descending), then id.  The giant component becomes the next
    working graph.  Once it has fewer than ``k`` nodes, or is a single node,
    its nodes fill the remaining middle positions by descending degree.
    """
    n = graph.num_nodes
    k = params.k
    if k >= n:
        raise ValueError(f"k={k} must be smaller than the node count {n}")
    adj = graph.to_scipy()
    position = np.full(n, -1, dtype=np.int64)
    front, back = 0, n - 1
    working = np.arange(n)
    sub = adj
    iterations = 0
    while True:
        deg = np.diff(sub.indptr)
        if len(working) < max(k, 2):
            order = np.lexsort((working, -deg))
            position[working[order]] = np.arange(front, front + len(working))
            break
        iterations += 1
        hubs = np.lexsort((working, -deg))[:k]
        position[working[hubs]] = np.arange(front, front + k)
        front += k
        alive = np.ones(len(working), dtype=bool)
        alive[hubs] = False
        rest = working[alive]
        sub = sub[alive][:, alive].tocsr()
        if len(rest) == 0:
            break
        ncomp, comp = _cc(sub, directed=False)
        sizes = np.bincount(comp, minlength=ncomp)
        # giant: largest component, ties to the one holding the smallest node id
        first = np.full(ncomp, n, dtype=np.int64)
        np.minimum.at(first, comp, rest)
        giant = int(np.lexsort((first, -sizes))[0])
        in_giant = comp == giant
        spokes = np.flatnonzero(~in_giant)
        if len(spokes):
            sdeg = np.diff(sub.indptr)[spokes]
            order = spokes[np.lexsort((rest[spokes], -sdeg, -sizes[comp[spokes]]))]
            position[rest[order]] = np.arange(back, back - len(order), -1)
            back -= len(order)
        working = rest[in_giant]
        sub = sub[in_giant][:, in_giant].tocsr()
    return Ordering(position), iterations


STRATEGIES = ("community-naive", "slashburn", "random", "identity")


def write_ordering(graph: Graph, ordering: Ordering, path: str | Path, meta: dict | None = None) -> None:
    """Line ``i`` holds the label of the node placed at position ``i``; sidecar ``<path>.json``."""
    path = Path(path)
    if len(ordering) != graph.num_nodes:
        raise OrderingError("ordering does not match graph size")
    labels = graph.labels()
    with open(path, "w") as fh:
        for v in ordering.node_at().tolist():
            fh.write(f"{labels[v]}\n")
    with open(path.with_name(path.name + ".json"), "w") as fh:
        json.dump({"n": len(ordering), **(meta or {})}, fh, indent=2, sort_keys=True)


def read_ordering(graph: Graph, path: str | Path) -> Ordering:
    index = graph.node_of_label()
    nodes = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s:
                continue
            try:
                nodes.append(index[s])
            except KeyError:
                raise OrderingError(f"{path}:{lineno}: unknown node {s!r}") from None
    if len(nodes) != graph.num_nodes:
        raise OrderingError(f"{path}: {len(nodes)} positions for {graph.num_nodes} nodes")
    return Ordering.from_sequence(nodes)
