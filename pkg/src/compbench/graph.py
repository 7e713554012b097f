"""Undirected simple graphs in compressed sparse row form.

Every other module works on :class:`Graph`: detectors read the adjacency,
orderings permute it, and the block-cost evaluators stream over its edges
without ever building the dense matrix.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _cc

log = logging.getLogger(__name__)


class GraphFormatError(ValueError):
    """Raised when an edge-list file cannot be parsed."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph.

    ``indptr``/``indices`` follow the CSR convention: the neighbours of ``u``
    are ``indices[indptr[u]:indptr[u + 1]]``, strictly increasing.  Each
    undirected edge is stored twice.
    """

    indptr: np.ndarray
    indices: np.ndarray
    original_labels: tuple[str, ...] | None = None
    # populated by load_edge_list only
    dropped_duplicates: int = 0
    dropped_self_loops: int = 0

    def __post_init__(self):
        indptr = np.ascontiguousarray(self.indptr, dtype=np.int64)
        indices = np.ascontiguousarray(self.indices, dtype=np.int64)
        indptr.setflags(write=False)
        indices.setflags(write=False)
        object.__setattr__(self, "indptr", indptr)
        object.__setattr__(self, "indices", indices)
        _check_invariants(indptr, indices)
        if self.original_labels is not None and len(self.original_labels) != self.num_nodes:
            raise ValueError("original_labels length does not match node count")

    @property
    def num_nodes(self) -> int:
        return len(self.indptr) - 1

    @property
    def num_edges(self) -> int:
        return len(self.indices) // 2

    n = num_nodes
    m = num_edges

    def neighbors(self, v: int) -> np.ndarray:
        _check_node(self, v)
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def sources(self) -> np.ndarray:
        """Row id of every stored adjacency entry (aligned with ``indices``)."""
        return np.repeat(np.arange(self.num_nodes, dtype=np.int64), self.degrees())

    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of undirected edges with ``u < v``, lexicographically sorted."""
        src = self.sources()
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def to_scipy(self) -> csr_matrix:
        n = self.num_nodes
        data = np.ones(len(self.indices), dtype=np.int8)
        return csr_matrix((data, self.indices, self.indptr), shape=(n, n))

    def label(self, v: int) -> str:
        if self.original_labels is None:
            return str(v)
        return self.original_labels[v]

    def labels(self) -> list[str]:
        if self.original_labels is None:
            return [str(v) for v in range(self.num_nodes)]
        return list(self.original_labels)

    def node_of_label(self) -> dict[str, int]:
        return {lab: v for v, lab in enumerate(self.labels())}

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __repr__(self):
        return f"Graph(n={self.num_nodes}, m={self.num_edges})"


def _check_invariants(indptr: np.ndarray, indices: np.ndarray) -> None:
    if indptr.ndim != 1 or len(indptr) < 1 or indptr[0] != 0 or indptr[-1] != len(indices):
        raise ValueError("malformed indptr")
    n = len(indptr) - 1
    deg = np.diff(indptr)
    if (deg < 0).any():
        raise ValueError("indptr must be non-decreasing")
    if len(indices) == 0:
        return
    if indices.min() < 0 or indices.max() >= n:
        raise ValueError("neighbour id out of range")
    src = np.repeat(np.arange(n, dtype=np.int64), deg)
    if (src == indices).any():
        raise ValueError("self-loop in adjacency")
    same_row = src[1:] == src[:-1]
    if (np.diff(indices)[same_row] <= 0).any():
        raise ValueError("neighbour lists must be strictly increasing")
    if len(indices) % 2:
        raise ValueError("odd number of adjacency entries; graph is not symmetric")
    # forward keys are already sorted because rows are sorted
    fwd = src * n + indices
    rev = np.sort(indices * n + src)
    if not np.array_equal(fwd, rev):
        raise ValueError("adjacency is not symmetric")


def _check_node(graph: Graph, v: int) -> None:
    if not 0 <= v < graph.num_nodes:
        raise IndexError(f"node {v} out of range [0, {graph.num_nodes})")


def from_edges(n: int, edges, labels: Sequence[str] | None = None, **extra) -> Graph:
    """Build a graph on ``n`` nodes from an iterable or ``(k, 2)`` array of pairs.

    Duplicates and self-loops are dropped silently; use :func:`load_edge_list`
    when the counts matter.
    """
    arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if len(arr) and (arr.min() < 0 or arr.max() >= n):
        raise IndexError("edge endpoint out of range")
    arr = arr[arr[:, 0] != arr[:, 1]]
    src = np.concatenate([arr[:, 0], arr[:, 1]])
    dst = np.concatenate([arr[:, 1], arr[:, 0]])
    keys = np.unique(src * max(n, 1) + dst)
    src, dst = np.divmod(keys, max(n, 1))
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return Graph(indptr, dst, tuple(labels) if labels is not None else None, **extra)


def load_edge_list(stream: IO[str] | Iterable[str]) -> Graph:
    """Parse a whitespace-separated edge list.

    Labels are remapped to dense ids in first-appearance order.  Lines
    starting with ``#`` or ``%`` are comments.  Duplicate edges (either
    direction) and self-loops are dropped and counted on the returned graph.
    """
    ids: dict[str, int] = {}
    us: list[int] = []
    vs: list[int] = []
    self_loops = 0
    for lineno, line in enumerate(stream, 1):
        s = line.strip()
        if not s or s[0] in "#%":
            continue
        tok = s.split()
        if len(tok) != 2:
            raise GraphFormatError(f"line {lineno}: expected 2 tokens, got {len(tok)}")
        a, b = tok
        u = ids.setdefault(a, len(ids))
        v = ids.setdefault(b, len(ids))
        if u == v:
            self_loops += 1
            continue
        us.append(u)
        vs.append(v)
    if not ids:
        raise GraphFormatError("no edges")
    n = len(ids)
    arr = np.array([us, vs], dtype=np.int64).T.reshape(-1, 2)
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    uniq = np.unique(lo * n + hi)
    duplicates = len(arr) - len(uniq)
    if duplicates or self_loops:
        log.info("dropped %d duplicate edges and %d self-loops", duplicates, self_loops)
    return from_edges(n, np.column_stack(np.divmod(uniq, n)), labels=list(ids),
                      dropped_duplicates=duplicates, dropped_self_loops=self_loops)


def read_edge_list(path: str | Path) -> Graph:
    with open(path) as fh:
        return load_edge_list(fh)


def write_edge_list(graph: Graph, stream: IO[str]) -> None:
    """Write one ``u v`` line per undirected edge using the graph's labels.

    Isolated nodes cannot be expressed in this format and are lost.
    """
    labels = graph.labels()
    for u, v in graph.edges().tolist():
        stream.write(f"{labels[u]} {labels[v]}\n")


def degree(graph: Graph, v: int) -> int:
    _check_node(graph, v)
    return int(graph.indptr[v + 1] - graph.indptr[v])


def degree_sequence(graph: Graph) -> list[int]:
    return graph.degrees().tolist()


@dataclass(frozen=True)
class ComponentLabeling:
    component_of: np.ndarray
    component_sizes: np.ndarray
    giant_component_id: int

    @property
    def num_components(self) -> int:
        return len(self.component_sizes)

    def members(self, cid: int) -> np.ndarray:
        return np.flatnonzero(self.component_of == cid)


def connected_components(graph: Graph) -> ComponentLabeling:
    """Label components, numbered by their smallest member id."""
    return _label_components(graph.num_nodes, graph.indptr, graph.indices)


def _label_components(n: int, indptr: np.ndarray, indices: np.ndarray) -> ComponentLabeling:
    if n == 0:
        empty = np.zeros(0, dtype=np.int64)
        return ComponentLabeling(empty, empty, -1)
    mat = csr_matrix((np.ones(len(indices), dtype=np.int8), indices, indptr), shape=(n, n))
    k, raw = _cc(mat, directed=False)
    # renumber by first appearance == smallest member id
    first = np.full(k, n, dtype=np.int64)
    np.minimum.at(first, raw, np.arange(n))
    rank = np.empty(k, dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(k)
    comp = rank[raw]
    sizes = np.bincount(comp, minlength=k)
    return ComponentLabeling(comp, sizes, int(np.argmax(sizes)))


def remove_nodes(graph: Graph, node_set: Iterable[int]) -> tuple[Graph, np.ndarray]:
    """Induced subgraph on the surviving nodes.

    Returns the subgraph and an array mapping each old id to its new id
    (``-1`` for removed nodes).  Survivors keep their relative order.
    """
    n = graph.num_nodes
    drop = np.fromiter(node_set, dtype=np.int64)
    if len(drop) and (drop.min() < 0 or drop.max() >= n):
        raise IndexError("node id out of range")
    keep = np.ones(n, dtype=bool)
    keep[drop] = False
    survivor = np.full(n, -1, dtype=np.int64)
    survivor[keep] = np.arange(int(keep.sum()))
    src = graph.sources()
    sel = keep[src] & keep[graph.indices]
    new_src = survivor[src[sel]]
    new_dst = survivor[graph.indices[sel]]
    k = int(keep.sum())
    indptr = np.zeros(k + 1, dtype=np.int64)
    np.cumsum(np.bincount(new_src, minlength=k), out=indptr[1:])
    labels = None
    if graph.original_labels is not None:
        labels = tuple(graph.original_labels[i] for i in np.flatnonzero(keep))
    # relabelling is monotone, so rows stay sorted
    return Graph(indptr, new_dst, labels), survivor


def permute_graph(graph: Graph, ordering) -> Graph:
    """Relabel node ``u`` as ``ordering[u]``.

    ``ordering`` is anything array-like (or an :class:`~compbench.ordering.Ordering`)
    giving the new position of each node.
    """
    pos = np.asarray(getattr(ordering, "position_of", ordering), dtype=np.int64)
    n = graph.num_nodes
    if len(pos) != n or not np.array_equal(np.sort(pos), np.arange(n)):
        raise ValueError("ordering is not a bijection on the node set")
    src = pos[graph.sources()]
    dst = pos[graph.indices]
    order = np.lexsort((dst, src))
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    labels = None
    if graph.original_labels is not None:
        inv = np.empty(n, dtype=np.int64)
        inv[pos] = np.arange(n)
        labels = tuple(graph.original_labels[i] for i in inv)
    return Graph(indptr, dst[order], labels)


def load_manifest(path: str | Path) -> dict[str, Path]:
    """Read a JSON ``{dataset name: edge-list path}`` manifest.

    Relative paths resolve against the manifest's directory.
    """
    path = Path(path)
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError("manifest must be a JSON object")
    out = {}
    for name, p in raw.items():
        p = Path(p)
        out[name] = p if p.is_absolute() else path.parent / p
    return out


# Names and sizes of the ten social graphs used in the original experiments.
# The edge-list files themselves are user supplied.
PAPER_DATASETS = {
    "facebook": (63_731, 817_089),
    "blogcatalog": (88_784, 2_093_193),
    "livemocha": (104_103, 2_193_081),
    "academia": (200_188, 1_022_484),
    "googleplus": (211_336, 1_141_861),
    "twitterhiggs": (456_635, 12_508_466),
    "delicious": (536_108, 1_365_959),
    "lastfm": (1_191_805, 4_519_330),
    "youtube": (1_134_890, 2_987_624),
    "hyves": (1_402_673, 2_777_919),
}
