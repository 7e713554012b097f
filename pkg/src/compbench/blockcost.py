"""Block-encoding storage costs of a reordered adjacency matrix.

The matrix is tiled with ``b x b`` blocks.  ``cost1`` counts the tiles that
hold at least one 1; ``cost2`` is the entropy bound of a block-wise code:

    |B| * 2 * log2(n / b) + sum over non-empty blocks of b^2 * H(z / b^2)

with ``z`` the number of 1s in a block.  Both triangles of the symmetric
matrix are costed, tiles on the ragged edge count with the full ``b^2``
capacity, and all logarithms are base 2.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from .graph import Graph
from .ordering import Ordering

log = logging.getLogger(__name__)


class CostError(ValueError):
    pass


@dataclass(frozen=True)
class CostParams:
    b: int

    def __post_init__(self):
        if int(self.b) != self.b or self.b < 1:
            raise ValueError(f"block width must be a positive integer, got {self.b!r}")


@dataclass(frozen=True)
class BlockHistogram:
    """Non-empty blocks as parallel arrays sorted by ``(row_block, col_block)``."""

    row_block: np.ndarray
    col_block: np.ndarray
    z: np.ndarray
    b: int

    def __len__(self):
        return len(self.z)

    @property
    def counts(self) -> dict[tuple[int, int], int]:
        return {(r, c): z for r, c, z in zip(self.row_block.tolist(), self.col_block.tolist(),
                                              self.z.tolist())}


@dataclass(frozen=True)
class CostReport:
    nonempty_blocks: int
    total_bits: float
    bits_per_link: float
    b: int
    n: int
    m: int
    nonempty_fraction: float
    meta_bits: float
    data_bits: float

    def as_dict(self) -> dict:
        return asdict(self)


def binary_entropy(p):
    """``H(p) = p log2(1/p) + (1-p) log2(1/(1-p))`` with ``H(0) = H(1) = 0``.

    Accepts a scalar or an array; raises ``ValueError`` outside ``[0, 1]``.
    """
    arr = np.asarray(p, dtype=float)
    if np.any(~((arr >= 0.0) & (arr <= 1.0))):
        raise ValueError("binary_entropy is defined on [0, 1]")
    q = 1.0 - arr
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -(np.where(arr > 0, arr * np.log2(arr), 0.0) + np.where(q > 0, q * np.log2(q), 0.0))
    h = np.clip(h, 0.0, 1.0)
    return float(h) if h.ndim == 0 else h


def _check(graph: Graph, ordering: Ordering) -> np.ndarray:
    pos = ordering.position_of if isinstance(ordering, Ordering) else Ordering(ordering).position_of
    if len(pos) != graph.num_nodes:
        raise CostError(f"ordering has {len(pos)} positions, graph has {graph.num_nodes} nodes")
    return pos


def block_histogram(graph: Graph, ordering: Ordering, params: CostParams) -> BlockHistogram:
    """Count the 1s in each non-empty ``b x b`` tile of the reordered matrix.

    One pass over the stored adjacency entries (each edge appears in both
    directions, so both symmetric cells are attributed); block keys are
    sorted and run-length counted.
    """
    pos = _check(graph, ordering)
    b = params.b
    nb = -(-graph.num_nodes // b)
    blocks = pos // b
    keys = blocks[graph.sources()] * nb + blocks[graph.indices]
    keys.sort()
    if len(keys) == 0:
        empty = np.zeros(0, dtype=np.int64)
        return BlockHistogram(empty, empty, empty, b)
    starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
    z = np.diff(np.r_[starts, len(keys)])
    uniq = keys[starts]
    return BlockHistogram(uniq // nb, uniq % nb, z, b)


def cost1(graph: Graph, ordering: Ordering, params: CostParams) -> int:
    return len(block_histogram(graph, ordering, params))


def report_from_histogram(graph: Graph, hist: BlockHistogram) -> CostReport:
    n, m, b = graph.num_nodes, graph.num_edges, hist.b
    if m == 0:
        raise CostError("no links")
    nonempty = len(hist)
    addr_bits = 2.0 * math.log2(n / b)
    if addr_bits < 0:
        log.warning("n=%d < b=%d: block address bits clamped to 0", n, b)
        addr_bits = 0.0
    meta = nonempty * addr_bits
    cells = float(b * b)
    data = float(np.sum(cells * binary_entropy(hist.z / cells)))
    total = meta + data
    nb = -(-n // b)
    return CostReport(nonempty_blocks=nonempty, total_bits=total, bits_per_link=total / m,
                      b=b, n=n, m=m, nonempty_fraction=nonempty / (nb * nb),
                      meta_bits=meta, data_bits=data)


def cost2(graph: Graph, ordering: Ordering, params: CostParams) -> CostReport:
    """Full cost record; ``bits_per_link`` divides by the undirected edge count."""
    return report_from_histogram(graph, block_histogram(graph, ordering, params))


def sweep(graph: Graph, orderings: Sequence[Ordering] | dict[str, Ordering],
          block_widths: Iterable[int]) -> list[CostReport]:
    """One report per (ordering, block width), ordering-major."""
    items = orderings.values() if isinstance(orderings, dict) else orderings
    widths = list(block_widths)
    return [cost2(graph, o, CostParams(b)) for o in items for b in widths]


def dump_blocks(hist: BlockHistogram, stream: IO[str], limit: int | None = None) -> int:
    """Write ``row_block col_block z`` lines, at most ``limit`` of them."""
    count = len(hist) if limit is None else min(limit, len(hist))
    for r, c, z in zip(hist.row_block[:count].tolist(), hist.col_block[:count].tolist(),
                       hist.z[:count].tolist()):
        stream.write(f"{r} {c} {z}\n")
    return count
