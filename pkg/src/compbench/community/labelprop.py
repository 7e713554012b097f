"""Asynchronous label propagation."""

from __future__ import annotations

import logging
import random

import numpy as np

from ..graph import Graph
from .params import DetectParams
from .partition import Partition

log = logging.getLogger(__name__)


def label_propagation(graph: Graph, params: DetectParams | None = None) -> Partition:
    """Each node repeatedly adopts the most frequent label among its neighbours.

    Nodes are visited in a fresh seeded-random order every sweep and update
    in place.  On a tie the current label is kept when it is one of the
    maxima, otherwise the smallest tied label wins.  Stops after a sweep
    with no change, or after ``max_iterations`` sweeps.
    """
    params = params or DetectParams()
    n = graph.num_nodes
    rng = random.Random(params.seed)
    indptr = graph.indptr.tolist()
    indices = graph.indices.tolist()
    adj = [indices[indptr[u]:indptr[u + 1]] for u in range(n)]
    label = list(range(n))
    order = [u for u in range(n) if adj[u]]
    for sweep in range(params.max_iterations):
        rng.shuffle(order)
        changed = 0
        for u in order:
            counts: dict[int, int] = {}
            for v in adj[u]:
                lv = label[v]
                counts[lv] = counts.get(lv, 0) + 1
            top = max(counts.values())
            cur = label[u]
            if counts.get(cur, 0) == top:
                continue
            label[u] = min(lab for lab, c in counts.items() if c == top)
            changed += 1
        if not changed:
            break
    else:
        log.warning("label propagation stopped after %d sweeps without converging",
                    params.max_iterations)
    return Partition(np.asarray(label))
