"""Multilevel (Louvain) modularity optimisation."""

from __future__ import annotations

import random

import numpy as np

from ..graph import Graph
from ._weighted import WeightedGraph
from .params import DetectParams
from .partition import Partition


# A sweep whose total modularity gain is below this ends the level.
MIN_SWEEP_GAIN = 1e-6


def _move_nodes(wg: WeightedGraph, comm: list[int], rng: random.Random, max_sweeps: int) -> bool:
    """Greedy local moves until a sweep gains less than ``MIN_SWEEP_GAIN``.

    Gains are compared in integer units ``w_uC * 2m - tot_C * d_u`` so ties
    are exact and the result does not depend on float rounding.  Returns
    True if any node moved.
    """
    two_m = wg.total
    deg = wg.degree
    tot = [0] * len(wg)
    for u, c in enumerate(comm):
        tot[c] += deg[u]
    order = list(range(len(wg)))
    # integer gain units -> modularity
    scale = 2.0 / (two_m * two_m)
    moved_any = False
    for _ in range(max_sweeps):
        rng.shuffle(order)
        moved = 0
        improvement = 0
        for u in order:
            cu = comm[u]
            du = deg[u]
            links: dict[int, int] = {}
            for v, w in zip(wg.nbrs[u], wg.wts[u]):
                c = comm[v]
                links[c] = links.get(c, 0) + w
            tot[cu] -= du
            best = cu
            best_gain = stay_gain = links.get(cu, 0) * two_m - tot[cu] * du
            for c, w in links.items():
                gain = w * two_m - tot[c] * du
                if gain > best_gain or (gain == best_gain and c < best and best != cu):
                    best, best_gain = c, gain
            tot[best] += du
            if best != cu:
                comm[u] = best
                moved += 1
                improvement += best_gain - stay_gain
        if moved:
            moved_any = True
        if improvement * scale < MIN_SWEEP_GAIN:
            break
    return moved_any


def louvain_multilevel(graph: Graph, params: DetectParams | None = None) -> Partition:
    params = params or DetectParams()
    n = graph.num_nodes
    if graph.num_edges == 0:
        return Partition.singletons(n)
    rng = random.Random(params.seed)
    wg = WeightedGraph.from_graph(graph)
    # membership[v]: node of the current coarse graph holding original node v
    membership = list(range(n))
    for _ in range(params.max_iterations):
        comm = list(range(len(wg)))
        if not _move_nodes(wg, comm, rng, params.max_iterations):
            break
        wg, dense = wg.aggregate(comm)
        membership = [dense[c] for c in membership]
        if len(wg) == 1:
            break
    return Partition(np.asarray(membership))
