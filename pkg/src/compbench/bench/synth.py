"""Deterministic synthetic graphs standing in for the real datasets."""

from __future__ import annotations

import random
from pathlib import Path

import numpy as np

from ..graph import Graph, from_edges, write_edge_list

KINDS = ("planted-cliques", "power-law")


def planted_cliques(cliques: int, size: int, epsilon: float, seed: int = 0) -> Graph:
    """``cliques`` disjoint ``K_size`` blocks plus random inter-clique bridges.

    Every unordered pair of cliques is joined, independently with probability
    ``epsilon``, by one edge between uniformly chosen members.  Node ``v``
    belongs to clique ``v // size``.
    """
    if cliques < 1 or size < 1:
        raise ValueError("cliques and size must be >= 1")
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError("epsilon must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(size, k=1)
    base = np.arange(cliques)[:, None] * size
    intra = np.column_stack([(base + iu).ravel(), (base + ju).ravel()])
    ci, cj = np.triu_indices(cliques, k=1)
    hit = rng.random(len(ci)) < epsilon
    ci, cj = ci[hit], cj[hit]
    a = ci * size + rng.integers(0, size, len(ci))
    b = cj * size + rng.integers(0, size, len(cj))
    edges = np.concatenate([intra, np.column_stack([a, b])])
    return from_edges(cliques * size, edges)


def power_law(n: int, attach: int = 2, seed: int = 0) -> Graph:
    """Preferential-attachment graph.

    Node 0 starts alone; node ``t >= 1`` links to ``min(attach, t)`` distinct
    earlier nodes drawn with probability proportional to degree, so the
    result is connected with ``sum_t min(attach, t)`` edges.
    """
    if n < 2 or attach < 1:
        raise ValueError("power-law needs n >= 2 and attach >= 1")
    rng = random.Random(seed)
    # each node appears once per incident edge end
    ends: list[int] = []
    edges: list[tuple[int, int]] = []
    for t in range(1, n):
        targets = {0} if t == 1 else set()
        while len(targets) < min(attach, t):
            targets.add(ends[rng.randrange(len(ends))])
        for s in sorted(targets):
            edges.append((s, t))
            ends.append(s)
            ends.append(t)
    return from_edges(n, edges)


def make_synthetic(kind: str, params: dict, seed: int = 0) -> Graph:
    if kind == "planted-cliques":
        return planted_cliques(int(params["cliques"]), int(params["size"]),
                               float(params.get("epsilon", 0.0)), seed)
    if kind == "power-law":
        return power_law(int(params["n"]), int(params.get("attach", 2)), seed)
    raise ValueError(f"unknown synthetic kind {kind!r}; expected one of {KINDS}")


def write_synthetic(kind: str, params: dict, seed: int, path: str | Path) -> Graph:
    graph = make_synthetic(kind, params, seed)
    with open(path, "w") as fh:
        fh.write(f"# {kind} seed={seed} " + " ".join(f"{k}={v}" for k, v in sorted(params.items())) + "\n")
        write_edge_list(graph, fh)
    return graph
