"""Clauset-Newman-Moore greedy agglomeration."""

from __future__ import annotations

import heapq

import numpy as np

from ..graph import Graph
from .params import DetectParams
from .partition import Partition


def fast_greedy(graph: Graph, params: DetectParams | None = None) -> Partition:
    """Merge the community pair with the largest modularity gain until no gain is positive.

    For communities ``i, j`` joined by ``w_ij`` edges with total degrees
    ``D_i, D_j`` the gain is ``(2m w_ij - D_i D_j) / (2 m^2)``.  Only the
    integer numerator is tracked, so merge order is exact and reproducible;
    ties go to the lexicographically smallest ``(i, j)`` pair.  Merging stops
    at the first non-positive best gain, which is the modularity peak of the
    merge sequence.  ``params`` is accepted for interface symmetry; the
    method is deterministic.
    """
    n = graph.num_nodes
    m = graph.num_edges
    if m == 0:
        return Partition.singletons(n)
    two_m = 2 * m
    indptr = graph.indptr.tolist()
    indices = graph.indices.tolist()
    links: list[dict[int, int] | None] = [
        {v: 1 for v in indices[indptr[u]:indptr[u + 1]]} for u in range(n)]
    tot = [indptr[u + 1] - indptr[u] for u in range(n)]
    members: list[list[int] | None] = [[u] for u in range(n)]

    # Heap entries hold an upper bound on the pair's current gain.  A pair's
    # gain can only rise when one side absorbs a community adjacent to the
    # other, and exactly those pairs are pushed afresh after each merge;
    # every other stale entry still bounds its pair from above.  A popped
    # entry is therefore the true maximum once its bound is re-checked.
    heap = []
    for i in range(n):
        for j in links[i]:
            if i < j:
                heap.append((-(two_m - tot[i] * tot[j]), i, j))
    heapq.heapify(heap)

    while heap:
        neg, i, j = heapq.heappop(heap)
        li, lj = links[i], links[j]
        if li is None or lj is None:
            continue
        w = li.get(j)
        if w is None:
            continue
        gain = two_m * w - tot[i] * tot[j]
        if gain != -neg:
            if gain > 0:
                heapq.heappush(heap, (-gain, i, j))
            continue
        if gain <= 0:
            break
        if len(li) >= len(lj):
            keep, gone, lk, lg = i, j, li, lj
        else:
            keep, gone, lk, lg = j, i, lj, li
        del lk[gone]
        del lg[keep]
        tot[keep] += tot[gone]
        members[keep].extend(members[gone])
        links[gone] = None
        members[gone] = None
        tk = tot[keep]
        for k, wk in lg.items():
            wk_new = lk.get(k, 0) + wk
            lk[k] = wk_new
            row = links[k]
            del row[gone]
            row[keep] = wk_new
            gain = two_m * wk_new - tk * tot[k]
            if gain > 0:
                heapq.heappush(heap, (-gain, keep, k) if keep < k else (-gain, k, keep))

    label = np.empty(n, dtype=np.int64)
    for c, mem in enumerate(members):
        if mem is not None:
            label[mem] = c
    return Partition(label)
