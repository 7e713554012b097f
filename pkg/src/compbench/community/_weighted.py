"""Integer-weighted multigraph used by the aggregating detectors.

Adjacency lives in plain Python lists because the local-move loops index it
one node at a time; numpy scalars would dominate the runtime there.
"""

from __future__ import annotations

from ..graph import Graph


class WeightedGraph:
    # self_weight[u] is the diagonal entry A_uu, so that
    # sum(wts[u]) + self_weight[u] == degree[u] on every level.
    __slots__ = ("nbrs", "wts", "self_weight", "degree", "total")

    def __init__(self, nbrs, wts, self_weight):
        self.nbrs = nbrs
        self.wts = wts
        self.self_weight = self_weight
        self.degree = [sum(w) + s for w, s in zip(wts, self_weight)]
        self.total = sum(self.degree)  # 2m

    def __len__(self):
        return len(self.nbrs)

    @classmethod
    def from_graph(cls, graph: Graph) -> "WeightedGraph":
        indptr = graph.indptr.tolist()
        indices = graph.indices.tolist()
        nbrs = [indices[indptr[u]:indptr[u + 1]] for u in range(graph.num_nodes)]
        wts = [[1] * len(nb) for nb in nbrs]
        return cls(nbrs, wts, [0] * graph.num_nodes)

    def aggregate(self, comm: list[int]) -> tuple["WeightedGraph", list[int]]:
        """Collapse each community into one node.

        ``comm`` may use arbitrary ids; returns the coarse graph and the
        dense coarse id of every fine node.
        """
        remap: dict[int, int] = {}
        dense = [remap.setdefault(c, len(remap)) for c in comm]
        k = len(remap)
        links: list[dict[int, int]] = [{} for _ in range(k)]
        self_weight = [0] * k
        for u, cu in enumerate(dense):
            self_weight[cu] += self.self_weight[u]
            row = links[cu]
            for v, w in zip(self.nbrs[u], self.wts[u]):
                cv = dense[v]
                if cv == cu:
                    self_weight[cu] += w
                else:
                    row[cv] = row.get(cv, 0) + w
        nbrs = [sorted(row) for row in links]
        wts = [[row[v] for v in nb] for row, nb in zip(links, nbrs)]
        return WeightedGraph(nbrs, wts, self_weight), dense
