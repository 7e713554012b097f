"""Newman's leading-eigenvector method: recursive spectral bisection."""

from __future__ import annotations

import logging

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from ..graph import Graph
from .params import DetectParams
from .partition import Partition

log = logging.getLogger(__name__)


class _GroupOperator:
    """Generalised modularity matrix ``B^(g)`` of a node group, applied matrix-free.

    ``B^(g)_ij = A_ij - k_i k_j / 2m - delta_ij * sum_{l in g} B_il`` with
    ``k`` the degrees in the whole graph.
    """

    def __init__(self, adj: csr_matrix, nodes: np.ndarray, degrees: np.ndarray, two_m: float):
        self.sub = adj[nodes][:, nodes].tocsr().astype(float)
        self.k = degrees[nodes].astype(float)
        self.two_m = two_m
        k_in = np.asarray(self.sub.sum(axis=1)).ravel()
        self.diag = k_in - self.k * self.k.sum() / two_m
        # Gershgorin bound on the spectrum: every row's absolute sum is at most this
        self.shift = float(np.max(k_in + self.k * self.k.sum() / two_m + np.abs(self.diag)))

    def __len__(self):
        return len(self.k)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return self.sub @ x - self.k * (self.k @ x) / self.two_m - self.diag * x

    def dense(self) -> np.ndarray:
        return (self.sub.toarray() - np.outer(self.k, self.k) / self.two_m
                - np.diag(self.diag))


def leading_eigenpair(op: _GroupOperator, tol: float, max_iter: int, rng: np.random.Generator):
    """Power iteration on ``B + cI`` with ``c`` the Gershgorin shift.

    The shift makes every eigenvalue non-negative, so the dominant one is the
    algebraically largest eigenvalue of ``B``.  Returns ``(value, vector)`` or
    ``None`` if the iterate has not settled to ``tol`` (max-norm change)
    within ``max_iter`` steps.
    """
    c = op.shift
    x = rng.standard_normal(len(op))
    x /= np.linalg.norm(x)
    for _ in range(max_iter):
        y = op.matvec(x) + c * x
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return 0.0, x
        y /= norm
        if np.max(np.abs(y - x)) < tol:
            return float(y @ op.matvec(y)), y
        x = y
    return None


def lanczos_eigenpair(op: _GroupOperator, tol: float, max_iter: int, rng: np.random.Generator):
    """Algebraically largest eigenpair via ARPACK; ``None`` on non-convergence."""
    size = len(op)
    if size < 3:
        # too small for ARPACK; solve the 2x2 problem directly
        values, vectors = np.linalg.eigh(op.dense())
        return float(values[-1]), vectors[:, -1]
    lin = LinearOperator((size, size), matvec=op.matvec, dtype=float)
    try:
        values, vectors = eigsh(lin, k=1, which="LA", tol=tol, maxiter=max_iter,
                                v0=rng.standard_normal(size))
    except ArpackNoConvergence:
        return None
    return float(values[0]), vectors[:, 0]


SOLVERS = {"lanczos": lanczos_eigenpair, "power": leading_eigenpair}


def leading_eigenvector(graph: Graph, params: DetectParams | None = None,
                        solver: str = "lanczos") -> Partition:
    """Split groups by the sign of the leading eigenvector while modularity rises.

    A group is left whole when its leading eigenvalue is not positive, when
    the sign split would not raise modularity, or when the eigensolver fails
    to converge within ``10 * group size`` iterations (logged as a warning).
    ``solver="power"`` selects shifted power iteration, which is exact but
    slow to converge on large groups with a small spectral gap.
    """
    params = params or DetectParams()
    n = graph.num_nodes
    m = graph.num_edges
    if m == 0:
        return Partition.singletons(n)
    eigenpair = SOLVERS[solver]
    rng = np.random.default_rng(params.seed)
    adj = graph.to_scipy()
    degrees = graph.degrees()
    two_m = 2.0 * m

    label = np.zeros(n, dtype=np.int64)
    next_label = 1
    pending = [np.arange(n)]
    while pending:
        nodes = pending.pop()
        split = _bisect(adj, nodes, degrees, two_m, params.tolerance, rng, eigenpair)
        if split is None:
            continue
        first, second = nodes[split], nodes[~split]
        label[second] = next_label
        next_label += 1
        pending.append(second)
        pending.append(first)
    return Partition(label)


def _bisect(adj, nodes, degrees, two_m, tol, rng, eigenpair):
    if len(nodes) < 2:
        return None
    op = _GroupOperator(adj, nodes, degrees, two_m)
    pair = eigenpair(op, tol, 10 * len(nodes), rng)
    if pair is None:
        log.warning("eigensolver did not converge on a group of %d nodes; "
                    "keeping it whole", len(nodes))
        return None
    value, vec = pair
    if value <= tol:
        return None
    s = np.where(vec > 0, 1.0, -1.0)
    if abs(s.sum()) == len(s):
        return None
    gain = s @ op.matvec(s) / (2.0 * two_m)
    if gain <= 1e-12:
        return None
    return s > 0
