from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class DetectParams:
    """Determinism and convergence knobs shared by every detector.

    ``max_iterations`` caps label-propagation sweeps and Louvain/Infomap
    local-move sweeps and levels.  Power iteration in the leading-eigenvector
    method has its own per-split cap of ``10 * group size``.
    """

    seed: int = 0
    max_iterations: int = 1000
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")
