"""Hop distances, eccentricities, exact and double-sweep diameter."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BudgetExceededError, DisconnectedGraphError
from .graph import Graph

DEFAULT_APSP_BUDGET = 20_000


@dataclass(frozen=True)
class DistanceField:
    """BFS distances from ``source`` and the shortest-path tree.

    ``parent[source] == source``.  Neighbours are scanned in ascending
    order, so the tree is deterministic.
    """

    source: int
    dist: np.ndarray
    parent: np.ndarray

    def farthest(self) -> int:
        """Smallest-id vertex at maximum distance."""
        return int(np.argmax(self.dist))

    def eccentricity(self) -> int:
        return int(self.dist.max())


@dataclass(frozen=True)
class DiameterResult:
    diameter: int
    endpoint_a: int
    endpoint_b: int
    mode: str  # "exact" or "lower_bound"

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    def to_dict(self) -> dict:
        return {
            "value": self.diameter,
            "mode": self.mode,
            "endpoints": [self.endpoint_a, self.endpoint_b],
        }


def bfs(g: Graph, source: int) -> DistanceField:
    if not 0 <= source < g.n:
        raise ValueError(f"source {source} outside 0..{g.n - 1}")
    dist, parent = kernels.bfs(g.indptr, g.indices, int(source))
    if np.any(dist < 0):
        missing = int(np.argmin(dist))
        raise DisconnectedGraphError(f"vertex {missing} unreachable from {source}")
    dist.setflags(write=False)
    parent.setflags(write=False)
    return DistanceField(int(source), dist, parent)


def extract_path(field: DistanceField, target: int) -> list[int]:
    """Vertices of the tree geodesic from ``field.source`` to ``target``."""
    out = [int(target)]
    v = int(target)
    while v != field.source:
        v = int(field.parent[v])
        out.append(v)
    out.reverse()
    return out


def exact_diameter(g: Graph, budget: int = DEFAULT_APSP_BUDGET, threads: int | None = None) -> DiameterResult:
    """All-sources BFS.  The witnessing pair is the smallest-id vertex of
    maximum eccentricity and its smallest-id farthest vertex."""
    if g.n > budget:
        raise BudgetExceededError(
            f"exact diameter on n={g.n} exceeds the all-pairs budget {budget}; "
            "raise the budget or use double-sweep mode"
        )
    nthreads = kernels.thread_count() if threads is None else threads
    ecc, far = kernels.eccentricities(g.indptr, g.indices, nthreads)
    if np.any(ecc < 0):
        raise DisconnectedGraphError("graph is not connected")
    a = int(np.argmax(ecc))
    return DiameterResult(int(ecc[a]), a, int(far[a]), "exact")


def double_sweep_lower_bound(g: Graph, seed: int = 0) -> DiameterResult:
    start = int(np.random.default_rng(seed).integers(g.n))
    first = bfs(g, start)
    a = first.farthest()
    second = bfs(g, a)
    b = second.farthest()
    return DiameterResult(int(second.dist[b]), a, b, "lower_bound")


def all_pairs_distances(g: Graph) -> np.ndarray:
    """Dense ``n x n`` distance matrix; for tests and small graphs only."""
    return np.stack([bfs(g, s).dist for s in range(g.n)])
