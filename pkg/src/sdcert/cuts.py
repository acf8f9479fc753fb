"""Volume, boundary and conductance of vertex sets; balls and the
ball-growing radius sweep; an exhaustive oracle for the k-way conductance."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .bfs import DistanceField, bfs
from .errors import (
    BudgetExceededError,
    SweepHypothesisError,
    InvariantViolation,
    UndefinedConductanceError,
)
from .graph import Graph

DEFAULT_BRUTE_FORCE_CAP = 12


@dataclass(frozen=True)
class CutStats:
    members: tuple[int, ...]
    volume: int
    boundary_edges: int
    conductance: float
    min_volume: int = field(compare=False)

    @property
    def conductance_fraction(self) -> Fraction:
        return Fraction(self.boundary_edges, self.min_volume)


def _member_array(g: Graph, members: Iterable[int]) -> np.ndarray:
    arr = np.unique(np.fromiter((int(v) for v in members), dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= g.n):
        raise ValueError(f"vertex ids must lie in 0..{g.n - 1}")
    return arr


def volume(g: Graph, members: Iterable[int]) -> int:
    return int(g.degree[_member_array(g, members)].sum())


def boundary_count(g: Graph, members: Iterable[int]) -> int:
    """Number of edges with exactly one endpoint in ``members``."""
    mask = np.zeros(g.n, dtype=bool)
    mask[_member_array(g, members)] = True
    e = g.edge_array()
    return int(np.count_nonzero(mask[e[:, 0]] != mask[e[:, 1]]))


def cut_stats(g: Graph, members: Iterable[int]) -> CutStats:
    arr = _member_array(g, members)
    if arr.size == 0 or arr.size == g.n:
        raise UndefinedConductanceError("conductance needs a proper nonempty subset")
    vol = int(g.degree[arr].sum())
    bnd = boundary_count(g, arr)
    min_vol = min(vol, g.volume_total - vol)
    if min_vol == 0:
        raise UndefinedConductanceError("one side of the cut has zero volume")
    return CutStats(tuple(arr.tolist()), vol, bnd, bnd / min_vol, min_vol)


def ball(g: Graph, center: int | DistanceField, r: int) -> list[int]:
    """Vertices within hop distance ``r`` of ``center``, ascending."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    fld = center if isinstance(center, DistanceField) else bfs(g, center)
    return np.flatnonzero(fld.dist <= r).tolist()


# --------------------------------------------------------------------------
# radius sweep


@dataclass(frozen=True)
class RadiusStats:
    """Statistics of B(center, radius), maintained incrementally."""

    radius: int
    size: int
    volume: int
    boundary: int
    min_volume: int

    @property
    def conductance(self) -> float:
        if self.min_volume == 0:
            raise UndefinedConductanceError(f"ball of radius {self.radius} covers the whole graph")
        return self.boundary / self.min_volume


@dataclass(frozen=True)
class BallSweepResult:
    center: int
    budget_radius: int
    chosen_radius: int
    threshold: float
    per_radius: tuple[RadiusStats, ...]
    members: tuple[int, ...]

    @property
    def stats(self) -> CutStats:
        s = self.per_radius[self.chosen_radius]
        return CutStats(self.members, s.volume, s.boundary, s.conductance, s.min_volume)

    def csv_rows(self) -> list[list]:
        return [
            [self.center, s.radius, s.volume, s.boundary, repr(s.conductance), repr(self.threshold)]
            for s in self.per_radius
        ]


SWEEP_CSV_HEADER = ["center", "radius", "volume", "boundary", "conductance", "threshold"]


def sweep_csv(results: Iterable[BallSweepResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_CSV_HEADER)
    for res in results:
        w.writerows(res.csv_rows())
    return buf.getvalue()


def ball_trace(g: Graph, center: int, max_radius: int, dist_field: DistanceField | None = None) -> list[RadiusStats]:
    """Stats of B(center, i) for i = 0..max_radius.

    Each layer is added vertex by vertex: an edge to a vertex already in
    the ball stops being boundary, any other edge becomes boundary.  Total
    work is O(edges inside B(center, max_radius)).
    """
    fld = dist_field if dist_field is not None else bfs(g, center)
    dist = fld.dist
    order = np.argsort(dist, kind="stable")
    layer_end = np.searchsorted(dist[order], np.arange(max_radius + 1), side="right")
    inside = np.zeros(g.n, dtype=bool)
    indptr, indices, degree = g.indptr, g.indices, g.degree
    vol_total = g.volume_total
    vol = bnd = 0
    pos = 0
    out = []
    for i in range(max_radius + 1):
        end = int(layer_end[i])
        for u in order[pos:end].tolist():
            vol += int(degree[u])
            nb = indices[indptr[u]:indptr[u + 1]]
            internal = int(np.count_nonzero(inside[nb]))
            bnd += len(nb) - 2 * internal
            inside[u] = True
        pos = end
        out.append(RadiusStats(i, end, vol, bnd, min(vol, vol_total - vol)))
    return out


def sweep_threshold(n: int, budget_radius: int) -> float:
    return 4.0 * math.log(n) / budget_radius


def sweep_ball(g: Graph, center: int, budget_radius: int) -> BallSweepResult:
    """Smallest radius i < R whose ball has conductance <= 4 ln(n) / R.

    Requires vol(B(center, R)) <= vol(V) / 2; under that hypothesis the
    volume growth argument guarantees a qualifying radius, so not finding
    one raises :class:`InvariantViolation`.
    """
    R = int(budget_radius)
    if R < 1:
        raise ValueError("budget radius must be >= 1")
    fld = bfs(g, center)
    trace = ball_trace(g, center, R, fld)
    if 2 * trace[R].volume > g.volume_total:
        raise SweepHypothesisError(
            f"sweep hypothesis violated: vol(B({center},{R}))={trace[R].volume} > vol(V)/2={g.volume_total / 2}"
        )
    threshold = sweep_threshold(g.n, R)
    for s in trace[:R]:
        if s.conductance <= threshold:
            members = tuple(np.flatnonzero(fld.dist <= s.radius).tolist())
            return BallSweepResult(center, R, s.radius, threshold, tuple(trace[: s.radius + 1]), members)
    raise InvariantViolation(f"no radius below {R} around {center} meets threshold {threshold}")


# --------------------------------------------------------------------------
# exhaustive k-way conductance


@dataclass(frozen=True)
class PhiKResult:
    value: float
    fraction: Fraction
    sets: tuple[tuple[int, ...], ...]
    assignment: tuple[int, ...]  # 0 = unassigned, j = member of S_j


def brute_force_phi_k(g: Graph, k: int, cap: int = DEFAULT_BRUTE_FORCE_CAP, chunk: int = 1 << 16) -> PhiKResult:
    """min over disjoint nonempty S_1..S_k of max_j phi(S_j), by enumeration.

    Assignments are enumerated in lexicographic order (vertex 0 most
    significant), so the first minimiser found is the lexicographically
    smallest.  Conductance is b/v with small integers; IEEE division is
    correctly rounded, so equal ratios compare equal as floats.
    """
    n = g.n
    if n > cap:
        raise BudgetExceededError(f"brute force phi_k capped at n={cap}, got {n}")
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}, n={n}")
    base = k + 1
    total = base**n
    weights = base ** np.arange(n - 1, -1, -1, dtype=np.int64)
    deg = g.degree.astype(np.int64)
    e = g.edge_array()
    vol_total = g.volume_total
    best_val = math.inf
    best_code = -1
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = (codes[:, None] // weights[None, :]) % base
        worst = np.zeros(len(codes))
        valid = np.ones(len(codes), dtype=bool)
        for j in range(1, base):
            mask = digits == j
            valid &= mask.any(axis=1)
            vol = mask.astype(np.int64) @ deg
            bnd = np.count_nonzero(mask[:, e[:, 0]] != mask[:, e[:, 1]], axis=1)
            min_vol = np.minimum(vol, vol_total - vol)
            with np.errstate(divide="ignore", invalid="ignore"):
                phi = np.where(min_vol > 0, bnd / np.where(min_vol > 0, min_vol, 1), np.inf)
            np.maximum(worst, phi, out=worst)
        worst[~valid] = np.inf
        idx = int(np.argmin(worst))
        if worst[idx] < best_val:
            best_val = float(worst[idx])
            best_code = int(codes[idx])
    assignment = tuple(int(d) for d in (best_code // weights) % base)
    sets = tuple(tuple(v for v in range(n) if assignment[v] == j) for j in range(1, base))
    frac = max(cut_stats(g, s).conductance_fraction for s in sets)
    return PhiKResult(best_val, frac, sets, assignment)
