"""Turn the ball-growing argument into a checkable certificate.

Pipeline: diameter -> k+1 landmarks spaced along a diametral geodesic ->
balls of radius R = floor(diam / 6k) -> drop at most one heavy ball ->
radius sweep around each of the k remaining centres -> k disjoint sets of
conductance <= 4 ln(n) / R -> compare against lambda_k.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .bfs import DEFAULT_APSP_BUDGET, DiameterResult, DistanceField, bfs, double_sweep_lower_bound, exact_diameter, extract_path
from .cuts import BallSweepResult, cut_stats, sweep_ball, sweep_threshold
from .errors import (
    BudgetExceededError,
    DisconnectedGraphError,
    EigensolverError,
    InvariantViolation,
    SdcError,
    TrivialRegime,
)
from .graph import Graph, is_connected
from .laplacian import DEFAULT_DENSE_CAP, DEFAULT_TOL, SpectrumResult, smallest_k

FLOAT_GUARD = 1e-9
BOUND_CONSTANT = 48


def _leq(lhs: float, rhs: float) -> bool:
    return lhs <= rhs + FLOAT_GUARD * max(1.0, abs(rhs))


def _compare(lhs, rhs, op: str) -> bool:
    exact = isinstance(lhs, (int, np.integer)) and isinstance(rhs, (int, np.integer))
    if op == "<=":
        return lhs <= rhs if exact else _leq(float(lhs), float(rhs))
    if op == "<":
        return lhs < rhs
    if op == "==":
        return lhs == rhs
    raise ValueError(f"unknown comparison {op!r}")


@dataclass(frozen=True)
class Check:
    name: str
    lhs: float | int
    rhs: float | int
    op: str
    passed: bool

    @classmethod
    def evaluate(cls, name: str, lhs, rhs, op: str = "<=") -> Check:
        return cls(name, lhs, rhs, op, _compare(lhs, rhs, op))

    def to_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "op": self.op, "pass": self.passed}


# --------------------------------------------------------------------------
# landmarks and sets


@dataclass(frozen=True)
class LandmarkSet:
    path: tuple[int, ...]
    landmarks: tuple[int, ...]
    spacing: int
    pairwise_min_distance: int
    fields: tuple[DistanceField, ...] = field(repr=False, compare=False, default=())


def select_landmarks(g: Graph, diam_result: DiameterResult, k: int) -> LandmarkSet:
    """k+1 vertices at path indices i * floor(diam / k) along a geodesic
    between the diametral endpoints."""
    if k < 2:
        raise ValueError("k must be >= 2")
    D = diam_result.diameter
    if D < k:
        raise TrivialRegime(f"diameter {D} < k={k}: landmark spacing would be 0")
    start = bfs(g, diam_result.endpoint_a)
    if start.dist[diam_result.endpoint_b] != D:
        raise InvariantViolation("diameter endpoints are not at the recorded distance")
    path = extract_path(start, diam_result.endpoint_b)
    spacing = D // k
    landmarks = tuple(path[i * spacing] for i in range(k + 1))
    fields = tuple(bfs(g, v) for v in landmarks)
    min_dist = min(int(fields[i].dist[landmarks[j]]) for i in range(k + 1) for j in range(i + 1, k + 1))
    if min_dist < D // (2 * k):
        raise InvariantViolation(f"landmarks only {min_dist} apart, need {D // (2 * k)}")
    return LandmarkSet(tuple(path), landmarks, spacing, min_dist, fields)


@dataclass(frozen=True)
class DroppedLandmark:
    vertex: int
    ball_volume: int
    exceeded_half_volume: bool

    def to_dict(self) -> dict:
        return {
            "vertex": self.vertex,
            "ball_volume": self.ball_volume,
            "exceeded_half_volume": self.exceeded_half_volume,
        }


def budget_radius(diameter: int, k: int) -> int:
    return diameter // (6 * k)


def grow_disjoint_sets(
    g: Graph, landmarks: LandmarkSet, k: int, diam: int
) -> tuple[list[BallSweepResult], DroppedLandmark]:
    """Sweep k of the k+1 landmark balls down to low-conductance sets.

    The landmark whose radius-R ball holds more than half the volume is
    dropped; if none does, v_0 is dropped.
    """
    R = budget_radius(diam, k)
    if R < 1:
        raise TrivialRegime(f"budget radius floor({diam}/{6 * k}) is 0")
    fields = landmarks.fields or tuple(bfs(g, v) for v in landmarks.landmarks)
    vols = [int(g.degree[f.dist <= R].sum()) for f in fields]
    heavy = [i for i, vol in enumerate(vols) if 2 * vol > g.volume_total]
    if len(heavy) > 1:
        raise InvariantViolation(f"{len(heavy)} disjoint balls exceed half the volume")
    drop = heavy[0] if heavy else 0
    dropped = DroppedLandmark(landmarks.landmarks[drop], vols[drop], bool(heavy))
    sweeps = [sweep_ball(g, v, R) for i, v in enumerate(landmarks.landmarks) if i != drop]
    seen: set[int] = set()
    for s in sweeps:
        if seen.intersection(s.members):
            raise InvariantViolation("swept sets overlap")
        seen.update(s.members)
    return sweeps, dropped


# --------------------------------------------------------------------------
# certificate


@dataclass(frozen=True)
class CertifiedSet:
    center: int
    radius: int
    members: tuple[int, ...]
    volume: int
    boundary: int
    conductance: float

    def to_dict(self) -> dict:
        return {
            "center": self.center,
            "radius": self.radius,
            "members": list(self.members),
            "volume": self.volume,
            "boundary": self.boundary,
            "conductance": self.conductance,
        }


@dataclass(frozen=True)
class LambdaRecord:
    value: float
    k: int
    method: str
    tol: float
    seed: int
    residual: float

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "k": self.k,
            "method": self.method,
            "tol": self.tol,
            "seed": self.seed,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class DiameterCertificate:
    n: int
    k: int
    diameter: DiameterResult
    budget_radius: int
    trivial_regime: bool
    landmarks: tuple[int, ...]
    dropped_landmark: DroppedLandmark | None
    sets: tuple[CertifiedSet, ...]
    phi_max: float | None
    lam: LambdaRecord
    checks: tuple[Check, ...]
    config: dict = field(default_factory=dict, compare=False)

    @property
    def exact(self) -> bool:
        return self.diameter.exact

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "tool": {"name": "sdcert", "version": __version__},
            "config": self.config,
            "n": self.n,
            "k": self.k,
            "diameter": self.diameter.to_dict(),
            "R": self.budget_radius,
            "trivial_regime": self.trivial_regime,
            "landmarks": list(self.landmarks),
            "dropped_landmark": None if self.dropped_landmark is None else self.dropped_landmark.to_dict(),
            "sets": [s.to_dict() for s in self.sets],
            "phi_max": self.phi_max,
            "lambda": self.lam.to_dict(),
            "checks": [c.to_dict() for c in self.checks],
        }

    @classmethod
    def from_dict(cls, d: dict) -> DiameterCertificate:
        """Rebuild without re-deriving anything; verification is separate."""
        dm = d["diameter"]
        dl = d.get("dropped_landmark")
        lam = d["lambda"]
        return cls(
            n=int(d["n"]),
            k=int(d["k"]),
            diameter=DiameterResult(int(dm["value"]), int(dm["endpoints"][0]), int(dm["endpoints"][1]), dm["mode"]),
            budget_radius=int(d["R"]),
            trivial_regime=bool(d["trivial_regime"]),
            landmarks=tuple(int(v) for v in d.get("landmarks", [])),
            dropped_landmark=None
            if dl is None
            else DroppedLandmark(int(dl["vertex"]), int(dl["ball_volume"]), bool(dl["exceeded_half_volume"])),
            sets=tuple(
                CertifiedSet(
                    int(s["center"]),
                    int(s["radius"]),
                    tuple(int(v) for v in s["members"]),
                    int(s["volume"]),
                    int(s["boundary"]),
                    float(s["conductance"]),
                )
                for s in d["sets"]
            ),
            phi_max=None if d["phi_max"] is None else float(d["phi_max"]),
            lam=LambdaRecord(
                float(lam["value"]), int(lam["k"]), lam["method"], float(lam["tol"]), int(lam["seed"]), float(lam["residual"])
            ),
            checks=tuple(
                Check(c["name"], c["lhs"], c["rhs"], c.get("op", "<="), bool(c["pass"])) for c in d["checks"]
            ),
            config=d.get("config", {}),
        )

    def with_lambda(self, value: float) -> DiameterCertificate:
        return replace(self, lam=replace(self.lam, value=float(value)))


def bound_rhs(n: int, k: int) -> float:
    return BOUND_CONSTANT * k * math.log(n)


def _chain_checks(n, k, D, lam, R, sets_phi, trivial):
    checks = [Check.evaluate("lambda_nonnegative", 0.0, lam), Check.evaluate("lambda_at_most_2", lam, 2.0)]
    if trivial:
        checks.append(Check.evaluate("diameter_below_6k", D, 6 * k, "<"))
    else:
        phi_max = max(sets_phi)
        threshold = sweep_threshold(n, R)
        for i, phi in enumerate(sets_phi):
            checks.append(Check.evaluate(f"set_{i}_conductance_threshold", phi, threshold))
        checks.append(Check.evaluate("lambda_le_2phi_max", lam, 2.0 * phi_max))
        if D >= 12 * k:
            checks.append(Check.evaluate("phi_max_vs_diameter", phi_max, BOUND_CONSTANT * k * math.log(n) / D))
    checks.append(Check.evaluate("diameter_bound", D * lam, bound_rhs(n, k)))
    return checks


def build_certificate(
    g: Graph,
    k: int,
    diam_mode: str = "exact",
    apsp_budget: int = DEFAULT_APSP_BUDGET,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    max_iter: int | None = None,
    dense_cap: int = DEFAULT_DENSE_CAP,
    invert: bool | None = None,
    spectrum: SpectrumResult | None = None,
    diameter: DiameterResult | None = None,
    config: dict | None = None,
) -> DiameterCertificate:
    """Run the full construction on ``g`` and record every inequality.

    ``spectrum`` / ``diameter`` may be passed in to reuse work across k; the
    spectrum must hold at least ``k`` eigenvalues.  ``max_iter`` defaults
    to ``n`` so the Lanczos solve cannot stop short on long paths.
    """
    n = g.n
    if n < 2:
        raise ValueError("need n >= 2")
    if not 2 <= k < n:
        raise ValueError(f"need 2 <= k < n, got k={k}, n={n}")
    if not is_connected(g):
        raise DisconnectedGraphError("graph is not connected")

    if diameter is None:
        if diam_mode == "exact":
            diameter = exact_diameter(g, budget=apsp_budget)
        elif diam_mode in ("doublesweep", "lower_bound"):
            diameter = double_sweep_lower_bound(g, seed=seed)
        else:
            raise ValueError(f"unknown diameter mode {diam_mode!r}")
    if spectrum is None:
        spectrum = smallest_k(g, k, tol=tol, seed=seed, max_iter=max_iter or n, dense_cap=dense_cap, invert=invert)
    if len(spectrum.eigenvalues) < k:
        raise ValueError(f"spectrum holds {len(spectrum.eigenvalues)} eigenvalues, need {k}")
    lam_value = float(spectrum.eigenvalues[k - 1])
    lam_resid = float(spectrum.residual_norms[k - 1])
    if lam_resid > spectrum.tol:
        raise EigensolverError(f"lambda_{k} residual {lam_resid:.3e} above tol {spectrum.tol:g}")
    lam = LambdaRecord(lam_value, k, spectrum.method, float(spectrum.tol), int(spectrum.seed), lam_resid)

    D = diameter.diameter
    R = budget_radius(D, k)
    trivial = R < 1
    sets: tuple[CertifiedSet, ...] = ()
    dropped = None
    landmark_ids: tuple[int, ...] = ()
    phi_max = None
    if not trivial:
        marks = select_landmarks(g, diameter, k)
        landmark_ids = marks.landmarks
        sweeps, dropped = grow_disjoint_sets(g, marks, k, D)
        sets = tuple(
            CertifiedSet(s.center, s.chosen_radius, s.members, s.stats.volume, s.stats.boundary_edges, s.stats.conductance)
            for s in sweeps
        )
        phi_max = max(s.conductance for s in sets)
    checks = []
    if not trivial:
        checks.append(Check.evaluate("sets_pairwise_disjoint", _overlap(sets), 0, "=="))
        for i, s in enumerate(sets):
            checks.append(Check.evaluate(f"set_{i}_radius_below_budget", s.radius, R, "<"))
    checks += _chain_checks(n, k, D, lam_value, R, [s.conductance for s in sets], trivial)
    return DiameterCertificate(
        n=n,
        k=k,
        diameter=diameter,
        budget_radius=R,
        trivial_regime=trivial,
        landmarks=landmark_ids,
        dropped_landmark=dropped,
        sets=sets,
        phi_max=phi_max,
        lam=lam,
        checks=tuple(checks),
        config=dict(config or {}),
    )


def _overlap(sets) -> int:
    """Number of vertices claimed by more than one set."""
    counts: dict[int, int] = {}
    for s in sets:
        for v in s.members:
            counts[v] = counts.get(v, 0) + 1
    return sum(1 for c in counts.values() if c > 1)


# --------------------------------------------------------------------------
# independent verification


@dataclass(frozen=True)
class VerificationItem:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    items: tuple[VerificationItem, ...]

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    @property
    def failures(self) -> list[VerificationItem]:
        return [item for item in self.items if not item.passed]

    def lines(self) -> list[str]:
        return [f"[{'PASS' if it.passed else 'FAIL'}] {it.name}{': ' + it.detail if it.detail else ''}" for it in self.items]


def verify_certificate(g: Graph, cert: DiameterCertificate, apsp_budget: int = DEFAULT_APSP_BUDGET) -> VerificationReport:
    """Re-derive everything checkable from ``g`` and the raw certificate
    fields; only lambda_k is taken on trust.  Never raises on bad content."""
    items: list[VerificationItem] = []

    def add(name, ok, detail=""):
        items.append(VerificationItem(name, bool(ok), detail))

    n, k = g.n, cert.k
    add("n_matches", cert.n == n, f"certificate n={cert.n}, graph n={n}")
    if cert.n != n:
        return VerificationReport(tuple(items))
    add("k_valid", 2 <= k < n, f"k={k}")
    connected = is_connected(g)
    add("graph_connected", connected)
    if not connected or not 2 <= k < n:
        return VerificationReport(tuple(items))

    D = cert.diameter.diameter
    a, b = cert.diameter.endpoint_a, cert.diameter.endpoint_b
    if 0 <= a < n and 0 <= b < n:
        witnessed = int(bfs(g, a).dist[b])
        add("diameter_witness", witnessed == D, f"dist({a},{b})={witnessed}, recorded {D}")
    else:
        add("diameter_witness", False, "endpoint out of range")
    if cert.diameter.mode == "exact":
        try:
            true_d = exact_diameter(g, budget=apsp_budget).diameter
            add("diameter_exact", true_d == D, f"recomputed {true_d}, recorded {D}")
        except BudgetExceededError as exc:
            add("diameter_exact", False, str(exc))
    else:
        add("diameter_mode", cert.diameter.mode == "lower_bound", f"mode={cert.diameter.mode} (non-exact certificate)")

    R = budget_radius(D, k)
    add("budget_radius", cert.budget_radius == R, f"recorded {cert.budget_radius}, floor(D/6k)={R}")
    trivial = R < 1
    add("trivial_regime_flag", cert.trivial_regime == trivial)

    lam = cert.lam.value
    add("lambda_index", cert.lam.k == k, f"lambda index {cert.lam.k}")
    add("lambda_residual", cert.lam.residual <= cert.lam.tol, f"{cert.lam.residual:.3e} <= {cert.lam.tol:g}")

    phis: list[float] = []
    if trivial:
        add("no_sets", len(cert.sets) == 0)
    else:
        add("set_count", len(cert.sets) == k, f"{len(cert.sets)} sets for k={k}")
        for i, s in enumerate(cert.sets):
            valid = 0 <= s.center < n and all(0 <= v < n for v in s.members) and s.radius >= 0
            if not valid:
                add(f"set_{i}_ids_valid", False)
                continue
            ball_members = tuple(np.flatnonzero(bfs(g, s.center).dist <= s.radius).tolist())
            add(f"set_{i}_ball_membership", tuple(sorted(set(s.members))) == ball_members and len(s.members) == len(ball_members))
            add(f"set_{i}_radius_below_budget", s.radius < R, f"r={s.radius}, R={R}")
            try:
                st = cut_stats(g, s.members)
            except SdcError as exc:
                add(f"set_{i}_stats", False, str(exc))
                continue
            same = st.volume == s.volume and st.boundary_edges == s.boundary and math.isclose(
                st.conductance, s.conductance, rel_tol=1e-12, abs_tol=0.0
            )
            add(f"set_{i}_stats", same, f"recomputed vol={st.volume} bnd={st.boundary_edges} phi={st.conductance!r}")
            add(f"set_{i}_conductance_threshold", _leq(st.conductance, sweep_threshold(n, R)))
            phis.append(st.conductance)
        add("sets_pairwise_disjoint", _overlap(cert.sets) == 0)
        if phis:
            true_max = max(phis)
            recorded = cert.phi_max if cert.phi_max is not None else math.nan
            add("phi_max", math.isclose(recorded, true_max, rel_tol=1e-12), f"recorded {recorded!r}, recomputed {true_max!r}")
        else:
            add("phi_max", False, "no valid sets")

    for c in _chain_checks(n, k, D, lam, R, phis or [math.inf], trivial):
        if c.name.startswith("set_"):
            continue
        add(c.name, c.passed, f"{c.lhs!r} {c.op} {c.rhs!r}")
    add("recorded_checks_pass", all(c.passed for c in cert.checks))
    return VerificationReport(tuple(items))
