"""Normalized Laplacian operator and eigensolvers for its smallest eigenvalues.

``L = I - D^{-1/2} A D^{-1/2}``.  For a connected graph the kernel is
spanned by ``D^{1/2} 1``, which the Lanczos solver deflates explicitly.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from . import kernels
from .errors import BudgetExceededError, DisconnectedGraphError, EigensolverError
from .graph import Graph, is_connected

log = logging.getLogger(__name__)

DEFAULT_DENSE_CAP = 512
DEFAULT_TOL = 1e-10
JACOBI_TOL = 1e-12
BREAKDOWN = 1e-12
# factor nonzeros allowed per nonzero of L before the inverse mode is skipped
FILL_RATIO = 20


class LaplacianOperator:
    """Matrix-free ``L`` acting on length-``n`` vectors in O(n + m)."""

    def __init__(self, graph: Graph):
        self.graph = graph
        deg = graph.degree.astype(np.float64)
        inv = np.zeros_like(deg)
        np.divide(1.0, np.sqrt(deg), out=inv, where=deg > 0)
        inv.setflags(write=False)
        self.inv_sqrt_degree = inv

    @property
    def n(self) -> int:
        return self.graph.n

    def apply(self, x) -> np.ndarray:
        x = np.ascontiguousarray(x, dtype=np.float64)
        if x.shape != (self.n,):
            raise ValueError(f"expected a vector of length {self.n}, got shape {x.shape}")
        g = self.graph
        return kernels.laplacian_apply(g.indptr, g.indices, self.inv_sqrt_degree, x)

    __matmul__ = apply

    def kernel_vector(self) -> np.ndarray:
        """Unit vector along ``D^{1/2} 1``."""
        z = np.sqrt(self.graph.degree.astype(np.float64))
        return z / np.linalg.norm(z)

    def to_dense(self) -> np.ndarray:
        g = self.graph
        s = self.inv_sqrt_degree
        mat = np.eye(g.n)
        rows = np.repeat(np.arange(g.n), g.degree)
        mat[rows, g.indices] -= s[rows] * s[g.indices]
        return mat

    def residual(self, x: np.ndarray, lam: float) -> float:
        return float(np.linalg.norm(self.apply(x) - lam * x) / np.linalg.norm(x))

    def to_sparse(self) -> scipy.sparse.csr_matrix:
        g = self.graph
        s = self.inv_sqrt_degree
        rows = np.repeat(np.arange(g.n), g.degree)
        off = scipy.sparse.csr_matrix((-s[rows] * s[g.indices], (rows, g.indices)), shape=(g.n, g.n))
        return (off + scipy.sparse.identity(g.n, format="csr")).tocsr()

    # Lanczos hooks: eigenvalues of this operator are the eigenvalues of L
    def to_lambda(self, theta):
        return theta

    def estimate_scale(self, theta):
        return np.ones_like(theta)


class GroundedInverse:
    """``-L^+`` on the complement of ``D^{1/2} 1`` for a connected graph.

    Deleting one row and column of ``L`` leaves a nonsingular matrix; a
    solve with it, padded with a zero and projected off the kernel vector,
    applies the pseudo-inverse.  Eigenvalue ``lam`` maps to ``-1 / lam``, so
    the tightly clustered bottom of the spectrum becomes well separated.
    """

    def __init__(self, op: LaplacianOperator, fill_ratio: float = FILL_RATIO):
        self.base = op
        mat = op.to_sparse()
        self.ground = int(np.argmax(op.graph.degree))
        keep = np.flatnonzero(np.arange(op.n) != self.ground)
        self._keep = keep
        sub = mat[keep][:, keep].tocsc()
        lu = scipy.sparse.linalg.splu(sub)
        fill = lu.L.nnz + lu.U.nnz
        if fill > fill_ratio * mat.nnz:
            raise BudgetExceededError(f"LU fill {fill} exceeds {fill_ratio} x nnz(L) = {fill_ratio * mat.nnz}")
        self._lu = lu
        self._z = op.kernel_vector()

    @property
    def n(self) -> int:
        return self.base.n

    def apply(self, x) -> np.ndarray:
        y = np.zeros(self.n)
        y[self._keep] = self._lu.solve(np.asarray(x, dtype=np.float64)[self._keep])
        y -= (self._z @ y) * self._z
        return -y

    def to_lambda(self, theta):
        return -1.0 / np.asarray(theta)

    def residual(self, x: np.ndarray, theta: float) -> float:
        return self.base.residual(x, float(self.to_lambda(theta)))

    def estimate_scale(self, theta):
        # an L-residual is about |lam| * ||L|| times the residual seen here
        return 2.0 * np.abs(self.to_lambda(theta))


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    residual_norms: np.ndarray
    method: str  # "dense" or "lanczos"
    iterations: int
    seed: int
    tol: float
    vectors: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.eigenvalues)

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "residuals": [float(r) for r in self.residual_norms],
            "method": self.method,
            "iterations": int(self.iterations),
            "seed": int(self.seed),
            "tol": float(self.tol),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def dense_spectrum(g: Graph, cap: int = DEFAULT_DENSE_CAP, tol: float = JACOBI_TOL) -> SpectrumResult:
    """All eigenvalues of ``L`` by cyclic Jacobi on the explicit matrix."""
    if g.n > cap:
        raise BudgetExceededError(f"dense spectrum capped at n={cap}, got n={g.n}")
    op = LaplacianOperator(g)
    diag, vecs, sweeps, off = kernels.jacobi(op.to_dense(), tol, 100, True)
    if off >= tol:
        raise EigensolverError(f"Jacobi stalled with off-diagonal norm {off:.3e}", iterations=sweeps)
    order = np.argsort(diag, kind="stable")
    vals = diag[order]
    vecs = vecs[:, order]
    resid = np.array([op.residual(vecs[:, i], vals[i]) for i in range(g.n)])
    if vals[-1] > 2.0 + 1e-10 or vals[0] < -1e-10:
        raise EigensolverError(f"spectrum [{vals[0]}, {vals[-1]}] outside [0, 2]")
    return SpectrumResult(vals, resid, "dense", sweeps, 0, tol, vecs)


def default_max_iter(n: int, k: int) -> int:
    return min(n, 4 * (k + 2) * math.ceil(math.log(n)) + 100)


def _ritz(alpha, beta):
    d = np.array(alpha, dtype=np.float64)
    e = np.zeros(len(alpha))
    e[: len(beta)] = beta
    vals, last = kernels.tql_last(d, e)
    order = np.argsort(vals, kind="stable")
    return vals[order], last[order]


def lanczos_smallest_k(
    op: LaplacianOperator,
    k: int,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    max_iter: int | None = None,
    invert: bool | None = None,
) -> SpectrumResult:
    """The ``k`` smallest eigenvalues of ``L`` for a connected graph.

    Slot 0 is the known zero eigenvalue; its eigenvector ``D^{1/2} 1`` is
    deflated from every Lanczos vector.  The other ``k - 1`` come from
    Lanczos with full reorthogonalisation, tracking ``k + 1`` Ritz pairs.

    A single Krylov sequence sees one copy of each repeated eigenvalue, so
    the solver runs in rounds: after a round converges its Ritz vectors are
    locked and deflated, and a fresh round starts from a new random vector.
    Rounds stop once one finds nothing below the current ``k``-th value.
    Within a round, an invariant Krylov space (breakdown) triggers a restart
    from a random vector orthogonal to everything seen so far.

    ``invert`` runs the iteration on :class:`GroundedInverse` instead of
    ``L``; ``None`` tries it and falls back to ``L`` when the sparse factor
    is too dense.  ``max_iter`` bounds the Lanczos steps of each round.
    Converged means every reported pair has explicit residual
    ``||L x - lam x|| / ||x|| <= tol``.
    """
    n = op.n
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    if not is_connected(op.graph):
        raise DisconnectedGraphError("Lanczos deflation assumes a connected graph")
    if max_iter is None:
        max_iter = default_max_iter(n, k)
    z = op.kernel_vector()
    zero_resid = op.residual(z, 0.0)
    if k == 1:
        return SpectrumResult(np.zeros(1), np.array([zero_resid]), "lanczos", 0, seed, tol, z[:, None])

    target = op
    if invert or invert is None:
        try:
            target = GroundedInverse(op)
        except BudgetExceededError:
            if invert:
                raise
    method = "lanczos" if target is op else "lanczos-inverse"

    wanted = k - 1
    rng = np.random.default_rng(seed)
    locked_vals = np.empty(0)
    locked_vecs = np.empty((0, n))
    deflate = z[None, :]
    total_steps = 0
    while True:
        room = n - deflate.shape[0]
        if room <= 0:
            break
        vals, vecs, steps, exhausted = _lanczos_round(target, deflate, wanted, tol, rng, min(max_iter, room))
        total_steps += steps
        if len(locked_vals) >= wanted and (len(vals) == 0 or vals[0] >= locked_vals[wanted - 1] - tol):
            break
        locked_vals = np.concatenate([locked_vals, vals])
        locked_vecs = np.vstack([locked_vecs, vecs.T])
        order = np.argsort(locked_vals, kind="stable")
        locked_vals, locked_vecs = locked_vals[order], locked_vecs[order]
        if exhausted:
            break
        deflate = np.vstack([z[None, :], locked_vecs])
    if len(locked_vals) < wanted:
        raise EigensolverError(f"only {len(locked_vals)} of {wanted} eigenpairs found", iterations=total_steps)
    vals = target.to_lambda(locked_vals[:wanted])
    x = locked_vecs[:wanted].T
    resid = np.array([op.residual(x[:, i], vals[i]) for i in range(wanted)])
    return SpectrumResult(
        np.concatenate([[0.0], vals]),
        np.concatenate([[zero_resid], resid]),
        method,
        total_steps,
        seed,
        tol,
        np.column_stack([z, x]),
    )


def _lanczos_round(op, deflate, wanted, tol, rng, limit):
    """One Lanczos run on the complement of the rows of ``deflate``.

    Returns ``(values, vectors, steps, exhausted)`` for up to ``wanted``
    smallest converged Ritz pairs; ``exhausted`` means the run spanned the
    whole remaining space, so the values are the complete remaining spectrum.
    """
    n = op.n
    tracked = min(wanted + 2, limit)

    def project(v, basis):
        for _ in range(2):
            v -= (deflate @ v) @ deflate
            if len(basis):
                v -= (basis @ v) @ basis
        return v

    def fresh(basis):
        v = project(rng.uniform(-1.0, 1.0, n), basis)
        return v / np.linalg.norm(v)

    cap = min(limit, max(64, 4 * tracked))
    V = np.empty((cap, n))
    alpha: list[float] = []
    beta: list[float] = []
    v = fresh(V[:0])
    next_check = tracked
    best = np.inf
    for j in range(limit):
        if j == cap:
            cap = min(limit, 2 * cap)
            V = np.vstack([V, np.empty((cap - V.shape[0], n))])
        V[j] = v
        w = op.apply(v)
        a = float(v @ w)
        w -= a * v
        if j > 0:
            w -= beta[-1] * V[j - 1]
        basis = V[: j + 1]
        w = project(w, basis)
        b = float(np.linalg.norm(w))
        alpha.append(a)
        m = j + 1
        exhausted = m == limit
        # never conclude at a breakdown: the next block may hold more copies
        if (m >= next_check or exhausted) and (b > BREAKDOWN or exhausted):
            next_check = m + max(5, m // 10)
            ritz, last = _ritz(alpha, beta)
            count = min(wanted, m)
            estimate = np.abs(b * last[:count]) * op.estimate_scale(ritz[:count])
            if exhausted or np.all(estimate <= tol):
                vals, resid, vecs = _ritz_pairs(op, basis, alpha, beta, count)
                best = min(best, float(resid.max()))
                if np.all(resid <= tol):
                    log.debug("lanczos round converged after %d steps", m)
                    return vals, vecs, m, exhausted and m == n - deflate.shape[0]
        if exhausted:
            break
        if b <= BREAKDOWN:
            beta.append(0.0)
            v = fresh(basis)
        else:
            beta.append(b)
            v = w / b
    raise EigensolverError(
        f"Lanczos did not reach tol={tol:g} within {limit} steps (best residual {best:.3e})",
        residuals=best,
        iterations=len(alpha),
    )


def _ritz_pairs(op, basis, alpha, beta, count):
    m = len(alpha)
    if m == 1:
        vals = np.array(alpha)
        s = np.ones((1, 1))
    else:
        vals, s = scipy.linalg.eigh_tridiagonal(
            np.array(alpha), np.array(beta[: m - 1]), select="i", select_range=(0, count - 1)
        )
    x = basis.T @ s
    x /= np.linalg.norm(x, axis=0)
    resid = np.array([op.residual(x[:, i], vals[i]) for i in range(x.shape[1])])
    return vals, resid, x


def smallest_k(
    g: Graph,
    k: int,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    max_iter: int | None = None,
    dense_cap: int = DEFAULT_DENSE_CAP,
    invert: bool | None = None,
) -> SpectrumResult:
    """``k`` smallest eigenvalues: dense Jacobi up to ``dense_cap``
    vertices, Lanczos beyond (``invert`` as in :func:`lanczos_smallest_k`)."""
    if g.n <= dense_cap:
        full = dense_spectrum(g, cap=dense_cap)
        return SpectrumResult(
            full.eigenvalues[:k].copy(),
            full.residual_norms[:k].copy(),
            "dense",
            full.iterations,
            seed,
            tol,
            full.vectors[:, :k],
        )
    return lanczos_smallest_k(LaplacianOperator(g), k, tol=tol, seed=seed, max_iter=max_iter, invert=invert)
