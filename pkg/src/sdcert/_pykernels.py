"""Pure Python / numpy versions of the compiled kernels.

Signatures and outputs match ``_kernels`` exactly (up to float rounding in
``jacobi``, which uses a round-robin rotation order so each round can be
vectorised).
"""
from __future__ import annotations

import math

import numpy as np

BACKEND = "python"


def _bfs_lists(indptr, indices, n, source):
    dist = [-1] * n
    parent = [-1] * n
    dist[source] = 0
    parent[source] = source
    queue = [source]
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for j in range(indptr[u], indptr[u + 1]):
            w = indices[j]
            if dist[w] < 0:
                dist[w] = du
                parent[w] = u
                queue.append(w)
    return dist, parent, len(queue)


def bfs(indptr, indices, source):
    n = len(indptr) - 1
    dist, parent, _ = _bfs_lists(indptr.tolist(), indices.tolist(), n, int(source))
    return np.asarray(dist, dtype=np.int64), np.asarray(parent, dtype=np.int64)


def eccentricities(indptr, indices, nthreads=1):
    n = len(indptr) - 1
    ip = indptr.tolist()
    ix = indices.tolist()
    ecc = np.empty(n, dtype=np.int64)
    far = np.empty(n, dtype=np.int64)
    for s in range(n):
        dist, _, reached = _bfs_lists(ip, ix, n, s)
        best = max(dist)
        far[s] = dist.index(best)
        ecc[s] = best if reached == n else -1
    return ecc, far


def laplacian_apply(indptr, indices, inv_sqrt_deg, x):
    n = len(indptr) - 1
    rows = np.repeat(np.arange(n), np.diff(indptr))
    scaled = inv_sqrt_deg * x
    gathered = np.bincount(rows, weights=scaled[indices], minlength=n)
    return x - inv_sqrt_deg * gathered


def _round_robin(m):
    # circle method: m even, m - 1 rounds of m/2 disjoint pairs
    players = list(range(m))
    for _ in range(m - 1):
        half = m // 2
        p = np.array(players[:half])
        q = np.array(players[half:][::-1])
        yield np.minimum(p, q), np.maximum(p, q)
        players = [players[0]] + [players[-1]] + players[1:-1]


def _off_norm(a):
    # sum the off-diagonal squares directly; ||A||^2 - ||diag||^2 cancels badly
    off = a - np.diag(np.diag(a))
    return math.sqrt(float(np.sum(off * off)))


def jacobi(a, tol=1e-12, max_sweeps=100, want_vectors=True):
    n = a.shape[0]
    m = n + (n % 2)
    work = np.zeros((m, m))
    work[:n, :n] = a
    vec = np.eye(m)
    off = _off_norm(work)
    sweeps = 0
    while off >= tol and sweeps < max_sweeps and n > 1:
        sweeps += 1
        for p, q in _round_robin(m):
            apq = work[p, q]
            live = apq != 0.0
            if not live.any():
                continue
            p, q, apq = p[live], q[live], apq[live]
            theta = (work[q, q] - work[p, p]) / (2.0 * apq)
            with np.errstate(over="ignore"):
                t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            big = np.abs(theta) > 1e150
            t[big] = 0.5 / theta[big]
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            rp = work[p].copy()
            rq = work[q].copy()
            work[p] = c[:, None] * rp - s[:, None] * rq
            work[q] = s[:, None] * rp + c[:, None] * rq
            cp = work[:, p].copy()
            cq = work[:, q].copy()
            work[:, p] = cp * c - cq * s
            work[:, q] = cp * s + cq * c
            work[p, q] = 0.0
            work[q, p] = 0.0
            if want_vectors:
                vp = vec[:, p].copy()
                vq = vec[:, q].copy()
                vec[:, p] = vp * c - vq * s
                vec[:, q] = vp * s + vq * c
        off = _off_norm(work)
    diag = np.diag(work)[:n].copy()
    vectors = vec[:n, :n].copy() if want_vectors else None
    return diag, vectors, sweeps, off


def tql_last(d, e, max_iter=60):
    d = [float(v) for v in d]
    e = [float(v) for v in e]
    n = len(d)
    if n == 0:
        return np.zeros(0), np.zeros(0)
    eps = 2.220446049250313e-16
    z = [0.0] * n
    z[n - 1] = 1.0
    e[n - 1] = 0.0
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                raise ArithmeticError("tridiagonal QL did not converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = c = 1.0
            p = 0.0
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zf = z[i + 1]
                z[i + 1] = s * z[i] + c * zf
                z[i] = c * z[i] - s * zf
                i -= 1
            if r == 0.0 and i >= l:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.asarray(d), np.asarray(z)
