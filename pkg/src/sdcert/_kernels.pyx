# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: BFS, all-pairs eccentricity, Laplacian matvec,
round-robin Jacobi and tridiagonal QL.

Every function here has a twin with an identical signature in
``_pykernels``; ``sdcert.kernels`` picks one at import time.
"""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange, parallel
from libc.math cimport sqrt, fabs, hypot
from libc.stdlib cimport malloc, free

cnp.import_array()

ctypedef cnp.int64_t idx_t

BACKEND = "cython"


cdef idx_t _bfs_into(const idx_t* indptr, const idx_t* indices, idx_t n,
                     idx_t source, idx_t* dist, idx_t* parent, idx_t* queue,
                     idx_t* far) noexcept nogil:
    """BFS from ``source``; returns eccentricity (-1 if some vertex is
    unreachable) and writes the smallest-id farthest vertex to ``far``."""
    cdef idx_t i, head = 0, tail = 1, u, w, j, reached = 1
    cdef idx_t best = 0, best_v = source
    for i in range(n):
        dist[i] = -1
    dist[source] = 0
    if parent != NULL:
        parent[source] = source
    queue[0] = source
    while head < tail:
        u = queue[head]
        head += 1
        if dist[u] > best or (dist[u] == best and u < best_v):
            best = dist[u]
            best_v = u
        for j in range(indptr[u], indptr[u + 1]):
            w = indices[j]
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                if parent != NULL:
                    parent[w] = u
                queue[tail] = w
                tail += 1
                reached += 1
    far[0] = best_v
    if reached < n:
        return -1
    return best


def bfs(const idx_t[::1] indptr, const idx_t[::1] indices, idx_t source):
    cdef idx_t n = indptr.shape[0] - 1
    cdef idx_t far
    dist = np.empty(n, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    cdef idx_t[::1] d = dist
    cdef idx_t[::1] p = parent
    cdef idx_t[::1] q = queue
    with nogil:
        _bfs_into(&indptr[0], &indices[0] if indices.shape[0] else NULL, n,
                  source, &d[0], &p[0], &q[0], &far)
    return dist, parent


def eccentricities(const idx_t[::1] indptr, const idx_t[::1] indices,
                   int nthreads=1):
    """Eccentricity and smallest-id farthest vertex for every source.

    Sources are independent; with OpenMP they are spread over
    ``nthreads`` threads.  Output does not depend on the thread count.
    """
    cdef idx_t n = indptr.shape[0] - 1
    ecc = np.empty(n, dtype=np.int64)
    far = np.empty(n, dtype=np.int64)
    cdef idx_t[::1] e = ecc
    cdef idx_t[::1] f = far
    cdef const idx_t* ip = &indptr[0]
    cdef const idx_t* ix = &indices[0] if indices.shape[0] else NULL
    cdef idx_t s
    cdef idx_t* dist
    cdef idx_t* queue
    if nthreads < 1:
        nthreads = 1
    with nogil, parallel(num_threads=nthreads):
        dist = <idx_t*> malloc(n * sizeof(idx_t))
        queue = <idx_t*> malloc(n * sizeof(idx_t))
        for s in prange(n, schedule="dynamic"):
            e[s] = _bfs_into(ip, ix, n, s, dist, NULL, queue, &f[s])
        free(dist)
        free(queue)
    return ecc, far


def laplacian_apply(const idx_t[::1] indptr, const idx_t[::1] indices,
                    const double[::1] inv_sqrt_deg, const double[::1] x):
    cdef idx_t n = indptr.shape[0] - 1
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] y = out
    cdef idx_t i, j
    cdef double acc
    with nogil:
        for i in range(n):
            acc = 0.0
            for j in range(indptr[i], indptr[i + 1]):
                acc = acc + inv_sqrt_deg[indices[j]] * x[indices[j]]
            y[i] = x[i] - inv_sqrt_deg[i] * acc
    return out


cdef double _off_norm(double[:, ::1] a, idx_t n) noexcept nogil:
    cdef idx_t p, q
    cdef double acc = 0.0
    for p in range(n):
        for q in range(p + 1, n):
            acc += a[p, q] * a[p, q]
    return sqrt(2.0 * acc)


def jacobi(double[:, ::1] a, double tol=1e-12, int max_sweeps=100,
           bint want_vectors=True):
    """Cyclic Jacobi on a symmetric matrix, in place, round-robin ordering.

    One sweep is ``m - 1`` rounds (``m`` = n rounded up to even); each
    round rotates ``m / 2`` disjoint index pairs at once, so all updates
    run along contiguous rows.  Returns ``(diagonal, vectors or None,
    sweeps, off_norm)``; column j of ``vectors`` belongs to ``diagonal[j]``.
    """
    cdef idx_t n = a.shape[0]
    cdef idx_t m = n + (n % 2)
    cdef idx_t half = m // 2
    cdef idx_t r, i, k, p, q, tmp
    cdef double apq, theta, t, x, y, off
    cdef int sweeps = 0
    players_arr = np.arange(m, dtype=np.int64)
    pp_arr = np.empty(half, dtype=np.int64)
    qq_arr = np.empty(half, dtype=np.int64)
    cc_arr = np.empty(half)
    ss_arr = np.empty(half)
    cdef idx_t[::1] players = players_arr
    cdef idx_t[::1] pp = pp_arr
    cdef idx_t[::1] qq = qq_arr
    cdef double[::1] cc = cc_arr
    cdef double[::1] ss = ss_arr
    vt_arr = np.eye(n) if want_vectors else np.empty((0, 0))
    cdef double[:, ::1] vt = vt_arr
    cdef idx_t npairs
    with nogil:
        off = _off_norm(a, n)
        while off >= tol and sweeps < max_sweeps and n > 1:
            sweeps += 1
            for r in range(m - 1):
                # pairs of this round; the padding index n (odd n) is skipped
                npairs = 0
                for i in range(half):
                    p = players[i]
                    q = players[m - 1 - i]
                    if p > q:
                        p, q = q, p
                    if q >= n:
                        continue
                    apq = a[p, q]
                    if fabs(apq) < 1e-300:
                        continue
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                    if fabs(theta) > 1e150:
                        t = 0.5 / theta
                    else:
                        t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                        if theta < 0.0:
                            t = -t
                    pp[npairs] = p
                    qq[npairs] = q
                    cc[npairs] = 1.0 / sqrt(t * t + 1.0)
                    ss[npairs] = t * cc[npairs]
                    npairs += 1
                for i in range(npairs):
                    p = pp[i]
                    q = qq[i]
                    for k in range(n):
                        x = a[p, k]
                        y = a[q, k]
                        a[p, k] = cc[i] * x - ss[i] * y
                        a[q, k] = ss[i] * x + cc[i] * y
                    if want_vectors:
                        for k in range(n):
                            x = vt[p, k]
                            y = vt[q, k]
                            vt[p, k] = cc[i] * x - ss[i] * y
                            vt[q, k] = ss[i] * x + cc[i] * y
                for k in range(n):
                    for i in range(npairs):
                        p = pp[i]
                        q = qq[i]
                        x = a[k, p]
                        y = a[k, q]
                        a[k, p] = cc[i] * x - ss[i] * y
                        a[k, q] = ss[i] * x + cc[i] * y
                for i in range(npairs):
                    a[pp[i], qq[i]] = 0.0
                    a[qq[i], pp[i]] = 0.0
                # circle method: fix players[0], rotate the rest by one
                tmp = players[m - 1]
                k = m - 1
                while k > 1:
                    players[k] = players[k - 1]
                    k -= 1
                if m > 1:
                    players[1] = tmp
            off = _off_norm(a, n)
    diag = np.array([a[k, k] for k in range(n)], dtype=np.float64)
    return diag, (np.ascontiguousarray(vt_arr.T) if want_vectors else None), sweeps, off


def tql_last(double[::1] d, double[::1] e, int max_iter=60):
    """Implicit-shift QL on a symmetric tridiagonal matrix.

    ``d`` is the diagonal (length m), ``e`` the off-diagonal padded to
    length m (``e[i]`` couples rows i and i+1).  Both are overwritten.
    Returns ``(eigenvalues, last_components)`` unsorted, where
    ``last_components[j]`` is the last entry of the j-th unit eigenvector.
    Raises ``ArithmeticError`` if a split needs more than ``max_iter`` sweeps.
    """
    cdef idx_t n = d.shape[0]
    cdef idx_t l, m, i
    cdef int it
    cdef double dd, g, r, s, c, p, f, b, zf
    cdef double eps = 2.220446049250313e-16
    z_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] z = z_arr
    cdef bint failed = False
    if n == 0:
        return z_arr.copy(), z_arr
    z[n - 1] = 1.0
    e[n - 1] = 0.0
    with nogil:
        for l in range(n):
            it = 0
            while True:
                m = l
                while m < n - 1:
                    dd = fabs(d[m]) + fabs(d[m + 1])
                    if fabs(e[m]) <= eps * dd:
                        break
                    m += 1
                if m == l:
                    break
                it += 1
                if it > max_iter:
                    failed = True
                    break
                g = (d[l + 1] - d[l]) / (2.0 * e[l])
                r = hypot(g, 1.0)
                g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
                s = 1.0
                c = 1.0
                p = 0.0
                i = m - 1
                while i >= l:
                    f = s * e[i]
                    b = c * e[i]
                    r = hypot(f, g)
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
            if failed:
                break
    if failed:
        raise ArithmeticError("tridiagonal QL did not converge")
    return np.asarray(d).copy(), z_arr
