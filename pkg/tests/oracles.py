"""Independent reference implementations used only by the tests.

None of these touch the package's kernels: distances come from
Floyd-Warshall on a dense matrix, conductance from walking the raw edge
list, spectra from numpy's LAPACK driver on an explicitly built matrix.
"""
import itertools
import math
from fractions import Fraction

import numpy as np


def floyd_warshall(n, edges):
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0)
    for u, v in edges:
        d[u, v] = d[v, u] = 1
    for k in range(n):
        d = np.minimum(d, d[:, [k]] + d[[k], :])
    return d


def degrees(n, edges):
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return deg


def conductance_fraction(n, edges, members):
    s = set(members)
    deg = degrees(n, edges)
    vol = sum(deg[v] for v in s)
    bnd = sum(1 for u, v in edges if (u in s) != (v in s))
    return bnd, vol, Fraction(bnd, min(vol, sum(deg) - vol))


def normalized_laplacian(n, edges):
    a = np.zeros((n, n))
    for u, v in edges:
        a[u, v] = a[v, u] = 1
    deg = a.sum(axis=1)
    s = 1 / np.sqrt(deg)
    return np.eye(n) - s[:, None] * a * s[None, :]


def spectrum(n, edges):
    return np.linalg.eigvalsh(normalized_laplacian(n, edges))


def phi_k(n, edges, k):
    """Exhaustive min-max conductance with exact fractions."""
    best = None
    best_assignment = None
    for assignment in itertools.product(range(k + 1), repeat=n):
        sets = [[v for v in range(n) if assignment[v] == j] for j in range(1, k + 1)]
        if any(not s for s in sets):
            continue
        worst = Fraction(0)
        ok = True
        for s in sets:
            deg = degrees(n, edges)
            vol = sum(deg[v] for v in s)
            if vol == 0 or vol == sum(deg):
                ok = False
                break
            worst = max(worst, conductance_fraction(n, edges, s)[2])
        if ok and (best is None or worst < best):
            best, best_assignment = worst, assignment
    return best, best_assignment


def cycle_closed_form(n):
    return np.sort([1 - math.cos(2 * math.pi * j / n) for j in range(n)])


def complete_closed_form(n):
    return np.array([0.0] + [n / (n - 1)] * (n - 1))


def hypercube_closed_form(d):
    vals = []
    for i in range(d + 1):
        vals += [2 * i / d] * math.comb(d, i)
    return np.array(vals)
