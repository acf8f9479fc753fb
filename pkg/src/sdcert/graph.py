"""Simple undirected graphs in compressed adjacency form, edge-list I/O and
deterministic generators for the test families."""
from __future__ import annotations

import io
import itertools
import logging
import os
import warnings
from typing import Iterable, TextIO

import numpy as np

from . import kernels
from .errors import EdgeListParseError, GraphValidationError

log = logging.getLogger(__name__)

FAMILIES = ("path", "cycle", "grid2d", "hypercube", "complete", "barbell", "random_regular")


class DuplicateEdgeWarning(UserWarning):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


class Graph:
    """Immutable simple undirected graph.

    Adjacency is stored CSR-style: the neighbours of ``v`` are
    ``indices[indptr[v]:indptr[v + 1]]``, sorted ascending, and every edge
    appears in both endpoint lists.
    """

    __slots__ = ("indptr", "indices", "degree", "_edges")

    def __init__(self, indptr, indices):
        self.indptr = _frozen(indptr)
        self.indices = _frozen(indices)
        self.degree = _frozen(np.diff(self.indptr))
        self._edges = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        """Build from an edge iterable; raises on self-loops, out-of-range
        endpoints or repeated edges (use :func:`parse_edge_list` to collapse)."""
        arr = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if n < 1:
            raise GraphValidationError("graph needs at least one vertex")
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise GraphValidationError(f"edge endpoint outside 0..{n - 1}")
        if np.any(arr[:, 0] == arr[:, 1]):
            raise GraphValidationError("self-loops are not allowed")
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        keys = lo * n + hi
        if len(np.unique(keys)) != len(keys):
            raise GraphValidationError("duplicate edges")
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(indptr, dst)

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def num_edges(self) -> int:
        return len(self.indices) // 2

    @property
    def volume_total(self) -> int:
        return int(self.indptr[-1])

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def edge_array(self) -> np.ndarray:
        """``(m, 2)`` array of edges with ``u < v``, sorted."""
        if self._edges is None:
            src = np.repeat(np.arange(self.n, dtype=np.int64), self.degree)
            keep = src < self.indices
            e = np.column_stack([src[keep], self.indices[keep]])
            e.setflags(write=False)
            self._edges = e
        return self._edges

    def edges(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in self.edge_array()]

    def validate(self) -> None:
        """Check every structural invariant; raise GraphValidationError."""
        n = self.n
        if n < 1:
            raise GraphValidationError("empty graph")
        if self.indptr[0] != 0 or np.any(np.diff(self.indptr) < 0):
            raise GraphValidationError("malformed offsets")
        for v in range(n):
            nb = self.neighbors(v)
            if len(nb) and (nb.min() < 0 or nb.max() >= n):
                raise GraphValidationError(f"vertex {v}: neighbour out of range")
            if np.any(nb == v):
                raise GraphValidationError(f"vertex {v}: self-loop")
            if np.any(np.diff(nb) <= 0):
                raise GraphValidationError(f"vertex {v}: neighbours not strictly ascending")
        src = np.repeat(np.arange(n, dtype=np.int64), self.degree)
        fwd = np.sort(src * n + self.indices)
        rev = np.sort(self.indices * n + src)
        if not np.array_equal(fwd, rev):
            raise GraphValidationError("adjacency is not symmetric")
        if self.volume_total != 2 * self.num_edges or self.volume_total > n * n:
            raise GraphValidationError("volume identity violated")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self.indptr, other.indptr) and np.array_equal(
            self.indices, other.indices
        )

    def __hash__(self):
        return hash((self.indptr.tobytes(), self.indices.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges})"


def is_connected(g: Graph) -> bool:
    if g.n == 1:
        return True
    dist, _ = kernels.bfs(g.indptr, g.indices, 0)
    return bool(np.all(dist >= 0))


# --------------------------------------------------------------------------
# edge-list I/O


def parse_edge_list(text: str | TextIO) -> tuple[Graph, int]:
    """Parse the edge-list format and return ``(graph, duplicates_collapsed)``.

    Lines hold ``u v`` with 0-based endpoints; blank lines and ``#``
    comments are skipped.  An optional leading ``n=<int>`` directive fixes
    the vertex count, otherwise it is one more than the largest endpoint.
    """
    stream = io.StringIO(text) if isinstance(text, str) else text
    declared_n = None
    seen: set[tuple[int, int]] = set()
    duplicates = 0
    saw_content = False
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("n="):
            if saw_content:
                raise EdgeListParseError("n= directive must precede all edges", lineno)
            try:
                declared_n = int(line[2:])
            except ValueError:
                raise EdgeListParseError(f"bad vertex count {line[2:]!r}", lineno) from None
            if declared_n < 1:
                raise EdgeListParseError("vertex count must be >= 1", lineno)
            saw_content = True
            continue
        saw_content = True
        tokens = line.split()
        if len(tokens) != 2:
            raise EdgeListParseError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListParseError(f"non-integer token in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise EdgeListParseError("negative vertex id", lineno)
        if u == v:
            raise EdgeListParseError(f"self-loop at vertex {u}", lineno)
        if declared_n is not None and max(u, v) >= declared_n:
            raise EdgeListParseError(f"vertex id >= declared n={declared_n}", lineno)
        key = (u, v) if u < v else (v, u)
        if key in seen:
            duplicates += 1
        else:
            seen.add(key)
    if not seen and declared_n is None:
        raise EdgeListParseError("empty graph")
    n = declared_n if declared_n is not None else 1 + max(max(e) for e in seen)
    return Graph.from_edges(n, sorted(seen)), duplicates


def load_edge_list(text: str | TextIO) -> Graph:
    g, duplicates = parse_edge_list(text)
    if duplicates:
        warnings.warn(f"collapsed {duplicates} duplicate edge(s)", DuplicateEdgeWarning, stacklevel=2)
    return g


def read_graph(path: str | os.PathLike) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh)


def format_edge_list(g: Graph) -> str:
    lines = [f"n={g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edge_array())
    return "\n".join(lines) + "\n"


def write_graph(g: Graph, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_edge_list(g))


# --------------------------------------------------------------------------
# generators


def path_graph(n: int) -> Graph:
    if n < 2:
        raise GraphValidationError("path needs n >= 2")
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphValidationError("cycle needs n >= 3")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def grid2d_graph(rows: int, cols: int | None = None) -> Graph:
    cols = rows if cols is None else cols
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise GraphValidationError("grid needs rows*cols >= 2")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def hypercube_graph(d: int) -> Graph:
    if d < 1:
        raise GraphValidationError("hypercube needs d >= 1")
    n = 1 << d
    return Graph.from_edges(n, ((v, v ^ (1 << b)) for v in range(n) for b in range(d) if v < v ^ (1 << b)))


def complete_graph(n: int) -> Graph:
    if n < 2:
        raise GraphValidationError("complete graph needs n >= 2")
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def barbell_graph(m: int) -> Graph:
    """Two copies of K_m joined by the single edge (m-1, m)."""
    if m < 2:
        raise GraphValidationError("barbell needs m >= 2")
    left = itertools.combinations(range(m), 2)
    right = ((u + m, v + m) for u, v in itertools.combinations(range(m), 2))
    return Graph.from_edges(2 * m, itertools.chain(left, right, [(m - 1, m)]))


def random_regular_graph(n: int, d: int, seed: int = 0, max_tries: int = 10_000) -> Graph:
    """Uniform pairing model, retried until the multigraph is simple."""
    if d < 1 or d >= n or (n * d) % 2:
        raise GraphValidationError(f"no simple {d}-regular graph on {n} vertices")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    for attempt in range(max_tries):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        lo = pairs.min(axis=1)
        hi = pairs.max(axis=1)
        if len(np.unique(lo * n + hi)) != len(lo):
            continue
        log.debug("random_regular(%d, %d) simple after %d tries", n, d, attempt + 1)
        return Graph.from_edges(n, zip(lo.tolist(), hi.tolist()))
    raise GraphValidationError(f"pairing model found no simple graph in {max_tries} tries")


def generate(family: str, *params: int, seed: int = 0) -> Graph:
    """Build a member of a named test family.

    ``params`` per family: path(n), cycle(n), grid2d(rows[, cols]),
    hypercube(d), complete(n), barbell(m), random_regular(n, d).  Only
    ``random_regular`` consumes ``seed``.
    """
    builders = {
        "path": (path_graph, 1, 1),
        "cycle": (cycle_graph, 1, 1),
        "grid2d": (grid2d_graph, 1, 2),
        "hypercube": (hypercube_graph, 1, 1),
        "complete": (complete_graph, 1, 1),
        "barbell": (barbell_graph, 1, 1),
        "random_regular": (random_regular_graph, 2, 2),
    }
    if family not in builders:
        raise GraphValidationError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    fn, lo, hi = builders[family]
    if not lo <= len(params) <= hi:
        raise GraphValidationError(f"{family} takes {lo}..{hi} integer parameters, got {len(params)}")
    params = tuple(int(p) for p in params)
    if family == "random_regular":
        return fn(*params, seed=seed)
    return fn(*params)
