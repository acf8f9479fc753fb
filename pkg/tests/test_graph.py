import io
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sdcert.errors import EdgeListParseError, GraphValidationError
from sdcert.graph import (
    DuplicateEdgeWarning,
    FAMILIES,
    Graph,
    format_edge_list,
    generate,
    is_connected,
    load_edge_list,
    parse_edge_list,
    read_graph,
    write_graph,
)


def test_load_path():
    g = load_edge_list("0 1\n1 2")
    assert g.n == 3
    assert g.degree.tolist() == [1, 2, 1]
    assert g.edges() == [(0, 1), (1, 2)]


def test_duplicates_collapsed_with_count():
    g, dups = parse_edge_list("0 1\n0 1\n1 0")
    assert g.n == 2 and g.num_edges == 1
    assert dups == 2
    with pytest.warns(DuplicateEdgeWarning, match="2 duplicate"):
        load_edge_list("0 1\n0 1\n1 0")


def test_self_loop_rejected_with_line_number():
    with pytest.raises(EdgeListParseError, match="line 1") as exc:
        load_edge_list("0 0")
    assert exc.value.line == 1
    with pytest.raises(EdgeListParseError, match="line 3"):
        load_edge_list("# c\n0 1\n2 2\n")


@pytest.mark.parametrize("text", ["0 x", "1.5 2", "0 1 2", "-1 3"])
def test_bad_tokens(text):
    with pytest.raises(EdgeListParseError):
        load_edge_list(text)


@pytest.mark.parametrize("text", ["", "\n# only comments\n\n"])
def test_empty_graph(text):
    with pytest.raises(EdgeListParseError, match="empty"):
        load_edge_list(text)


def test_header_and_comments():
    g = load_edge_list("# hello\n\nn=5\n0 1\n# mid\n1 2\n")
    assert g.n == 5
    assert g.degree.tolist() == [1, 2, 1, 0, 0]
    assert not is_connected(g)
    with pytest.raises(EdgeListParseError):
        load_edge_list("n=2\n0 5\n")
    with pytest.raises(EdgeListParseError):
        load_edge_list("0 1\nn=4\n")


def test_single_vertex_header():
    g = load_edge_list("n=1\n")
    assert g.n == 1 and g.num_edges == 0
    assert is_connected(g)


def test_gaps_become_isolated_vertices():
    g = load_edge_list("0 1\n3 4\n")
    assert g.n == 5 and g.degree[2] == 0


def test_stream_input():
    g = load_edge_list(io.StringIO("0 1\n1 2\n2 0\n"))
    assert g.num_edges == 3


def test_is_connected_examples():
    assert is_connected(load_edge_list("0 1\n1 2"))
    assert not is_connected(load_edge_list("0 1\n2 3"))


def test_from_edges_validation():
    with pytest.raises(GraphValidationError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(GraphValidationError):
        Graph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(GraphValidationError):
        Graph.from_edges(2, [(0, 2)])


def test_graph_arrays_are_read_only():
    g = generate("path", 4)
    with pytest.raises(ValueError):
        g.indices[0] = 3


@pytest.mark.parametrize(
    "family, params, n, m",
    [
        ("path", (4,), 4, 3),
        ("hypercube", (3,), 8, 12),
        ("complete", (4,), 4, 6),
        ("cycle", (6,), 6, 6),
        ("grid2d", (3, 4), 12, 17),
        ("barbell", (5,), 10, 21),
        ("random_regular", (50, 3), 50, 75),
    ],
)
def test_generator_sizes(family, params, n, m):
    g = generate(family, *params, seed=7)
    assert (g.n, g.num_edges) == (n, m)
    g.validate()


def test_hypercube_is_regular():
    g = generate("hypercube", 3)
    assert set(g.degree.tolist()) == {3}


def test_random_regular_reproducible():
    a = generate("random_regular", 50, 3, seed=7)
    b = generate("random_regular", 50, 3, seed=7)
    c = generate("random_regular", 50, 3, seed=8)
    assert format_edge_list(a) == format_edge_list(b)
    assert a != c
    assert set(a.degree.tolist()) == {3}


@pytest.mark.parametrize(
    "family, params",
    [("random_regular", (5, 3)), ("random_regular", (4, 4)), ("path", (1,)), ("cycle", (2,)), ("hypercube", (0,)), ("nope", (3,)), ("path", (3, 4))],
)
def test_infeasible_params(family, params):
    with pytest.raises(GraphValidationError):
        generate(family, *params)


@pytest.mark.parametrize("family", FAMILIES)
def test_family_invariants(family):
    params = {"path": (9,), "cycle": (9,), "grid2d": (3, 5), "hypercube": (4,), "complete": (6,), "barbell": (4,), "random_regular": (20, 3)}[family]
    g = generate(family, *params, seed=1)
    g.validate()
    assert g.volume_total == 2 * g.num_edges <= g.n**2
    for v in range(g.n):
        for w in g.neighbors(v):
            assert v in g.neighbors(w)


def test_round_trip_file(tmp_path):
    g = generate("grid2d", 4, 3)
    write_graph(g, tmp_path / "g.txt")
    h = read_graph(tmp_path / "g.txt")
    assert np.array_equal(g.indptr, h.indptr) and np.array_equal(g.indices, h.indices)
    lines = (tmp_path / "g.txt").read_text().splitlines()
    assert lines[0] == "n=12"
    pairs = [tuple(map(int, ln.split())) for ln in lines[1:]]
    assert all(u < v for u, v in pairs) and pairs == sorted(pairs)


edge_lists = st.integers(min_value=2, max_value=12).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1]), max_size=30),
    )
)


@settings(max_examples=60, deadline=None)
@given(edge_lists)
def test_round_trip_property(data):
    n, edges = data
    text = f"n={n}\n" + "\n".join(f"{u} {v}" for u, v in edges)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DuplicateEdgeWarning)
        g = load_edge_list(text)
        h = load_edge_list(format_edge_list(g))
    g.validate()
    assert g == h
    assert g.num_edges == len({(min(e), max(e)) for e in edges})
