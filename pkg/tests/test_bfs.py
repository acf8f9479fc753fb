import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sdcert.bfs import all_pairs_distances, bfs, double_sweep_lower_bound, exact_diameter, extract_path
from sdcert.errors import BudgetExceededError, DisconnectedGraphError
from sdcert.graph import Graph, generate, load_edge_list

from oracles import floyd_warshall


def test_path_distances():
    assert bfs(generate("path", 5), 0).dist.tolist() == [0, 1, 2, 3, 4]


def test_hypercube_popcount():
    g = generate("hypercube", 3)
    assert bfs(g, 0).dist.tolist() == [bin(v).count("1") for v in range(8)]
    fw = floyd_warshall(g.n, g.edges())
    assert np.array_equal(all_pairs_distances(g), fw)


def test_disconnected_raises():
    g = load_edge_list("0 1\n2 3")
    with pytest.raises(DisconnectedGraphError):
        bfs(g, 0)
    with pytest.raises(DisconnectedGraphError):
        exact_diameter(g)


@pytest.mark.parametrize(
    "family, params, diam",
    [("cycle", (10,), 5), ("barbell", (5,), 3), ("complete", (7,), 1), ("path", (9,), 8), ("grid2d", (3, 5), 6), ("hypercube", (5,), 5)],
)
def test_exact_diameter(family, params, diam):
    g = generate(family, *params)
    res = exact_diameter(g)
    assert res.diameter == diam and res.exact
    assert int(floyd_warshall(g.n, g.edges()).max()) == diam
    assert bfs(g, res.endpoint_a).dist[res.endpoint_b] == diam


def test_diameter_budget():
    g = generate("path", 50)
    with pytest.raises(BudgetExceededError):
        exact_diameter(g, budget=10)
    assert exact_diameter(g, budget=50).diameter == 49


def test_threads_agree():
    g = generate("random_regular", 300, 3, seed=4)
    assert exact_diameter(g, threads=1) == exact_diameter(g, threads=4)


def test_double_sweep():
    g = generate("path", 30)
    res = double_sweep_lower_bound(g, seed=3)
    assert res.diameter == 29 and res.mode == "lower_bound"
    g = generate("random_regular", 200, 3, seed=2)
    assert double_sweep_lower_bound(g).diameter <= exact_diameter(g).diameter


def test_extract_path_is_geodesic():
    g = generate("grid2d", 4, 5)
    fld = bfs(g, 0)
    p = extract_path(fld, 19)
    assert p[0] == 0 and p[-1] == 19 and len(p) == fld.dist[19] + 1
    for a, b in zip(p, p[1:]):
        assert b in g.neighbors(a)


connected_graphs = st.integers(2, 14).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.permutations(range(n)),
        st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=25),
    )
)


def build_connected(n, perm, extra):
    # a random spanning tree over the permutation keeps the graph connected
    edges = {(min(perm[i], perm[i // 2]), max(perm[i], perm[i // 2])) for i in range(1, n)}
    edges |= {(min(u, v), max(u, v)) for u, v in extra if u != v}
    return Graph.from_edges(n, sorted(edges))


@settings(max_examples=80, deadline=None)
@given(connected_graphs)
def test_distances_match_floyd_warshall(data):
    g = build_connected(*data)
    d = all_pairs_distances(g)
    assert np.array_equal(d, floyd_warshall(g.n, g.edges()))
    assert np.array_equal(d, d.T)
    # triangle inequality: d[u, w] <= d[u, v] + d[v, w]
    for u in range(g.n):
        assert np.all(d[u][None, :] <= d[u][:, None] + d)
    assert exact_diameter(g).diameter == d.max()


def test_cycle6_distances():
    assert bfs(generate("cycle", 6), 0).dist.tolist() == [0, 1, 2, 3, 2, 1]


def test_diameter_small_examples():
    res = exact_diameter(generate("path", 10))
    assert res.diameter == 9 and {res.endpoint_a, res.endpoint_b} == {0, 9}
    assert exact_diameter(generate("complete", 5)).diameter == 1
    assert exact_diameter(generate("path", 4)).diameter == 3


@pytest.mark.parametrize("family, params, value", [("path", (10,), 9), ("cycle", (8,), 4), ("complete", (4,), 1)])
def test_double_sweep_examples(family, params, value):
    g = generate(family, *params)
    assert double_sweep_lower_bound(g, seed=0).diameter == value == exact_diameter(g).diameter


def test_extract_path_examples():
    assert extract_path(bfs(generate("path", 4), 0), 3) == [0, 1, 2, 3]
    assert extract_path(bfs(generate("cycle", 6), 0), 3) in ([0, 1, 2, 3], [0, 5, 4, 3])
    assert extract_path(bfs(generate("complete", 3), 0), 2) == [0, 2]
