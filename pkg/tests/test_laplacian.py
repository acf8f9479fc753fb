import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sdcert.errors import BudgetExceededError, DisconnectedGraphError
from sdcert.graph import generate, load_edge_list
from sdcert.laplacian import GroundedInverse, LaplacianOperator, dense_spectrum, lanczos_smallest_k, smallest_k

import oracles
from test_bfs import build_connected, connected_graphs


def test_kernel_vector_annihilated():
    g = generate("barbell", 6)
    op = LaplacianOperator(g)
    x = np.sqrt(g.degree.astype(float))
    assert np.abs(op @ x).max() < 1e-14


def test_single_edge_apply():
    op = LaplacianOperator(generate("path", 2))
    np.testing.assert_allclose(op.apply([1.0, -1.0]), [2.0, -2.0])


def test_complete4_apply():
    op = LaplacianOperator(generate("complete", 4))
    x = np.array([1.0, -1.0, 0.0, 0.0])
    np.testing.assert_allclose(op.apply(x), 4 / 3 * x, atol=1e-15)


def test_apply_length_mismatch():
    with pytest.raises(ValueError):
        LaplacianOperator(generate("path", 3)).apply(np.ones(4))


def test_dense_matches_oracle_matrix():
    g = generate("grid2d", 4, 6)
    np.testing.assert_allclose(LaplacianOperator(g).to_dense(), oracles.normalized_laplacian(g.n, g.edges()), atol=1e-15)


@pytest.mark.parametrize(
    "family, params, expected",
    [
        ("complete", (4,), [0, 4 / 3, 4 / 3, 4 / 3]),
        ("cycle", (6,), [0, 0.5, 0.5, 1.5, 1.5, 2.0]),
        ("path", (2,), [0, 2]),
    ],
)
def test_dense_examples(family, params, expected):
    res = dense_spectrum(generate(family, *params))
    np.testing.assert_allclose(res.eigenvalues, expected, atol=1e-12)
    assert res.residual_norms.max() < 1e-12


@pytest.mark.parametrize("n", [5, 17, 40])
def test_path_closed_form(n):
    vals = dense_spectrum(generate("path", n)).eigenvalues
    np.testing.assert_allclose(vals, [1 - math.cos(math.pi * j / (n - 1)) for j in range(n)], atol=1e-12)


def test_dense_cap():
    with pytest.raises(BudgetExceededError):
        dense_spectrum(generate("path", 20), cap=10)


@pytest.mark.parametrize(
    "family, params, k, expected",
    [
        ("cycle", (64,), 2, [0, 1 - math.cos(2 * math.pi / 64)]),
        ("hypercube", (8,), 3, [0, 0.25, 0.25]),
        ("complete", (16,), 2, [0, 16 / 15]),
    ],
)
def test_lanczos_examples(family, params, k, expected):
    g = generate(family, *params)
    res = lanczos_smallest_k(LaplacianOperator(g), k, tol=1e-10, seed=1)
    np.testing.assert_allclose(res.eigenvalues, expected, atol=1e-9)
    np.testing.assert_allclose(res.eigenvalues, dense_spectrum(g).eigenvalues[:k], atol=1e-8)
    assert res.residual_norms.max() <= 1e-10


def test_lanczos_repeated_eigenvalues():
    g = generate("hypercube", 6)
    res = lanczos_smallest_k(LaplacianOperator(g), 8, seed=3)
    np.testing.assert_allclose(res.eigenvalues, [0] + [1 / 3] * 6 + [2 / 3], atol=1e-9)


@pytest.mark.parametrize("family, params", [("path", (600,)), ("grid2d", (15, 20)), ("barbell", (12,))])
def test_lanczos_modes_agree(family, params):
    g = generate(family, *params)
    op = LaplacianOperator(g)
    plain = lanczos_smallest_k(op, 6, seed=2, invert=False, max_iter=g.n)
    inv = lanczos_smallest_k(op, 6, seed=2, invert=True)
    assert (plain.method, inv.method) == ("lanczos", "lanczos-inverse")
    np.testing.assert_allclose(plain.eigenvalues, inv.eigenvalues, atol=1e-10)
    np.testing.assert_allclose(inv.eigenvalues, dense_spectrum(g, cap=g.n).eigenvalues[:6], atol=1e-10)
    assert inv.residual_norms.max() <= 1e-10


def test_grounded_inverse_is_pseudo_inverse():
    g = generate("grid2d", 5, 6)
    op = LaplacianOperator(g)
    inv = GroundedInverse(op)
    x = np.random.default_rng(0).standard_normal(g.n)
    x -= (op.kernel_vector() @ x) * op.kernel_vector()
    np.testing.assert_allclose(-(op @ inv.apply(x)), x, atol=1e-12)
    np.testing.assert_allclose(-np.linalg.pinv(op.to_dense()) @ x, inv.apply(x), atol=1e-10)


def test_grounded_inverse_fill_budget():
    op = LaplacianOperator(generate("random_regular", 2000, 3, seed=1))
    with pytest.raises(BudgetExceededError):
        GroundedInverse(op)
    assert lanczos_smallest_k(op, 3, max_iter=op.n).method == "lanczos"


def test_lanczos_errors():
    op = LaplacianOperator(generate("path", 5))
    with pytest.raises(ValueError):
        lanczos_smallest_k(op, 5)
    with pytest.raises(DisconnectedGraphError):
        lanczos_smallest_k(LaplacianOperator(load_edge_list("0 1\n2 3")), 2)


def test_lanczos_seed_reproducible():
    op = LaplacianOperator(generate("random_regular", 700, 3, seed=1))
    a = lanczos_smallest_k(op, 4, seed=9)
    b = lanczos_smallest_k(op, 4, seed=9)
    assert a.to_json() == b.to_json()


def test_smallest_k_switches_method():
    assert smallest_k(generate("cycle", 30), 3).method == "dense"
    assert smallest_k(generate("cycle", 30), 3, dense_cap=10).method == "lanczos-inverse"


def test_spectrum_json_fields():
    d = smallest_k(generate("cycle", 8), 2).to_dict()
    assert list(d) == ["eigenvalues", "residuals", "method", "iterations", "seed", "tol"]


@settings(max_examples=50, deadline=None)
@given(connected_graphs, st.floats(-3, 3), st.floats(-3, 3))
def test_apply_linear_and_spectrum_in_range(data, a, b):
    g = build_connected(*data)
    op = LaplacianOperator(g)
    rng = np.random.default_rng(g.n)
    x, y = rng.standard_normal((2, g.n))
    np.testing.assert_allclose(op @ (a * x + b * y), a * (op @ x) + b * (op @ y), atol=1e-12)
    vals = dense_spectrum(g).eigenvalues
    np.testing.assert_allclose(vals, oracles.spectrum(g.n, g.edges()), atol=1e-10)
    assert abs(vals[0]) < 1e-12 and vals[-1] <= 2 + 1e-12
    if g.n > 1:
        assert vals[1] > 1e-9


@pytest.mark.parametrize("invert", [False, True])
def test_rayleigh_quotient_consistency(invert):
    g = generate("grid2d", 20, 30)
    op = LaplacianOperator(g)
    tol = 1e-10
    res = lanczos_smallest_k(op, 6, tol=tol, seed=4, max_iter=g.n, invert=invert)
    for lam, x in zip(res.eigenvalues, res.vectors.T):
        assert abs(x @ (op @ x) / (x @ x) - lam) <= 10 * tol
    assert res.residual_norms.max() <= tol
