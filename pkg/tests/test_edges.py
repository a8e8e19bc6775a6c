import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from topotrack.edges import (apply_S, apply_S_transpose, check_edge_vector, from_adjacency,
                             index_of, laplacian, n_nodes_from_pairs, n_pairs, pair_of,
                             read_edge_list, read_edge_vector, to_adjacency, total_variation,
                             write_edge_list, write_edge_vector)

nodes = st.integers(min_value=2, max_value=12)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_pair_count_and_lexicographic_order():
    assert n_pairs(4) == 6
    assert [pair_of(k, 4) for k in range(6)] == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


@given(nodes)
def test_index_bijection(n):
    ks = [index_of(*pair_of(k, n), n) for k in range(n_pairs(n))]
    assert ks == list(range(n_pairs(n)))
    assert n_nodes_from_pairs(n_pairs(n)) == n


def test_index_symmetric_and_rejects_bad_pairs():
    assert index_of(2, 0, 3) == index_of(0, 2, 3) == 1
    with pytest.raises(ValueError):
        index_of(1, 1, 3)
    with pytest.raises(ValueError):
        index_of(0, 3, 3)
    with pytest.raises(ValueError):
        n_nodes_from_pairs(4)


def test_apply_S_examples():
    np.testing.assert_array_equal(apply_S(np.zeros(3)), [0, 0, 0])
    np.testing.assert_array_equal(apply_S([1.0, 2.0, 3.0]), [3, 4, 5])
    np.testing.assert_array_equal(apply_S(np.ones(6)), [3, 3, 3, 3])


def test_apply_S_transpose_examples():
    np.testing.assert_array_equal(apply_S_transpose(np.zeros(3)), np.zeros(3))
    np.testing.assert_array_equal(apply_S_transpose([4.0, 4.0, 4.0]), [8, 8, 8])
    np.testing.assert_array_equal(apply_S_transpose([1.0, 2.0, 3.0]), [3, 4, 5])


def test_adjacency_example():
    W = to_adjacency([1.0, 2.0, 3.0])
    np.testing.assert_array_equal(W, [[0, 1, 2], [1, 0, 3], [2, 3, 0]])
    np.testing.assert_array_equal(to_adjacency(np.zeros(6)), np.zeros((4, 4)))


@given(nodes, seeds)
def test_adjacency_roundtrip_and_degrees(n, seed):
    w = np.random.default_rng(seed).random(n_pairs(n))
    W = to_adjacency(w)
    np.testing.assert_array_equal(W, W.T)
    assert np.all(np.diag(W) == 0)
    np.testing.assert_array_equal(from_adjacency(W), w)
    np.testing.assert_allclose(apply_S(w), W.sum(axis=1), rtol=1e-12)


@given(nodes, seeds)
def test_S_adjoint(n, seed):
    rng = np.random.default_rng(seed)
    w, lam = rng.random(n_pairs(n)), rng.standard_normal(n)
    lhs, rhs = apply_S(w) @ lam, w @ apply_S_transpose(lam)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_total_variation_examples():
    w = np.ones(3)
    # x^T L x of K3 at x = (0, 1, 2): 1 + 4 + 1
    assert total_variation(w, [0.0, 1.0, 2.0]) == pytest.approx(6.0)
    assert total_variation(np.array([0.3, 2.0, 1.1]), [5.0, 5.0, 5.0]) == 0.0


@given(nodes, seeds, st.floats(-100, 100))
def test_total_variation_quadratic_form(n, seed, shift):
    rng = np.random.default_rng(seed)
    w, x = rng.random(n_pairs(n)), rng.standard_normal(n)
    tv = total_variation(w, x)
    quad = x @ (np.diag(apply_S(w)) - to_adjacency(w)) @ x
    assert tv >= 0
    assert tv == pytest.approx(quad, rel=1e-12, abs=1e-14)
    np.testing.assert_allclose(laplacian(w), np.diag(apply_S(w)) - to_adjacency(w))
    assert total_variation(w, x + shift) == pytest.approx(tv, rel=1e-8, abs=1e-9)


@pytest.mark.parametrize("n", range(3, 13))
def test_SST_top_eigenvalue(n):
    S = np.column_stack([apply_S(np.eye(n_pairs(n))[k]) for k in range(n_pairs(n))])
    assert np.linalg.eigvalsh(S @ S.T)[-1] == pytest.approx(2 * (n - 1), abs=1e-8)


def test_check_edge_vector():
    check_edge_vector([0.0, 1.0, 2.0], 3)
    for bad in ([-1.0, 0, 0], [np.nan, 0, 0], [[1.0]]):
        with pytest.raises(ValueError):
            check_edge_vector(bad)
    with pytest.raises(ValueError):
        check_edge_vector([1.0, 2.0, 3.0], 4)


def test_edge_file_roundtrip(tmp_path, rng):
    w = rng.random(10) * (rng.random(10) > 0.4)
    write_edge_list(tmp_path / "e.csv", w)
    lines = (tmp_path / "e.csv").read_text().splitlines()
    assert lines[0] == "i,j,weight"
    assert len(lines) == 1 + np.count_nonzero(w)
    np.testing.assert_array_equal(read_edge_list(tmp_path / "e.csv", 5), w)
    write_edge_vector(tmp_path / "v.csv", w)
    np.testing.assert_array_equal(read_edge_vector(tmp_path / "v.csv"), w)


def test_edge_list_rejects_bad_header(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("a,b,c\n1,2,0.5\n")
    with pytest.raises(ValueError):
        read_edge_list(p, 3)
