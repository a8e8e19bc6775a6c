import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import random_instance
from topotrack.baseline import PrimalPG, primal_gradient
from topotrack.dual import dual_gradient, primal_objective, solve_batch
from topotrack.edges import apply_S, n_pairs


def h(w, e, alpha, beta):
    return 2 * e @ w + beta * w @ w - alpha * np.sum(np.log(apply_S(w)))


@given(st.integers(0, 2**31))
def test_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    e = random_instance(rng, 6)
    w = rng.uniform(0.2, 2.0, n_pairs(6))
    g = primal_gradient(w, e, 1.5, 0.7)
    step = 1e-6
    fd = np.array([(h(w + step * u, e, 1.5, 0.7) - h(w - step * u, e, 1.5, 0.7)) / (2 * step)
                   for u in np.eye(w.size)])
    assert np.linalg.norm(fd - g) <= 1e-5 * np.linalg.norm(g)


def test_stationary_at_batch_optimum(rng):
    e = random_instance(rng, 5)
    w_star = solve_batch(e, 1.0, 0.5, tol=1e-14, max_iter=10**6).w_star
    pg = PrimalPG(5, 1.0, 0.5, w0=w_star)
    pg.dissim.absorb(e)  # frozen e: every later snapshot equals the running mean
    w1 = pg.step_dissimilarity(e)
    assert np.linalg.norm(w1 - w_star) <= 1e-6


def test_backtracking_engages():
    pg = PrimalPG(4, 1.0, 1.0, step_size=1e6, w0=np.ones(6))
    w = pg.step_dissimilarity(np.full(6, 100.0))
    assert pg.last_backtracks > 0 and not pg.last_step_rejected
    assert apply_S(w).min() > pg.degree_floor


def test_rejected_step_leaves_state_unchanged():
    pg = PrimalPG(3, 1.0, 1.0, step_size=1e30, w0=np.ones(3), degree_floor=0.5)
    before = pg.w.copy()
    w = pg.step_dissimilarity(np.full(3, 1e20))
    assert pg.last_step_rejected and pg.rejected_steps == 1
    np.testing.assert_array_equal(w, before)
    assert pg.t == 0 and pg.dissim.count == 0


@given(st.integers(3, 8), st.integers(0, 2**31))
def test_objective_non_increasing_with_small_step(n, seed):
    rng = np.random.default_rng(seed)
    e = random_instance(rng, n)
    pg = PrimalPG(n, 1.0, 1.0, step_size=1e-3, w0=rng.uniform(0.5, 1.5, n_pairs(n)))
    pg.dissim.absorb(e)
    prev = primal_objective(pg.w, e, 1.0, 1.0)
    for _ in range(30):
        w = pg.step_dissimilarity(e)
        assert apply_S(w).min() >= pg.degree_floor and np.all(w >= 0)
        cur = primal_objective(w, e, 1.0, 1.0)
        assert cur <= prev + 1e-12 * abs(prev)
        prev = cur


def test_defaults():
    pg = PrimalPG(5, 2.0, 0.25)
    assert pg.step_size == pytest.approx(0.25 / 4)
    np.testing.assert_allclose(pg.w, 4.0)
    with pytest.raises(RuntimeError):
        pg.current_estimate()
    for kw in ({"w0": -np.ones(10)}, {"w0": np.zeros(10)}, {"step_size": -1.0}, {"beta": 0.0}):
        args = {"n_nodes": 5, "alpha": 1.0, "beta": 1.0, **kw}
        with pytest.raises(ValueError):
            PrimalPG(**args)


def test_matched_complexity(rng):
    # one S and one S^T product per step for both methods: the kernels are
    # the same size, so compare their gradient evaluations directly
    e = random_instance(rng, 6)
    w = np.ones(15)
    assert primal_gradient(w, e, 1.0, 1.0).shape == (15,)
    assert dual_gradient(np.ones(6), e, 1.0).shape == (6,)
