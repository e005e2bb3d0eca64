import numpy as np
import pytest

from martonkit.errors import NumericalError
from martonkit.lpsolve import ConvexFeasibilityProblem, solve_convex_feasibility


def test_member_inside_hull():
    candidates = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    target = np.array([0.25, 0.25])
    res = solve_convex_feasibility(ConvexFeasibilityProblem(candidates, target))
    assert res.feasible
    # the returned weights must actually reconstruct the target
    recon = res.weights @ candidates
    assert np.abs(recon - target).max() <= 1e-9
    assert abs(res.weights.sum() - 1.0) <= 1e-9
    assert res.weights.min() >= -1e-12


def test_vertex_is_member():
    candidates = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    res = solve_convex_feasibility(
        ConvexFeasibilityProblem(candidates, np.array([1.0, 0.0])))
    assert res.feasible


def test_outside_hull_infeasible():
    candidates = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    res = solve_convex_feasibility(
        ConvexFeasibilityProblem(candidates, np.array([0.7, 0.7])))
    assert not res.feasible
    assert res.residual > 1e-6


def test_duplicate_candidates_are_harmless():
    candidates = np.array([[1.0, 2.0], [1.0, 2.0], [3.0, 0.0]])
    res = solve_convex_feasibility(
        ConvexFeasibilityProblem(candidates, np.array([2.0, 1.0])))
    assert res.feasible


def test_empty_candidate_set():
    res = solve_convex_feasibility(
        ConvexFeasibilityProblem(np.zeros((0, 2)), np.array([0.5, 0.5])))
    assert not res.feasible


def test_randomized_against_construction():
    """Random convex combinations must always be recognized as members."""
    rng = np.random.default_rng(8)
    for _ in range(50):
        m, n = rng.integers(3, 9), rng.integers(2, 5)
        candidates = rng.integers(0, 4, size=(m, n)).astype(float)
        weights = rng.dirichlet(np.ones(m))
        target = weights @ candidates
        res = solve_convex_feasibility(
            ConvexFeasibilityProblem(candidates, target))
        assert res.feasible, (candidates, target)


def test_iteration_cap_raises():
    rng = np.random.default_rng(9)
    candidates = rng.random((12, 6))
    target = candidates.mean(axis=0)
    with pytest.raises(NumericalError):
        solve_convex_feasibility(
            ConvexFeasibilityProblem(candidates, target), max_iters=1)
