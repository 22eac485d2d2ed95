"""Brute-force solver and quotient differentiator."""

import numpy as np
import pytest

from bochnerproj import (
    BallSpec,
    BochnerElement,
    BochnerSpaceSpec,
    CylinderSpec,
    InnerNormSpec,
    MeasureSpace,
    OracleConfig,
    SupportSet,
    audit_improvement,
    d_project_ball,
    fd_derivative,
    norm_lp,
    oracle_project,
    project_ball,
    project_subspace,
    restrict,
    zeros,
)


def make_space(weights, d=1, rho=2.0, p=2.0):
    return BochnerSpaceSpec(MeasureSpace(weights), InnerNormSpec(d, rho), p)


def test_config_validation():
    with pytest.raises(ValueError):
        OracleConfig(barrier_weights=(1e-2, 1e-2))
    with pytest.raises(ValueError):
        OracleConfig(barrier_weights=(1e-1, 1e-3, 1e-2, 1e-9))
    with pytest.raises(ValueError):
        OracleConfig(barrier_weights=(1e-1, 1e-4))  # does not reach 1e-8
    with pytest.raises(ValueError):
        OracleConfig(audit_samples=10)
    with pytest.raises(ValueError):
        OracleConfig(descent_tol=0.0)
    cfg = OracleConfig()
    assert cfg.barrier_weights[-1] <= 1e-8
    assert cfg.audit_samples >= 1000


def test_subspace_oracle_matches_restriction():
    rng = np.random.default_rng(71)
    for p, rho in [(1.5, 3.0), (2.0, 2.0), (3.0, 1.5)]:
        space = make_space(rng.uniform(0.3, 2.0, 4), d=2, rho=rho, p=p)
        a = SupportSet(space, [0, 2])
        g = BochnerElement(space, rng.standard_normal((4, 2)))
        sol = oracle_project(g, a, OracleConfig(rng_seed=5))
        assert norm_lp(sol.minimizer - restrict(g, a)) <= 1e-6
        assert sol.audit_pass


def test_feasible_point_is_its_own_projection():
    space = make_space([1.0, 1.0], d=1, rho=2.0, p=2.0)
    a = SupportSet(space, [0])
    ball = BallSpec(support=a, center=zeros(space), rad=1.0)
    g = BochnerElement(space, np.array([[0.5], [0.0]]))
    sol = oracle_project(g, ball, OracleConfig(rng_seed=5))
    assert np.array_equal(sol.minimizer.values, g.values)
    assert sol.objective == 0.0
    assert sol.audit_pass


def test_two_atom_ball_worked_example():
    space = make_space([1.0, 1.0], d=1, rho=2.0, p=2.0)
    ball = BallSpec(support=SupportSet(space, [0]), center=zeros(space), rad=1.0)
    g = BochnerElement(space, np.array([[2.0], [3.0]]))
    sol = oracle_project(g, ball, OracleConfig(rng_seed=5))
    assert np.allclose(sol.minimizer.values.ravel(), [1.0, 0.0], atol=1e-4)
    assert sol.objective == pytest.approx(np.sqrt(10.0), abs=1e-8)
    assert sol.audit_pass


def test_two_atom_cylinder_worked_example():
    space = make_space([1.0, 1.0], d=1, rho=2.0, p=2.0)
    cyl = CylinderSpec(
        BallSpec(support=SupportSet(space, [0]), center=zeros(space), rad=1.0)
    )
    g = BochnerElement(space, np.array([[2.0], [3.0]]))
    sol = oracle_project(g, cyl, OracleConfig(rng_seed=5))
    assert np.allclose(sol.minimizer.values.ravel(), [1.0, 3.0], atol=1e-4)
    assert sol.objective == pytest.approx(1.0, abs=1e-8)
    assert sol.audit_pass


def test_oracle_grid_agreement_with_closed_forms():
    rng = np.random.default_rng(72)
    for p, rho in [(1.5, 1.5), (1.5, 3.0), (3.0, 1.5), (3.0, 3.0), (2.0, 2.0)]:
        space = make_space(rng.uniform(0.3, 2.0, 3), d=2, rho=rho, p=p)
        a = SupportSet(space, [0, 1])
        center = restrict(BochnerElement(space, rng.standard_normal((3, 2))), a)
        ball = BallSpec(support=a, center=center, rad=0.8)
        for _ in range(5):
            g = BochnerElement(space, 2.0 * rng.standard_normal((3, 2)))
            sol = oracle_project(g, ball, OracleConfig(rng_seed=9))
            closed = project_ball(g, ball)
            assert norm_lp(closed - sol.minimizer) <= 1e-4
            assert sol.audit_pass


def test_audit_flags_a_bad_candidate():
    # the ball center is feasible but plainly suboptimal for an exterior point
    space = make_space([1.0, 1.0], d=1, rho=2.0, p=2.0)
    ball = BallSpec(support=SupportSet(space, [0]), center=zeros(space), rad=1.0)
    g = BochnerElement(space, np.array([[2.0], [3.0]]))
    rng = np.random.default_rng(8)
    gap = audit_improvement(g, ball, ball.center, 2000, rng)
    assert gap > 1e-2


def test_fd_derivative_of_identity_is_direction():
    # exact up to quotient rounding eps*|g|/t, amplified by the extrapolation
    space = make_space([1.0, 2.0], d=2, rho=3.0, p=1.5)
    rng = np.random.default_rng(73)
    g = BochnerElement(space, rng.standard_normal((2, 2)))
    h = BochnerElement(space, rng.standard_normal((2, 2)))
    fd = fd_derivative(lambda x: x, g, h, [1e-2 * 0.5 ** j for j in range(6)])
    assert np.max(np.abs(fd.estimate.values - h.values)) <= 1e-10


def test_fd_derivative_of_subspace_projection_is_exact():
    space = make_space([1.0, 2.0, 0.5], d=2, rho=1.5, p=3.0)
    a = SupportSet(space, [0, 2])
    rng = np.random.default_rng(74)
    g = BochnerElement(space, rng.standard_normal((3, 2)))
    h = BochnerElement(space, rng.standard_normal((3, 2)))
    fd = fd_derivative(
        lambda x: project_subspace(x, a), g, h, [1e-2 * 0.5 ** j for j in range(6)]
    )
    assert np.max(np.abs(fd.estimate.values - restrict(h, a).values)) <= 1e-10


def test_fd_derivative_matches_ball_closed_form():
    rng = np.random.default_rng(75)
    space = make_space(rng.uniform(0.5, 1.5, 3), d=2, rho=3.0, p=1.5)
    a = SupportSet(space, [0, 1])
    ball = BallSpec(support=a, center=zeros(space), rad=0.7)
    vals = np.zeros((3, 2))
    vals[a.mask] = rng.standard_normal((2, 2))
    probe = BochnerElement(space, vals)
    g = (1.9 * ball.rad / norm_lp(probe)) * probe
    h = BochnerElement(space, rng.standard_normal((3, 2)))
    from bochnerproj import safe_fd_schedule

    fd = fd_derivative(
        lambda x: project_ball(x, ball), g, h, safe_fd_schedule(g, h, ball)
    )
    closed = d_project_ball(g, h, ball)
    err = norm_lp(closed - fd.estimate)
    assert err <= 1e-4 * (1 + norm_lp(closed))
    assert err <= 10.0 * fd.error_bound


def test_fd_derivative_propagates_not_covered():
    from bochnerproj import NOT_COVERED

    space = make_space([1.0], d=1)
    g = BochnerElement(space, np.array([[1.0]]))
    h = BochnerElement(space, np.array([[1.0]]))
    with pytest.raises(ValueError):
        fd_derivative(lambda x: NOT_COVERED, g, h, [1e-2, 5e-3])


def test_oracle_rejects_unknown_feasible_set():
    space = make_space([1.0], d=1)
    g = BochnerElement(space, np.array([[1.0]]))
    with pytest.raises(TypeError):
        oracle_project(g, object())
