import numpy as np
import pytest

from stsolve import (
    DIRICHLET,
    PERIODIC,
    BandedSystem,
    Field,
    NewtonDivergenceError,
    SchemeSpec,
    backward_euler_surfdiff_step,
    semiimplicit_heat_step,
    superstep,
    uniform_grid,
)
from stsolve.operators import SurfaceDiffusionRhs


def test_banded_solve_matches_dense():
    rng = np.random.default_rng(11)
    for n in (5, 12, 20):
        a = np.zeros((n, n))
        for i in range(n):
            for j in range(max(0, i - 2), min(n, i + 3)):
                a[i, j] = rng.standard_normal()
            a[i, i] += 5.0
        rhs = rng.standard_normal(n)
        got = BandedSystem.from_dense(a, rhs, 2, 2).solve()
        want = np.linalg.solve(a, rhs)
        assert np.abs(got - want).max() <= 1e-12 * np.abs(want).max()


def test_semiimplicit_amplification_factor():
    n = 128
    g = uniform_grid(1.0, n, DIRICHLET)
    u = np.sin(np.pi * g.nodes)
    dt = 1e-3
    alpha = 1.0
    f = Field(grid=g, values=u, time=0.0)
    out = semiimplicit_heat_step(f, None, alpha, dt)
    # sin(pi x) is an eigenvector of the discrete Laplacian
    h = 2.0 / n
    lam_h = -(4.0 / h**2) * np.sin(np.pi * h / 2.0) ** 2
    factor = 1.0 / (1.0 - dt * lam_h)
    interior = slice(1, -1)
    assert np.abs(out.values[interior] - factor * u[interior]).max() < 1e-12
    # continuum factor within spatial-discretization error
    assert factor == pytest.approx(1.0 / (1.0 + dt * np.pi**2 * alpha), rel=1e-3)


def test_semiimplicit_dt_to_zero_limit():
    g = uniform_grid(1.0, 32, DIRICHLET)
    u = np.cos(g.nodes)
    u[0] = u[-1] = 0.0
    f = Field(grid=g, values=u, time=0.0)
    out = semiimplicit_heat_step(f, 2.0, 1.0, 1e-12)
    assert np.abs(out.values - u).max() < 1e-9


def test_semiimplicit_vs_dense_solve_oracle():
    g = uniform_grid(1.0, 4, DIRICHLET)  # 5-node system
    u = np.array([0.0, 0.3, 1.0, 0.3, 0.0])
    p, alpha, dt = 2.0, 1.0, 0.01
    f = Field(grid=g, values=u, time=0.0)
    got = semiimplicit_heat_step(f, p, alpha, dt).values
    # dense assembly oracle
    n = 5
    h = 0.5
    lap = np.zeros((n, n))
    for i in range(1, n - 1):
        lap[i, i - 1] = alpha / h**2
        lap[i, i] = -2 * alpha / h**2
        lap[i, i + 1] = alpha / h**2
    a = np.eye(n) - dt * lap
    rhs = u + dt * u**p
    rhs[0] = rhs[-1] = 0.0
    want = np.linalg.solve(a, rhs)
    assert np.abs(got - want).max() <= 1e-13 * np.abs(want).max()


def test_semiimplicit_unconditionally_stable_pure_heat():
    g = uniform_grid(1.0, 64, DIRICHLET)
    u = np.sin(np.pi * g.nodes) + 0.4 * np.sin(3 * np.pi * g.nodes)
    f = Field(grid=g, values=u, time=0.0)
    for dt in (1e-3, 0.1, 10.0, 1e4):
        out = semiimplicit_heat_step(f, None, 1.0, dt)
        assert np.abs(out.values).max() <= np.abs(u).max() + 1e-12


def test_backward_euler_constant_is_fixed_point():
    g = uniform_grid(2 * np.pi, 32, PERIODIC)
    r = np.full(g.n_nodes, 0.7)
    f = Field(grid=g, values=r, time=0.0)
    out = backward_euler_surfdiff_step(f, 1e-3)
    assert np.array_equal(out.values, r)
    assert out.time == 1e-3


def test_backward_euler_matches_explicit_at_small_dt():
    g = uniform_grid(2 * np.pi, 64, PERIODIC)
    r = 0.9 - 0.3 * np.cos(g.nodes / 2.0)
    f = Field(grid=g, values=r, time=0.0)
    rhs = SurfaceDiffusionRhs()
    dt = 1e-7
    implicit = backward_euler_surfdiff_step(f, dt, newton_tol=1e-13)
    explicit = superstep(SchemeSpec("rkl2", 8), f, rhs, dt)
    diff = np.abs(implicit.values - explicit.values).max()
    step_change = np.abs(explicit.values - r).max()
    # schemes agree to O(dt^2): difference far below the O(dt) step change
    assert diff < 5e-3 * step_change


def test_backward_euler_diverges_cleanly_on_huge_dt():
    g = uniform_grid(2 * np.pi, 64, PERIODIC)
    r = 0.2 + 0.19 * np.cos(g.nodes / 2.0) ** 2 * 0 + np.abs(np.cos(g.nodes / 4.0)) * 0.0 + 0.01
    # near-pinch profile with a deep thin neck
    r = 0.01 + 0.8 * (1 - np.cos(g.nodes / 2.0)) / 2.0
    f = Field(grid=g, values=r, time=0.0)
    with pytest.raises(NewtonDivergenceError):
        backward_euler_surfdiff_step(f, 1e3, max_iters=4, retry_budget=1)
