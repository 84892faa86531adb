import numpy as np
import pytest

from stsolve import (
    PERIODIC,
    Field,
    HeatLaplacian,
    PinchOffError,
    SurfaceDiffusionRhs,
    laplacian_nonuniform,
    max_eigenvalue_estimate,
    refine_middle_half,
    surface_diffusion_rhs,
    uniform_grid,
)


def _field(grid, values):
    return Field(grid=grid, values=values, time=0.0)


def test_laplacian_unit_impulse_classical_stencil():
    g = uniform_grid(1.0, 16)
    h = 2.0 / 16
    u = np.zeros(g.n_nodes)
    u[8] = 1.0
    r = laplacian_nonuniform(_field(g, u), 1.0)
    assert np.isclose(r[8], -2.0 / h**2, rtol=1e-15)
    assert np.isclose(r[7], 1.0 / h**2, rtol=1e-15)
    assert np.isclose(r[9], 1.0 / h**2, rtol=1e-15)


def test_laplacian_exact_on_quadratics_nonuniform():
    g = refine_middle_half(refine_middle_half(uniform_grid(1.0, 16)))
    alpha = 0.37
    r = laplacian_nonuniform(_field(g, g.nodes**2), alpha)
    assert np.abs(r[1:-1] - 2.0 * alpha).max() == 0.0


def test_laplacian_matches_classical_bitwise_on_uniform():
    g = uniform_grid(1.0, 64)
    u = np.sin(1.0 + g.nodes)
    alpha = 2.0
    r = laplacian_nonuniform(_field(g, u), alpha)
    h = g.spacings[0]
    classical = alpha * ((u[2:] - 2.0 * u[1:-1] + u[:-2]) / (h * h))
    assert np.array_equal(r[1:-1], classical)


def test_laplacian_constant_field_exactly_zero():
    g = refine_middle_half(uniform_grid(1.0, 16))
    r = laplacian_nonuniform(_field(g, np.full(g.n_nodes, 3.7)), 1.0)
    assert np.all(r == 0.0)


def test_laplacian_sine_accuracy():
    # central-difference truncation theory: max error ~ alpha h^2 pi^4 / 12
    g = uniform_grid(1.0, 128)  # h = 1/64
    h = g.spacings[0]
    alpha = 0.9
    u = np.sin(np.pi * g.nodes)
    r = laplacian_nonuniform(_field(g, u), alpha)
    exact = -np.pi**2 * alpha * u
    err = np.abs(r[1:-1] - exact[1:-1]).max()
    assert err < 1.2 * alpha * h**2 * np.pi**4 / 12.0
    assert err < 1e-3 * alpha * np.pi**2  # relative to the rate scale


def test_laplacian_dirichlet_boundary_rates_zero():
    g = uniform_grid(1.0, 16)
    r = laplacian_nonuniform(_field(g, np.cos(g.nodes)), 1.0)
    assert r[0] == 0.0 and r[-1] == 0.0


def test_laplacian_periodic_wraparound():
    g = uniform_grid(np.pi, 64, PERIODIC)
    u = np.sin(g.nodes)  # period 2pi = domain width
    r = laplacian_nonuniform(_field(g, u), 1.0)
    assert np.abs(r + u).max() < 2e-3


def test_heat_eigenvalue_bound():
    g = uniform_grid(1.0, 16)
    h = 2.0 / 16
    f = _field(g, np.zeros(g.n_nodes))
    assert np.isclose(max_eigenvalue_estimate(f, HeatLaplacian(1.0)), 4.0 / h**2, rtol=1e-15)
    g2 = refine_middle_half(g)
    f2 = _field(g2, np.zeros(g2.n_nodes))
    assert np.isclose(max_eigenvalue_estimate(f2, HeatLaplacian(1.0)), 16.0 / h**2, rtol=1e-15)


def test_semilinear_reaction_evaluator():
    from stsolve import SemilinearReaction

    g = uniform_grid(1.0, 8)
    u = np.abs(g.nodes) + 0.5
    assert np.array_equal(SemilinearReaction(3.0)(g, u), u**3.0)
    with pytest.raises(ValueError):
        SemilinearReaction(1.0)


def test_gegenbauer_parameter_fixed():
    from stsolve.integrators import GEGENBAUER_LAMBDA

    assert GEGENBAUER_LAMBDA == 1.5


def test_surface_diffusion_cylinder_equilibrium():
    g = uniform_grid(2 * np.pi, 64, PERIODIC)
    r = surface_diffusion_rhs(_field(g, np.full(g.n_nodes, 0.8)))
    assert np.all(r == 0.0)


def test_surface_diffusion_sphere_second_order():
    R = 10.0
    errs = []
    for n in (64, 128, 256):
        g = uniform_grid(2 * np.pi, n, PERIODIC)
        vals = np.sqrt(R * R - g.nodes**2)
        rates = surface_diffusion_rhs(_field(g, vals))
        mask = np.abs(g.nodes) <= np.pi
        errs.append(np.abs(rates[mask]).max())
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.15)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.15)


def test_surface_diffusion_requires_positive():
    g = uniform_grid(2 * np.pi, 16, PERIODIC)
    vals = np.ones(g.n_nodes)
    vals[3] = -0.1
    with pytest.raises(ValueError):
        SurfaceDiffusionRhs()(g, vals)


def test_surface_diffusion_pinch_threshold_signal():
    g = uniform_grid(2 * np.pi, 16, PERIODIC)
    vals = np.ones(g.n_nodes)
    vals[5] = 1e-12
    with pytest.raises(PinchOffError) as err:
        SurfaceDiffusionRhs(pinch_threshold=1e-10)(g, vals)
    assert err.value.node == 5


def test_surface_diffusion_matches_hand_coded_uniform():
    # independent transcription of the uniform-grid flux formulas
    g = uniform_grid(2 * np.pi, 64, PERIODIC)
    z = g.nodes
    r = 0.75 - 0.45 * np.cos(z / 2.0)
    dx = 4 * np.pi / 64

    def hand(r):
        rp = np.roll(r, -1)
        rm = np.roll(r, 1)
        dr = (rp - rm) / (2 * dx)
        d2r = (rp - 2 * r + rm) / dx**2
        H = 1.0 / (r * np.sqrt(1 + dr**2)) - d2r / (1 + dr**2) ** 1.5
        F = r / np.sqrt(1 + dr**2)
        out = (
            np.roll(F, -1) * (np.roll(H, -2) - H) / (2 * dx)
            - np.roll(F, 1) * (H - np.roll(H, 2)) / (2 * dx)
        ) / (2 * r * dx)
        return out

    got = surface_diffusion_rhs(_field(g, r))
    want = hand(r)
    scale = np.abs(want).max()
    assert np.abs(got - want).max() <= 1e-14 * scale


def test_surface_diffusion_volume_proxy_conserved_uniform():
    g = uniform_grid(2 * np.pi, 128, PERIODIC)
    r = 0.9 + 0.3 * np.sin(g.nodes / 2.0) ** 2
    rates = surface_diffusion_rhs(_field(g, r))
    h = g.spacings
    drift = float(np.sum(2.0 * r * rates * h))
    scale = float(np.sum(np.abs(rates)) * h.max())
    assert abs(drift) <= 1e-10 * max(scale, 1.0)


def test_surface_diffusion_eigenvalue_bound_vs_power_iteration():
    n = 64
    g = uniform_grid(2 * np.pi, n, PERIODIC)
    r0 = np.ones(n)
    rhs = SurfaceDiffusionRhs()
    f0 = rhs(g, r0)
    jac = np.zeros((n, n))
    eps = 1e-7
    for j in range(n):
        rp = r0.copy()
        rp[j] += eps
        jac[:, j] = (rhs(g, rp) - f0) / eps
    # power iteration on J^T J would smear signs; the operator is normal
    # enough here that plain power iteration on J converges
    v = np.ones(n) + 1e-3 * np.cos(3 * g.nodes)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(500):
        w = jac @ v
        lam = np.linalg.norm(w)
        v = w / lam
    bound = max_eigenvalue_estimate(_field(g, r0), rhs)
    assert bound >= lam
    assert bound <= 4.0 * lam
