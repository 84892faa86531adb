import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st_

from stsolve import (
    DIRICHLET,
    PERIODIC,
    Field,
    ReactionBlowUpError,
    SchemeSpec,
    cfl_limit,
    reaction_exact,
    strang_step,
    superstep,
    uniform_grid,
)
from stsolve.operators import HeatLaplacian


def test_reaction_exact_p2():
    out = reaction_exact(np.array([1.0]), 2.0, 0.5)
    assert out[0] == pytest.approx(2.0, rel=1e-14)


def test_reaction_exact_p3_quarter():
    out = reaction_exact(np.array([1.0]), 3.0, 0.25)
    assert out[0] == pytest.approx(np.sqrt(2.0), rel=1e-14)


def test_reaction_zero_fixed_point():
    out = reaction_exact(np.array([0.0, 1.0, 0.0]), 2.5, 0.01)
    assert out[0] == 0.0 and out[2] == 0.0
    assert out[1] > 1.0


def test_reaction_cross_checked_against_ode_integration():
    # high-accuracy RK4 oracle on u' = u^p
    p, h, u0 = 3.0, 0.25, 1.0
    n = 20000
    dt = h / n
    u = u0
    for _ in range(n):
        k1 = u**p
        k2 = (u + 0.5 * dt * k1) ** p
        k3 = (u + 0.5 * dt * k2) ** p
        k4 = (u + dt * k3) ** p
        u += dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
    got = reaction_exact(np.array([u0]), p, h)[0]
    assert got == pytest.approx(u, rel=1e-10)


def test_reaction_blow_up_detected_with_node():
    vals = np.array([0.5, 2.0, 0.1])
    # node 1 has horizon u^(1-p)/(p-1) = 1/2 at p=2
    with pytest.raises(ReactionBlowUpError) as err:
        reaction_exact(vals, 2.0, 0.6)
    assert err.value.node == 1


def test_reaction_rejects_negative_values():
    with pytest.raises(ValueError):
        reaction_exact(np.array([-0.1, 1.0]), 2.0, 0.1)


@settings(max_examples=50, deadline=None)
@given(
    u=st_.lists(st_.floats(min_value=0.0, max_value=5.0), min_size=2, max_size=8),
    delta=st_.floats(min_value=1e-6, max_value=1.0),
)
def test_reaction_monotone_in_initial_data(u, delta):
    u = np.asarray(u)
    p = 2.0
    h = 0.01
    hi = reaction_exact(u + delta, p, h)
    lo = reaction_exact(u, p, h)
    assert np.all(hi >= lo)


def _heat_setup(n=64, bc=DIRICHLET):
    g = uniform_grid(1.0, n, bc)
    u0 = np.maximum(0.0, np.cos(np.pi * g.nodes / 2.0)) ** 2 * 4.0
    if bc == DIRICHLET:
        u0[0] = u0[-1] = 0.0
    return g, u0


def test_strang_reaction_disabled_equals_pure_diffusion():
    g, u0 = _heat_setup()
    f = Field(grid=g, values=u0, time=0.0)
    spec = SchemeSpec("rkl2", 6)
    rhs = HeatLaplacian(1.0)
    h = g.spacings[0]
    dt = 0.5 * cfl_limit("rkl2", 6) * h * h
    split = strang_step(f, spec, None, 1.0, dt)
    pure = superstep(spec, f, rhs, dt)
    vals = pure.values.copy()
    vals[0] = vals[-1] = 0.0
    assert np.array_equal(split.values, vals)


def test_strang_alpha_zero_is_exact_reaction_flow():
    g, u0 = _heat_setup()
    f = Field(grid=g, values=u0, time=0.0)
    dt = 1e-3
    out = strang_step(f, SchemeSpec("rkl2", 8), 3.0, 0.0, dt)
    want = reaction_exact(u0, 3.0, dt)
    want[0] = want[-1] = 0.0
    assert np.abs(out.values - want).max() <= 1e-13 * np.abs(want).max()
    assert out.time == dt


def test_strang_self_convergence_second_order():
    g, u0 = _heat_setup(n=32)
    spec = SchemeSpec("rkl2", 8)
    t_end = 0.02
    errs, dts = [], []
    ref_steps = 512
    ref = Field(grid=g, values=u0, time=0.0)
    for _ in range(ref_steps):
        ref = strang_step(ref, spec, 3.0, 1.0, t_end / ref_steps)
    for steps in (8, 16, 32, 64):
        f = Field(grid=g, values=u0, time=0.0)
        for _ in range(steps):
            f = strang_step(f, spec, 3.0, 1.0, t_end / steps)
        errs.append(np.abs(f.values - ref.values).max())
        dts.append(t_end / steps)
    slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.1)


def test_strang_monotone_comparison_periodic():
    g = uniform_grid(1.0, 32, PERIODIC)
    rng = np.random.default_rng(3)
    base = 1.0 + 0.5 * np.cos(np.pi * g.nodes) ** 2
    u = base.copy()
    v = base + 0.25 * (1.0 + np.sin(2 * np.pi * g.nodes))
    s = 5
    spec = SchemeSpec("rkl2", s)
    h = g.spacings[0]
    dt = cfl_limit("rkl2", s) * h * h  # exactly at the monotone limit
    fu = Field(grid=g, values=u, time=0.0)
    fv = Field(grid=g, values=v, time=0.0)
    for _ in range(25):
        fu = strang_step(fu, spec, 2.0, 1.0, dt)
        fv = strang_step(fv, spec, 2.0, 1.0, dt)
        norm = np.abs(fv.values).max()
        assert np.all(fv.values >= fu.values - 1e-12 * norm)


def test_strang_positivity_preserved():
    g, u0 = _heat_setup(n=32, bc=PERIODIC)
    f = Field(grid=g, values=u0, time=0.0)
    s = 7
    spec = SchemeSpec("rkg2", s)
    h = g.spacings[0]
    dt = 0.9 * cfl_limit("rkg2", s) * h * h
    for _ in range(20):
        f = strang_step(f, spec, 2.0, 1.0, dt)
        assert f.values.min() >= -1e-13 * max(1.0, f.values.max())
