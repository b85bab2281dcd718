import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kgwick import evolution as ev
from kgwick.grid import PhaseSpacePoint, graph_distance, make_grid, map_R, sobolev_norm
from kgwick.profiles import gaussian_field, mode_field, random_phase_point


def mode_exact(grid, k, a, t):
    mu = math.sqrt(grid.mass ** 2 + grid.dim * (2 * math.pi * k / grid.box_length) ** 2)
    base = mode_field(grid, k, a)
    return PhaseSpacePoint(math.cos(mu * t) * base, -mu * math.sin(mu * t) * base)


@pytest.mark.parametrize("dim,n", [(1, 64), (2, 16), (3, 8)])
@pytest.mark.parametrize("t", [0.3, 7.1, -2.5])
def test_free_single_mode_analytic(dim, n, t):
    g = make_grid(dim, n, 12.0, 1.0)
    d0 = mode_exact(g, 2, 0.5, 0.0)
    got = ev.free_propagate(g, d0, t)
    assert graph_distance(g, got, mode_exact(g, 2, 0.5, t)) <= 1e-12


@settings(max_examples=20, deadline=None)
@given(st.floats(-50, 50), st.integers(0, 2 ** 31))
def test_free_flow_preserves_norms(t, seed):
    g = make_grid(1, 32, 10.0, 1.0)
    r = np.random.default_rng(seed)
    z = r.standard_normal(32) + 1j * r.standard_normal(32)
    zt = ev.free_flow_z(g, z, t)
    for s in (0.0, 0.5, 1.0):
        assert abs(sobolev_norm(g, zt, s) - sobolev_norm(g, z, s)) <= 1e-13 * max(1, sobolev_norm(g, z, s)) * 10
    assert np.max(np.abs(zt - ev.free_phase(g, z, t))) <= 1e-12


def test_damped_flow_limits(grid1, rng):
    z = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    assert np.allclose(ev.damped_flow_z(grid1, z, 0.7, 0.0), ev.free_flow_z(grid1, z, -0.7),
                       atol=1e-13)
    damped = ev.damped_flow_z(grid1, z, 0.0, 2.0)
    assert sobolev_norm(grid1, damped, 0) <= math.exp(-2.0) * sobolev_norm(grid1, z, 0) + 1e-15
    with pytest.raises(ValueError):
        ev.damped_flow_z(grid1, z, 0.0, -0.1)


def test_zero_coupling_matches_free(grid1):
    d = random_phase_point(grid1, np.random.default_rng(0), 0.2)
    got = ev.nonlinear_evolve(grid1, d, 1.3, ev.IntegratorParams(0.01), coupling=0.0)
    assert graph_distance(grid1, got, ev.free_propagate(grid1, d, 1.3)) <= 1e-13


def test_reversibility(grid1):
    d = random_phase_point(grid1, np.random.default_rng(1), 0.3)
    p = ev.IntegratorParams(0.01, 4)
    back = ev.nonlinear_evolve(grid1, ev.nonlinear_evolve(grid1, d, 2.0, p), -2.0, p)
    assert graph_distance(grid1, back, d) <= 1e-9


@pytest.mark.parametrize("order,lo,hi", [(2, 3.7, 4.3), (4, 14.0, 18.5)])
def test_convergence_order(order, lo, hi):
    g = make_grid(1, 64, 16.0, 1.0, 1.0)
    d = PhaseSpacePoint(gaussian_field(g, 1.0, 1.5), np.zeros(64))
    ref = ev.nonlinear_evolve(g, d, 2.0, ev.IntegratorParams(0.0025, 4))
    errs = [graph_distance(g, ev.nonlinear_evolve(g, d, 2.0, ev.IntegratorParams(dt, order)), ref)
            for dt in (0.1, 0.05)]
    assert lo <= errs[0] / errs[1] <= hi


def test_energy_conserved(grid1):
    d = random_phase_point(grid1, np.random.default_rng(2), 0.3)
    e0 = ev.energy(grid1, d)
    e1 = ev.energy(grid1, ev.nonlinear_evolve(grid1, d, 5.0, ev.IntegratorParams(0.01)))
    assert abs(e1 - e0) / e0 <= 1e-8


def test_batched_evolution_matches_single(grid1):
    r = np.random.default_rng(3)
    ds = [random_phase_point(grid1, r, 0.3) for _ in range(3)]
    batch = PhaseSpacePoint(np.stack([d.phi for d in ds]), np.stack([d.pi for d in ds]))
    p = ev.IntegratorParams(0.05)
    out = ev.nonlinear_evolve(grid1, batch, 1.0, p)
    for i, d in enumerate(ds):
        one = ev.nonlinear_evolve(grid1, d, 1.0, p)
        assert np.max(np.abs(out.phi[i] - one.phi)) <= 1e-14


def test_step_is_shrunk_to_land_on_target(grid1):
    d = random_phase_point(grid1, np.random.default_rng(4), 0.2)
    p = ev.IntegratorParams(0.03)
    # 1.0 / 0.03 is not an integer; the run must still end exactly at t = 1
    a = ev.nonlinear_evolve(grid1, d, 1.0, p)
    b = ev.nonlinear_evolve(grid1, d, 1.0, ev.IntegratorParams(1.0 / 34))
    assert graph_distance(grid1, a, b) == 0.0


def test_pde_residual_of_free_solution_is_second_order():
    g = make_grid(1, 64, 16.0, 1.0)
    d = mode_exact(g, 3, 0.4, 0.0)
    res = []
    for h in (0.02, 0.01):
        snaps = [ev.free_propagate(g, d, t) for t in (1.0 - h, 1.0, 1.0 + h)]
        res.append(ev.pde_residual(g, snaps, h, coupling=0.0))
    assert res[0] / res[1] == pytest.approx(4.0, abs=0.05)


def test_blowup_guard():
    g = make_grid(1, 32, 10.0, 1.0, 1.0)
    with pytest.raises(ev.BlowUpError):
        ev.nonlinear_evolve(g, PhaseSpacePoint(np.full(32, 1e4), np.zeros(32)), 1.0,
                            ev.IntegratorParams(0.5, 2))


def test_integrator_params_validate():
    with pytest.raises(ValueError):
        ev.IntegratorParams(dt=0.0)
    with pytest.raises(ValueError):
        ev.IntegratorParams(order=3)
    assert ev.IntegratorParams(0.1).refined().dt == 0.05


def test_energy_log_columns(grid1):
    d = PhaseSpacePoint(gaussian_field(grid1, 0.2, 1.0), np.zeros(64))
    rows = ev.energy_log(grid1, [d], [0.0])
    t, e, sup, l2 = rows[0]
    assert t == 0.0 and sup == pytest.approx(0.2)
    assert l2 == pytest.approx(sobolev_norm(grid1, d.phi, 0), rel=1e-12)
    assert e == pytest.approx(ev.energy(grid1, d))
