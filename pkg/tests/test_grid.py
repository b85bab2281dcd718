import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from kgwick.grid import (PhaseSpacePoint, apply_J, apply_mu_power, graph_norm, make_grid, map_R,
                         map_R_inv, reflect_field, shift_field, sobolev_inner, sobolev_norm,
                         space_reflect, time_reflect)
from kgwick.profiles import gaussian_field

G = make_grid(1, 32, 10.0, 1.3)
G2 = make_grid(2, 8, 6.0, 0.7)

finite = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)
field32 = arrays(np.float64, (32,), elements=finite)
field8x8 = arrays(np.float64, (8, 8), elements=finite)


def dft_oracle(grid, z1, z2, s):
    """Explicit O(N^2) DFT double sum, independent of any FFT."""
    n, L = grid.n, grid.box_length
    h = L / n
    j = np.arange(n)
    freqs = 2 * np.pi * np.fft.fftfreq(n, d=h)
    M = np.exp(-1j * np.outer(np.arange(n), j) * 2 * np.pi / n)
    a, b = h * M @ z1, h * M @ z2
    mu2s = (grid.mass ** 2 + freqs ** 2) ** s
    return np.sum(np.conj(a) * mu2s * b) / L


@pytest.mark.parametrize("s", [-1.0, -0.5, 0.0, 0.5, 1.0])
def test_sobolev_matches_double_sum(s):
    r = np.random.default_rng(7)
    z1 = r.standard_normal(32) + 1j * r.standard_normal(32)
    z2 = r.standard_normal(32) + 1j * r.standard_normal(32)
    got = sobolev_inner(G, z1, z2, s)
    assert abs(got - dft_oracle(G, z1, z2, s)) <= 1e-12 * max(1.0, abs(got))


def test_gaussian_norms_against_closed_form():
    # int a^2 exp(-x^2/w^2) = a^2 w sqrt(pi); the gradient term adds a^2 sqrt(pi) / (2 w)
    g = make_grid(1, 256, 40.0, 1.0)
    a, w = 0.3, 1.5
    f = gaussian_field(g, a, w)
    assert sobolev_norm(g, f, 0) ** 2 == pytest.approx(a * a * w * np.sqrt(np.pi), rel=1e-13)
    h1 = a * a * np.sqrt(np.pi) * (w + 1 / (2 * w))
    assert sobolev_norm(g, f, 1) ** 2 == pytest.approx(h1, rel=1e-13)


@pytest.mark.parametrize("bad", [dict(dim=4), dict(n=12), dict(n=4), dict(box_length=0.0),
                                 dict(mass=0.0), dict(coupling=-0.1)])
def test_grid_rejects_bad_parameters(bad):
    kw = dict(dim=1, n=32, box_length=10.0, mass=1.0, coupling=0.0) | bad
    with pytest.raises(ValueError):
        make_grid(**kw)


def test_check_rejects_wrong_shape():
    with pytest.raises(ValueError):
        apply_mu_power(G, np.zeros(31), 1)


def test_mu_power_real_in_real_out():
    f = np.sin(np.linspace(0, 3, 32))
    out = apply_mu_power(G, f, 0.5)
    assert out.dtype == np.float64


@settings(max_examples=30, deadline=None)
@given(field32, field32)
def test_J_squares_to_minus_one(phi, pi):
    d = PhaseSpacePoint(phi, pi)
    jj = apply_J(G, apply_J(G, d))
    assert np.max(np.abs(jj.phi + phi)) <= 1e-13 * max(1, np.max(np.abs(phi)))
    assert np.max(np.abs(jj.pi + pi)) <= 1e-13 * max(1, np.max(np.abs(pi))) * 10


@settings(max_examples=30, deadline=None)
@given(field8x8, field8x8)
def test_R_intertwines_J_with_i(phi, pi):
    d = PhaseSpacePoint(phi, pi)
    assert np.max(np.abs(map_R(G2, apply_J(G2, d)) - 1j * map_R(G2, d))) <= 1e-13
    back = map_R_inv(G2, map_R(G2, d))
    assert np.max(np.abs(back.phi - phi)) + np.max(np.abs(back.pi - pi)) <= 1e-13


@settings(max_examples=30, deadline=None)
@given(field32, field32, field32, field32, st.sampled_from([0.0, 0.5, 1.0]))
def test_sobolev_hermitian_and_positive(a, b, c, d, s):
    z1, z2 = a + 1j * b, c + 1j * d
    assert abs(sobolev_inner(G, z1, z2, s) - np.conj(sobolev_inner(G, z2, z1, s))) <= 1e-12
    assert np.real(sobolev_inner(G, z1, z1, s)) >= 0


@settings(max_examples=30, deadline=None)
@given(field32, st.sampled_from([-1.0, 0.5, 1.0]), st.sampled_from([-0.5, 1.0, 2.0]))
def test_mu_powers_compose(f, s, t):
    lhs = apply_mu_power(G, apply_mu_power(G, f, s), t)
    rhs = apply_mu_power(G, f, s + t)
    assert np.max(np.abs(lhs - rhs)) <= 1e-11 * max(1.0, np.max(np.abs(rhs)))


def test_graph_norm_is_h1_plus_l2():
    r = np.random.default_rng(3)
    d = PhaseSpacePoint(r.standard_normal(32), r.standard_normal(32))
    want = np.sqrt(sobolev_norm(G, d.phi, 1) ** 2 + sobolev_norm(G, d.pi, 0) ** 2)
    assert graph_norm(G, d) == pytest.approx(want, rel=1e-13)


def test_reflections_are_involutions():
    r = np.random.default_rng(4)
    d = PhaseSpacePoint(r.standard_normal((8, 8)), r.standard_normal((8, 8)))
    dd = space_reflect(G2, space_reflect(G2, d))
    assert np.array_equal(dd.phi, d.phi) and np.array_equal(dd.pi, d.pi)
    tt = time_reflect(time_reflect(d))
    assert np.array_equal(tt.pi, d.pi)
    # x -> -x keeps the origin sample fixed
    f = r.standard_normal(32)
    assert reflect_field(G, f)[16] == f[16]


def test_shift_moves_peak():
    f = gaussian_field(G, 1.0, 0.5)
    g = shift_field(G, f, 3)
    assert np.argmax(g) == np.argmax(f) + 3


def test_batched_leading_axes():
    r = np.random.default_rng(5)
    z = r.standard_normal((3, 32)) + 1j * r.standard_normal((3, 32))
    batch = sobolev_inner(G, z, z, 0.5)
    assert batch.shape == (3,)
    for i in range(3):
        assert batch[i] == pytest.approx(sobolev_inner(G, z[i], z[i], 0.5), rel=1e-14)
