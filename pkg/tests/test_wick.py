import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kgwick import wick
from kgwick.evolution import IntegratorParams, free_flow_z, pde_residual
from kgwick.fock import CoherentCombo, coherent_inner
from kgwick.grid import make_grid, map_R_inv
from kgwick.profiles import gaussian_field, random_profile, random_test_function
from kgwick.scattering import MatchingParams

G = make_grid(1, 64, 16.0, 1.0, 0.1)
MP = MatchingParams(3.0, IntegratorParams(0.02, 4))


def pair(seed, amp=0.2):
    r = np.random.default_rng(seed)
    return random_profile(G, r, amp), random_profile(G, r, amp)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_kernel_hermitian(seed):
    z1, z2 = pair(seed)
    a = wick.kernel(G, z1, z2, MP)
    b = wick.kernel(G, z2, z1, MP)
    assert np.max(np.abs(b.full - np.conj(a.full))) <= 1e-12


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_free_reduction(seed):
    z1, z2 = pair(seed)
    kv = wick.kernel(G, z1, z2, MP, coupling=0.0)
    assert np.max(np.abs(kv.profile - (np.conj(z1) + z2))) <= 1e-12
    assert kv.prefactor == pytest.approx(coherent_inner(G, z1, z2), rel=1e-15)


def test_bilinear_form_sesquilinear():
    z = [random_profile(G, np.random.default_rng(i), 0.2) for i in range(3)]
    chi = CoherentCombo([(1.0, z[0]), (0.3 - 0.2j, z[1])])
    psi = CoherentCombo([(0.7j, z[2])])
    base = wick.bilinear_form(G, chi, psi, MP)
    c = 0.4 + 1.1j
    assert np.max(np.abs(wick.bilinear_form(G, chi.scaled(c), psi, MP) - np.conj(c) * base)) <= 1e-12
    assert np.max(np.abs(wick.bilinear_form(G, chi, psi.scaled(c), MP) - c * base)) <= 1e-12
    # additivity in the second slot reproduces the single-term kernels
    single = wick.kernel(G, z[0], z[2], MP).full * 0.7j
    combo = wick.bilinear_form(G, CoherentCombo([(1.0, z[0])]), psi, MP)
    assert np.max(np.abs(combo - single)) <= 1e-12
    assert not np.any(wick.bilinear_form(G, CoherentCombo([]), psi, MP))


def test_smear_forms_agree():
    z1, z2 = pair(5)
    h = random_test_function(G, np.random.default_rng(6))
    kv = wick.kernel(G, z1, z2, MP)
    assert abs(wick.smear(G, kv, h) - wick.smear_pairing(G, kv, h)) <= 1e-12
    plain = wick.KernelValue(kv.prefactor, kv.profile)
    assert abs(wick.smear(G, kv, h) - wick.smear_pairing(G, plain, h)) <= 1e-12


def test_out_kernel_hermitian():
    z1, z2 = pair(8)
    a = wick.kernel_out(G, z1, z2, MP)
    b = wick.kernel_out(G, z2, z1, MP)
    assert np.max(np.abs(b.full - np.conj(a.full))) <= 1e-12


def test_free_kernel_holomorphic():
    # at zero coupling the smeared kernel is exactly (anti)holomorphic; only the
    # O(step^2) truncation of the central differences remains
    z1, z2 = pair(9)
    h = gaussian_field(G, 1.0, 1.0)
    rep = wick.holomorphy_check(G, (z1, z2), h, 0.1, MP, coupling=0.0, steps=(0.004, 0.002),
                                measure_noise=False)
    assert max(rep.cr_holo + rep.cr_antiholo) <= 1e-10
    assert max(rep.cauchy_holo, rep.cauchy_antiholo) <= 1e-13


def test_free_kernel_cr_slope_is_two():
    z1, z2 = pair(10)
    h = gaussian_field(G, 1.0, 1.0)
    rep = wick.holomorphy_check(G, (z1, z2), h, 0.1, MP, coupling=0.0, steps=(0.2, 0.1, 0.05),
                                measure_noise=False)
    assert all(abs(s - 2.0) <= 0.05 for s in rep.slopes("holo"))


def test_free_diagonal_is_classical():
    z = random_profile(G, np.random.default_rng(11), 0.2)
    ratios, res = [], []
    for h in (0.02, 0.01):
        u = wick.diagonal_trajectory(G, z, [1.0 - h, 1.0, 1.0 + h], MP, coupling=0.0)
        res.append(pde_residual(G, [map_R_inv(G, v) for v in u], h, coupling=0.0))
    assert res[0] / res[1] == pytest.approx(4.0, abs=0.05)
    # the free diagonal is 2 Re of the freely evolved profile
    u = wick.diagonal_trajectory(G, z, [0.7], MP, coupling=0.0)[0]
    assert np.max(np.abs(u - 2 * free_flow_z(G, z, 0.7).real)) <= 1e-13


def test_kernel_evolved_damping():
    z1, z2 = pair(12)
    with pytest.raises(ValueError):
        wick.kernel_evolved(G, z1, z2, 0.0, -1.0, 0.0, 0.0, MP)
    a = wick.kernel_evolved(G, z1, z2, 0.0, 0.0, 0.0, 0.0, MP)
    assert np.max(np.abs(a.full - wick.kernel(G, z1, z2, MP).full)) <= 1e-15


def test_covariance_exact_on_lattice():
    z1, z2 = pair(13)
    assert wick.covariance_check(G, z1, z2, 0.5, 2.0, MP) <= 1e-12
    assert wick.covariance_check(G, z1, z2, 0.5, 2.0, MP, coupling=0.0) <= 1e-12
    assert wick.covariance_check(G, z1, z2, 0.0, 0.0, MP) == 0.0
    with pytest.raises(ValueError):
        wick.lattice_shift(G, 0.1)


def test_bound_ratio_finite_and_zero_guard():
    z1, z2 = pair(14)
    h = gaussian_field(G, 1.0, 1.0)
    rep = wick.bound_check(G, [(z1, z2), (2 * z1, 2 * z2)], h, MP)
    assert all(np.isfinite(rep.ratios)) and 0 < rep.max_ratio < 1.0
    assert wick.bound_ratio(G, z1, -np.conj(z1), h, MP) == 0.0
    assert wick.bound_check(G, [], h, MP).max_ratio == 0.0


def test_batched_kernel_matches_single():
    z1, z2 = pair(15)
    batch = wick.kernel(G, np.stack([z1, z2]), np.stack([z2, z1]), MP)
    one = wick.kernel(G, z2, z1, MP)
    assert np.max(np.abs(batch.full[1] - one.full)) <= 1e-14
