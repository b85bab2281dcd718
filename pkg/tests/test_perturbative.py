import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kgwick import perturbative as pt
from kgwick import scattering as sc
from kgwick.evolution import IntegratorParams
from kgwick.fock import CoherentCombo, coherent_inner
from kgwick.grid import make_grid, map_R_inv, sobolev_norm
from kgwick.profiles import random_profile, random_test_function

G = make_grid(1, 64, 16.0, 1.0, 0.1)
MP = sc.MatchingParams(3.0, IntegratorParams(0.02, 4))
# the trapezoid Born term and the splitting scheme differ at O(eps^3 dt^2); a
# finer step keeps that floor below the fifth-order remainder
MP_FINE = sc.MatchingParams(3.0, IntegratorParams(0.00125, 4))
EPS = (0.05, 0.1, 0.2, 0.4)


def unit_profile(seed):
    z = random_profile(G, np.random.default_rng(seed), 1.0)
    return z / sobolev_norm(G, z, 1.0)


def product_oracle(grid, fs, chi1, chi2):
    """Closed form on coherent vectors: prod_k int f_k (conj z1 + z2) times the overlap."""
    total = 0j
    for (a1, z1), (a2, z2) in itertools.product(chi1.terms, chi2.terms):
        w = np.conj(z1) + z2
        prod = np.prod([grid.integrate(f * w) for f in fs])
        total += np.conj(a1) * a2 * coherent_inner(grid, z1, z2) * prod
    return total


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_wick_monomial_product_form(n):
    r = np.random.default_rng(n)
    fs = [random_test_function(G, r) for _ in range(n)]
    zs = [random_profile(G, r, 0.3) for _ in range(3)]
    chi1 = CoherentCombo([(1.0, zs[0]), (0.5j, zs[1])])
    chi2 = CoherentCombo([(0.8 - 0.1j, zs[2])])
    got = pt.wick_monomial(G, fs, chi1, chi2)
    want = product_oracle(G, fs, chi1, chi2)
    assert abs(got - want) <= 1e-12 * max(1.0, abs(want))


def test_wick_monomial_limits():
    f = random_test_function(G, np.random.default_rng(0))
    chi = CoherentCombo([(1.0, random_profile(G, np.random.default_rng(1), 0.2))])
    with pytest.raises(ValueError):
        pt.wick_monomial(G, [f] * 5, chi, chi)


def test_annihilation_eigenvalue():
    f = random_test_function(G, np.random.default_rng(2))
    z = random_profile(G, np.random.default_rng(3), 0.2)
    assert pt.annihilation_eigenvalue(G, f, z) == pytest.approx(math.sqrt(2) * G.integrate(f * z))
    assert pt.annihilation_eigenvalue(G, f, 2j * z) == pytest.approx(2j * pt.annihilation_eigenvalue(G, f, z))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2 ** 31), st.floats(0.1, 3.0))
def test_born_third_is_cubic_and_linear_in_coupling(seed, c):
    z = unit_profile(seed)
    b = pt.born_third(G, z, MP)
    assert np.max(np.abs(pt.born_third(G, c * z, MP) - c ** 3 * b)) <= 1e-12 * c ** 3 * max(1, np.max(np.abs(b)))
    assert np.max(np.abs(pt.born_third(G, z, MP, 0.2) - 2 * b)) <= 1e-14 * max(1, np.max(np.abs(b))) * 10
    assert not np.any(pt.born_third(G, z, MP, 0.0))


def test_born_first_copies():
    z = unit_profile(4)
    b = pt.born_first(z)
    assert np.array_equal(b, z) and b is not z


def test_scaling_exponents():
    z = unit_profile(5)
    assert pt.order_scaling(G, z, MP, EPS).exponent == pytest.approx(3.0, abs=0.1)
    assert pt.remainder_scaling(G, z, MP_FINE, EPS).exponent == pytest.approx(5.0, abs=0.4)
    par = pt.parity(G, z, MP, EPS)
    assert par.exponent >= 2.8


def test_coupling_scaling_slope_one():
    d = map_R_inv(G, 0.2 * unit_profile(6))
    fit = pt.coupling_scaling(G, d, MP, (0.025, 0.05, 0.1, 0.2), sc.scatter)
    assert fit.exponent == pytest.approx(1.0, abs=0.05)


def test_kernel_vs_born_slope_two():
    r = np.random.default_rng(7)
    z1, z2 = random_profile(G, r, 0.2), random_profile(G, r, 0.2)
    fit = pt.kernel_vs_born_scaling(G, z1, z2, MP, (0.025, 0.05, 0.1, 0.2))
    assert fit.exponent == pytest.approx(2.0, abs=0.3)


def test_degenerate_fits():
    fit = pt._scaling([1, 2], [0.0, 0.0], 0.0)
    assert fit.degenerate and fit.exponent == math.inf
    fit = pt._scaling([1, 2], [0.0, 1.0], 0.0)
    assert fit.degenerate and math.isnan(fit.exponent)
