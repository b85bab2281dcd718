"""Born expansion of the wave operator and Wick monomials on coherent vectors."""
import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft

from .fock import coherent_inner
from .grid import PhaseSpacePoint, graph_distance, graph_norm, map_R, map_R_inv, sobolev_norm
from .wick import kernel, rwr


def born_first(z):
    """First-order term: the in-profile itself."""
    return np.array(z, dtype=complex, copy=True)


def born_third(grid, z, mp, coupling=None):
    """Cubic Born term of ``R W_in R^{-1}`` at ``z``.

    ``-lam int_{-T}^0 U_0(-tau) (0, u_in(tau)^3) dtau`` in the z-coordinate,
    with ``u_in`` the free solution of ``R^{-1} z`` and the trapezoid rule on
    the integrator's step.  The cube is projected like the solver's kick.
    """
    lam = grid.coupling if coupling is None else coupling
    z = np.asarray(z, complex)
    if lam == 0:
        return np.zeros_like(z)
    d = map_R_inv(grid, z)
    phi0 = sfft.rfftn(d.phi, axes=grid.axes)
    pi0 = sfft.rfftn(d.pi, axes=grid.axes)
    mu = grid.mu_half
    mask = grid.dealias_mask if mp.integrator.dealias else 1.0
    nsteps = max(int(math.ceil(mp.T / mp.integrator.dt - 1e-9)), 1)
    taus = np.linspace(-mp.T, 0.0, nsteps + 1)
    weights = np.full(nsteps + 1, mp.T / nsteps)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    # accumulate U_0(-tau)(0, src) = (sin(mu tau)/mu * (-src), cos(mu tau) src)
    acc_phi = np.zeros_like(phi0)
    acc_pi = np.zeros_like(phi0)
    for tau, wgt in zip(taus, weights):
        c, s = np.cos(mu * tau), np.sin(mu * tau)
        u_hat = (c * phi0 + (s / mu) * pi0) * mask
        u = sfft.irfftn(u_hat, s=grid.shape, axes=grid.axes)
        src = sfft.rfftn(u * u * u, axes=grid.axes) * mask * wgt
        acc_phi -= (s / mu) * src
        acc_pi += c * src
    out = PhaseSpacePoint(-lam * sfft.irfftn(acc_phi, s=grid.shape, axes=grid.axes),
                          -lam * sfft.irfftn(acc_pi, s=grid.shape, axes=grid.axes))
    return map_R(grid, out)


def _fit(x, y):
    x, y = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    return float(np.polyfit(x, y, 1)[0])


@dataclass
class ScalingFit:
    eps: list
    values: list
    exponent: float
    degenerate: bool = False
    notes: list = field(default_factory=list)


def _scaling(eps_list, values, floor):
    eps_list, values = list(map(float, eps_list)), list(map(float, values))
    if max(values) <= floor:
        return ScalingFit(eps_list, values, math.inf, True, ["all values at or below floor"])
    if min(values) <= 0:
        return ScalingFit(eps_list, values, math.nan, True, ["non-positive value in fit"])
    return ScalingFit(eps_list, values, _fit(eps_list, values))


def _batched_rwr(grid, profiles, mp, coupling):
    return rwr(grid, np.stack(profiles), mp, coupling)


def order_scaling(grid, z, mp, eps_list, coupling=None, floor=1e-14):
    """Fit ``||rwr(eps z) - eps z||_{H^1} ~ eps^q``; ``q`` should be 3."""
    z = np.asarray(z, complex)
    images = _batched_rwr(grid, [e * z for e in eps_list], mp, coupling)
    vals = [sobolev_norm(grid, im - e * z, 1.0) for e, im in zip(eps_list, images)]
    return _scaling(eps_list, vals, floor * max(eps_list))


def remainder_scaling(grid, z, mp, eps_list, coupling=None, floor=1e-14):
    """Fit ``||rwr(eps z) - eps z - eps^3 B(z)||_{H^1} ~ eps^q``; ``q`` should be 5."""
    z = np.asarray(z, complex)
    b3 = born_third(grid, z, mp, coupling)
    images = _batched_rwr(grid, [e * z for e in eps_list], mp, coupling)
    vals = [sobolev_norm(grid, im - e * z - e ** 3 * b3, 1.0)
            for e, im in zip(eps_list, images)]
    return _scaling(eps_list, vals, floor * max(eps_list))


def parity(grid, z, mp, eps_list, coupling=None, floor=0.0):
    """Fit ``||rwr(eps z) + rwr(-eps z)|| / 2``; no even terms means slope >= 3.

    An identically vanishing sum (odd symmetry kept exactly by the solver)
    is reported as an infinite exponent.
    """
    z = np.asarray(z, complex)
    profiles = [e * z for e in eps_list] + [-e * z for e in eps_list]
    images = _batched_rwr(grid, profiles, mp, coupling)
    k = len(eps_list)
    vals = [0.5 * sobolev_norm(grid, images[i] + images[k + i], 1.0) for i in range(k)]
    return _scaling(eps_list, vals, floor)


def coupling_scaling(grid, d, mp, lams, op):
    """Fit ``||op(d) - d|| / ||d||`` against the coupling (``op`` like ``scatter``)."""
    vals = [graph_distance(grid, op(grid, d, mp, lam), d) / graph_norm(grid, d) for lam in lams]
    return _scaling(lams, vals, 0.0)


def kernel_vs_born(grid, z1, z2, mp, coupling=None):
    """``||kernel profile - (its cubic truncation)||_{H^1}``, ``w = conj z1 + z2``."""
    w = np.conj(np.asarray(z1, complex)) + np.asarray(z2, complex)
    kv = kernel(grid, z1, z2, mp, coupling)
    b = born_third(grid, np.stack([w, np.conj(w)]), mp, coupling)
    approx = 0.5 * ((w + b[0]) + np.conj(np.conj(w) + b[1]))
    return float(sobolev_norm(grid, kv.profile - approx, 1.0))


def kernel_vs_born_scaling(grid, z1, z2, mp, lams):
    vals = [kernel_vs_born(grid, z1, z2, mp, lam) for lam in lams]
    return _scaling(lams, vals, 0.0)


# -- Wick monomials ------------------------------------------------------------

def annihilation_eigenvalue(grid, f, z):
    """``a(f) e_z = c e_z`` with ``c = sqrt(2) int f z dx`` for real ``f``."""
    return math.sqrt(2) * grid.integrate(np.asarray(f) * np.asarray(z))


def wick_monomial(grid, fs, chi1, chi2):
    """``:phi_in(f_1)...phi_in(f_n):(chi1, chi2)`` by the subset sum.

    ``2^{-n/2} sum_K < prod_{k in K} a(f_k) chi1, prod_{k not in K} a(f_k) chi2 >``
    with each annihilator acting on a coherent vector as a scalar.
    """
    n = len(fs)
    if n > 4:
        raise ValueError("wick_monomial supports at most 4 test functions")
    total = 0j
    for a1, z1 in chi1.terms:
        c1 = [annihilation_eigenvalue(grid, f, z1) for f in fs]
        for a2, z2 in chi2.terms:
            c2 = [annihilation_eigenvalue(grid, f, z2) for f in fs]
            acc = 0j
            for mask in itertools.product((False, True), repeat=n):
                term = 1 + 0j
                for k, in_k in enumerate(mask):
                    term *= np.conj(c1[k]) if in_k else c2[k]
                acc += term
            total += np.conj(a1) * a2 * coherent_inner(grid, z1, z2) * acc
    return complex(total * 2 ** (-n / 2))
