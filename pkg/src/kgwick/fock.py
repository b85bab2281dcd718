"""One-particle basis on the mass hyperboloid and coherent vectors.

Momentum-space functions live on the grid's dual lattice with the measure
``d^d p / mu(p)``.  The relativistic coordinate is applied in its
momentum-space form ``q = mu^{1/2} i grad_p mu^{-1/2}``; ``i grad_p`` is
multiplication by ``x`` after an inverse lattice transform.
"""
import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.fft as sfft

from .grid import sobolev_inner

DEFAULT_CAP = 6


class DegreeCapError(ValueError):
    pass


@dataclass(frozen=True)
class BasisElement:
    index: tuple
    values: np.ndarray = field(repr=False, compare=False)


@dataclass
class CoherentCombo:
    """Finite combination ``sum_j alpha_j e(z_j)`` of coherent vectors."""

    terms: list = field(default_factory=list)

    def scaled(self, c):
        return CoherentCombo([(c * a, z) for a, z in self.terms])


def _check_index(k, grid, cap):
    k = tuple(int(v) for v in k)
    if len(k) != grid.dim or min(k) < 0:
        raise ValueError(f"multi-index {k} invalid for dim={grid.dim}")
    if max(k) > cap:
        raise DegreeCapError(f"multi-index {k} exceeds per-axis degree cap {cap}")
    return k


def h1_inner(grid, a, b):
    """Inner product of momentum-space functions under ``d^d p / mu``."""
    return np.sum(np.conj(a) * b / grid.mu) * grid.momentum_spacing ** grid.dim


def vacuum_values(grid):
    return np.pi ** (-grid.dim / 4) * np.sqrt(grid.mu) * np.exp(-grid.k2 / 2)


def vacuum_e0(grid, strict=True):
    """Normalised ground state; ``strict`` enforces the lattice-edge Gaussian guard."""
    if strict and np.exp(-grid.k_max ** 2 / 2) > 1e-14:
        raise ValueError(f"k_max = {grid.k_max:.2f} does not resolve the basis Gaussian; "
                         "increase n/L")
    return BasisElement((0,) * grid.dim, _readonly(vacuum_values(grid)))


def _readonly(a):
    a.flags.writeable = False
    return a


def coordinate_q(grid, psi, j):
    """``q_j = mu^{1/2} i d/dp_j mu^{-1/2}`` on a momentum-space function."""
    root = np.sqrt(grid.mu)
    x = sfft.ifftn(psi / root, axes=grid.axes)
    return root * sfft.fftn(grid.x[j] * x, axes=grid.axes)


def raise_values(grid, psi, j):
    return (coordinate_q(grid, psi, j) - 1j * grid.k[j] * psi) / math.sqrt(2)


def lower_values(grid, psi, j):
    return (coordinate_q(grid, psi, j) + 1j * grid.k[j] * psi) / math.sqrt(2)


def raise_element(e, j, grid, cap=DEFAULT_CAP):
    """Unnormalised ``b*_j e``; the index moves up by one on axis ``j``."""
    if not 0 <= j < grid.dim:
        raise ValueError(f"axis {j} out of range for dim={grid.dim}")
    k = list(e.index)
    k[j] += 1
    k = _check_index(k, grid, cap)
    return BasisElement(k, _readonly(raise_values(grid, e.values, j)))


def basis_element(k, grid, cap=DEFAULT_CAP, strict=True):
    """``e_k = prod_j (b*_j)^{k_j} e_0 / sqrt(k_1! ... k_d!)``."""
    return _basis_element(_check_index(k, grid, cap), grid, cap, strict)


@lru_cache(maxsize=512)
def _basis_element(k, grid, cap, strict):
    if sum(k) == 0:
        return vacuum_e0(grid, strict)
    j = max(i for i, v in enumerate(k) if v > 0)
    lower = list(k)
    lower[j] -= 1
    prev = _basis_element(tuple(lower), grid, cap, strict)
    # b*_j e_{k-1_j} = sqrt(k_j) e_k
    return BasisElement(k, _readonly(raise_values(grid, prev.values, j) / math.sqrt(k[j])))


def position_space(grid, e):
    """Coordinate-space samples of a basis element."""
    return grid.ifft(e.values)


def reality_residual(grid, e):
    return float(np.max(np.abs(position_space(grid, e).imag)))


def symmetry_residual(grid, values):
    """``max |F(p) - conj F(-p)|`` over the lattice, Nyquist row excluded."""
    flipped = np.conj(np.roll(np.flip(values), 1, axis=tuple(range(grid.dim))))
    diff = np.abs(values - flipped)
    # the Nyquist frequency has no partner on the lattice
    mask = np.ones(grid.shape, dtype=bool)
    for ax in range(grid.dim):
        idx = [slice(None)] * grid.dim
        idx[ax] = grid.n // 2
        mask[tuple(idx)] = False
    return float(np.max(diff[mask]))


def multi_indices(dim, max_total):
    return [k for k in itertools.product(range(max_total + 1), repeat=dim) if sum(k) <= max_total]


def gram_matrix(grid, indices, strict=True):
    vals = [basis_element(k, grid, strict=strict).values for k in indices]
    return np.array([[h1_inner(grid, a, b) for b in vals] for a in vals])


def commutator_matrix(grid, indices, j, j2=None, strict=True):
    """Matrix elements of ``[b_j, b*_{j2}]`` between basis elements."""
    j2 = j if j2 is None else j2
    vals = [basis_element(k, grid, strict=strict).values for k in indices]
    comm = [lower_values(grid, raise_values(grid, v, j2), j)
            - raise_values(grid, lower_values(grid, v, j), j2) for v in vals]
    return np.array([[h1_inner(grid, a, c) for c in comm] for a in vals])


def phi_k(k, grid, t=0.0, cap=DEFAULT_CAP):
    """Coordinate-space mode ``c int exp(i mu t - i p x) e_k(p) dp / mu``.

    ``c = (2 pi)^{-d/2}`` makes the modes orthonormal in H^{1/2} with the
    package's Sobolev normalisation.
    """
    e = basis_element(k, grid, cap)
    spectrum = (2 * np.pi) ** (grid.dim / 2) * np.exp(1j * grid.mu * t) * np.conj(e.values) / grid.mu
    return grid.ifft(spectrum)


def coherent_inner(grid, z1, z2):
    """``(e(z1), e(z2)) = exp <z1, z2>_{H^{1/2}}``."""
    return np.exp(sobolev_inner(grid, z1, z2, 0.5))


def coherent_state_overlap(grid, z1, z2):
    """``<z1|z2>`` for the normalised coherent states."""
    n1 = np.real(sobolev_inner(grid, z1, z1, 0.5))
    n2 = np.real(sobolev_inner(grid, z2, z2, 0.5))
    return np.exp(sobolev_inner(grid, z1, z2, 0.5) - 0.5 * n1 - 0.5 * n2)


def coherent_coordinates(grid, z, indices):
    """``z_k = <phi_k, z>_{H^{1/2}}`` for each multi-index."""
    return np.array([sobolev_inner(grid, phi_k(k, grid), z, 0.5) for k in indices])


def combo_inner(grid, chi1, chi2):
    """Fock inner product of two coherent combinations."""
    return sum(np.conj(a1) * a2 * coherent_inner(grid, z1, z2)
               for a1, z1 in chi1.terms for a2, z2 in chi2.terms)
