"""Periodic lattice, Fourier multipliers and the complex structure.

Fields are plain numpy arrays whose trailing ``dim`` axes are the lattice;
any leading axes are treated as a batch.  Real fields live in physical
space, complex profiles ``z = phi + i mu^{-1} pi`` likewise.

Continuum conventions used throughout::

    f_hat(p) = int f(x) exp(-i p x) dx          ~  h^d * fft(f)
    f(x)     = (2 pi)^-d int f_hat exp(i p x)   ~  ifft(f_hat) / h^d
    <f, g>_s = (2 pi)^-d int conj(f_hat) (m^2 + p^2)^s g_hat dp

so that lattice sums approximate integrals over the box.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np
import scipy.fft as sfft


class PhaseSpacePoint(NamedTuple):
    """Cauchy data ``(phi, pi)`` of a real field."""

    phi: np.ndarray
    pi: np.ndarray


@dataclass(frozen=True)
class Grid:
    """Periodic box ``[-L/2, L/2)^dim`` sampled with ``n`` points per axis."""

    dim: int
    n: int
    box_length: float
    mass: float
    coupling: float = 0.0

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.n < 8 or self.n & (self.n - 1):
            raise ValueError(f"n must be a power of two >= 8, got {self.n}")
        if not self.box_length > 0:
            raise ValueError(f"box_length must be positive, got {self.box_length}")
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if not self.coupling >= 0:
            raise ValueError(f"coupling must be non-negative, got {self.coupling}")

    def with_coupling(self, coupling):
        return Grid(self.dim, self.n, self.box_length, self.mass, coupling)

    @property
    def shape(self):
        return (self.n,) * self.dim

    @property
    def axes(self):
        return tuple(range(-self.dim, 0))

    @property
    def spacing(self):
        return self.box_length / self.n

    @property
    def cell_volume(self):
        return self.spacing ** self.dim

    @property
    def volume(self):
        return self.box_length ** self.dim

    @property
    def momentum_spacing(self):
        return 2 * np.pi / self.box_length

    @property
    def k_max(self):
        return np.pi * self.n / self.box_length

    # -- lattices -----------------------------------------------------------

    def _mesh(self, axes_1d):
        return np.meshgrid(*axes_1d, indexing="ij", sparse=True)

    @cached_property
    def x(self):
        """Wrapped coordinates: index 0 is the origin, index n/2 is -L/2."""
        x1 = sfft.fftfreq(self.n, d=1.0 / self.box_length)
        return self._mesh([x1] * self.dim)

    @cached_property
    def k(self):
        """Wave vectors on the full (complex) FFT lattice."""
        k1 = 2 * np.pi * sfft.fftfreq(self.n, d=self.spacing)
        return self._mesh([k1] * self.dim)

    @cached_property
    def k_half(self):
        """Wave vectors on the real-FFT lattice (last axis halved)."""
        k1 = 2 * np.pi * sfft.fftfreq(self.n, d=self.spacing)
        kr = 2 * np.pi * sfft.rfftfreq(self.n, d=self.spacing)
        return self._mesh([k1] * (self.dim - 1) + [kr])

    @cached_property
    def k2(self):
        return sum(ki ** 2 for ki in self.k)

    @cached_property
    def k2_half(self):
        return sum(ki ** 2 for ki in self.k_half)

    @cached_property
    def mu(self):
        return np.sqrt(self.mass ** 2 + self.k2)

    @cached_property
    def mu_half(self):
        return np.sqrt(self.mass ** 2 + self.k2_half)

    def symbol(self, s, half=False):
        """Radial multiplier ``(m^2 + |k|^2)^(s/2)``."""
        mu = self.mu_half if half else self.mu
        return mu ** s

    @cached_property
    def dealias_mask(self):
        """Half-band projector on the real-FFT lattice: keep |k_i| < n/4."""
        cut = self.n // 4
        i1 = np.abs(sfft.fftfreq(self.n, d=1.0 / self.n))
        ir = sfft.rfftfreq(self.n, d=1.0 / self.n)
        masks = self._mesh([i1 < cut] * (self.dim - 1) + [ir < cut])
        out = masks[0]
        for m in masks[1:]:
            out = out & m
        return out

    # -- transforms ---------------------------------------------------------

    def fft(self, f):
        """Continuum-normalised forward transform on the full lattice."""
        return sfft.fftn(f, axes=self.axes) * self.cell_volume

    def ifft(self, f_hat):
        return sfft.ifftn(f_hat, axes=self.axes) / self.cell_volume

    def rfft(self, f):
        return sfft.rfftn(f, axes=self.axes) * self.cell_volume

    def irfft(self, f_hat):
        return sfft.irfftn(f_hat, s=self.shape, axes=self.axes) / self.cell_volume

    def check(self, f):
        if f.shape[-self.dim:] != self.shape:
            raise ValueError(
                f"field trailing shape {f.shape[-self.dim:]} does not match grid {self.shape}")
        return f

    def zeros(self, dtype=float):
        return np.zeros(self.shape, dtype=dtype)

    def integrate(self, f):
        return np.sum(f, axis=self.axes) * self.cell_volume


def make_grid(dim, n, box_length, mass, coupling=0.0):
    return Grid(int(dim), int(n), float(box_length), float(mass), float(coupling))


def apply_mu_power(grid, f, s):
    """Multiply the spectrum of ``f`` by ``(m^2 + |k|^2)^(s/2)``.

    Real input gives real output.
    """
    f = grid.check(np.asarray(f))
    if not np.all(np.isfinite(f)):
        raise ValueError("non-finite input field")
    if s == 0:
        return f.copy()
    if np.iscomplexobj(f):
        return sfft.ifftn(sfft.fftn(f, axes=grid.axes) * grid.symbol(s), axes=grid.axes)
    return sfft.irfftn(sfft.rfftn(f, axes=grid.axes) * grid.symbol(s, half=True),
                       s=grid.shape, axes=grid.axes)


def sobolev_inner(grid, z1, z2, s):
    """H^s inner product, antilinear in the first slot."""
    z1 = grid.check(np.asarray(z1))
    z2 = grid.check(np.asarray(z2))
    a = grid.fft(z1)
    b = grid.fft(z2)
    return np.sum(np.conj(a) * grid.mu ** (2 * s) * b, axis=grid.axes) / grid.volume


def sobolev_norm(grid, z, s):
    return np.sqrt(np.real(sobolev_inner(grid, z, z, s)))


def graph_norm(grid, d):
    """Norm of ``(phi, pi)`` in H^1 + L_2."""
    phi_hat = grid.rfft(d.phi)
    pi_hat = grid.rfft(d.pi)
    return np.sqrt(_half_sum(grid, np.abs(phi_hat) ** 2 * grid.mu_half ** 2
                             + np.abs(pi_hat) ** 2) / grid.volume)


def _half_sum(grid, a):
    """Sum a real-FFT-lattice quantity as if over the full lattice."""
    n = grid.n
    weights = np.full(n // 2 + 1, 2.0)
    weights[0] = 1.0
    weights[-1] = 1.0
    return np.sum(a * weights, axis=grid.axes)


def graph_distance(grid, d1, d2):
    return graph_norm(grid, PhaseSpacePoint(d1.phi - d2.phi, d1.pi - d2.pi))


# -- complex structure -------------------------------------------------------

def map_R(grid, d):
    """``R(phi, pi) = phi + i mu^{-1} pi``."""
    return d.phi + 1j * apply_mu_power(grid, d.pi, -1)


def map_R_inv(grid, z):
    z = np.asarray(z)
    return PhaseSpacePoint(np.ascontiguousarray(z.real),
                           apply_mu_power(grid, np.ascontiguousarray(z.imag), 1))


def apply_J(grid, d):
    """``J = R^{-1} i R``, i.e. ``(phi, pi) -> (-mu^{-1} pi, mu phi)``."""
    return PhaseSpacePoint(-apply_mu_power(grid, d.pi, -1), apply_mu_power(grid, d.phi, 1))


def time_reflect(d):
    return PhaseSpacePoint(d.phi.copy(), -d.pi)


def _reflect(grid, f):
    # x -> -x on the wrapped lattice: index j -> -j mod n on every axis
    return np.roll(np.flip(f, axis=grid.axes), 1, axis=grid.axes)


def space_reflect(grid, d):
    return PhaseSpacePoint(_reflect(grid, d.phi), _reflect(grid, d.pi))


def reflect_field(grid, f):
    return _reflect(grid, f)


def shift_field(grid, f, steps):
    """Translate a field by whole lattice steps, ``f(x) -> f(x - a)``."""
    steps = tuple(int(s) for s in np.broadcast_to(steps, (grid.dim,)))
    return np.roll(f, steps, axis=grid.axes)
