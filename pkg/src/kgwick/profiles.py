"""Analytic presets and the seeded random ensemble of small data.

Random ensemble (part of the output contract, keep stable): real white
noise for ``phi`` and ``pi`` drawn from ``numpy.random.default_rng(seed)``
in that order, each low-pass filtered by ``exp(-|k|^2 / (2 kappa^2))``,
multiplied by the window ``exp(-|x|^2 / (2 width^2))`` and finally scaled
so that the H^1 + L_2 norm of ``(phi, pi)`` equals ``amplitude``.
"""
import numpy as np

from .grid import PhaseSpacePoint, graph_norm, map_R


def _radius2(grid, center=None):
    center = np.zeros(grid.dim) if center is None else np.broadcast_to(center, (grid.dim,))
    L = grid.box_length
    r2 = 0.0
    for xi, ci in zip(grid.x, center):
        dx = (xi - ci + L / 2) % L - L / 2
        r2 = r2 + dx ** 2
    return r2


def gaussian_field(grid, amplitude=0.1, width=1.0, center=None):
    return amplitude * np.exp(-_radius2(grid, center) / (2 * width ** 2)) * np.ones(grid.shape)


def gaussian_profile(grid, amplitude=0.1, width=1.0, center=None, phase=0.0):
    return gaussian_field(grid, amplitude, width, center) * np.exp(1j * phase)


def mode_field(grid, k=1, amplitude=1.0):
    """``amplitude * cos(kvec . x)`` with integer wave numbers ``k`` per axis."""
    kvec = np.broadcast_to(k, (grid.dim,))
    arg = sum(2 * np.pi * ki / grid.box_length * xi for ki, xi in zip(kvec, grid.x))
    return amplitude * np.cos(arg) * np.ones(grid.shape)


def mode_profile(grid, k=1, amplitude=1.0):
    return mode_field(grid, k, amplitude).astype(complex)


def random_phase_point(grid, rng, amplitude=0.1, width=2.0, kappa=2.0):
    def draw():
        noise = rng.standard_normal(grid.shape)
        hat = grid.rfft(noise) * np.exp(-grid.k2_half / (2 * kappa ** 2))
        return grid.irfft(hat) * np.exp(-_radius2(grid) / (2 * width ** 2))

    d = PhaseSpacePoint(draw(), draw())
    scale = amplitude / graph_norm(grid, d)
    return PhaseSpacePoint(d.phi * scale, d.pi * scale)


def random_profile(grid, rng, amplitude=0.1, width=2.0, kappa=2.0):
    """Random ``z`` with ``||z||_{H^1} = amplitude``."""
    return map_R(grid, random_phase_point(grid, rng, amplitude, width, kappa))


def random_test_function(grid, rng, width=2.0, kappa=2.0):
    """Smooth, localized real test function with unit L_2 norm."""
    noise = rng.standard_normal(grid.shape)
    hat = grid.rfft(noise) * np.exp(-grid.k2_half / (2 * kappa ** 2))
    h = grid.irfft(hat) * np.exp(-_radius2(grid) / (2 * width ** 2))
    return h / np.sqrt(grid.integrate(h ** 2))


def edge_sup(grid, f, fraction=0.05):
    """Largest |f| within ``fraction * L`` of the box edge (the point -L/2)."""
    L = grid.box_length
    mask = np.zeros(grid.shape, dtype=bool)
    for xi in grid.x:
        mask = mask | (np.abs(np.abs(xi) - L / 2) <= fraction * L) * np.ones(grid.shape, bool)
    return float(np.max(np.abs(f) * mask, initial=0.0, axis=None))


__all__ = [
    "gaussian_field", "gaussian_profile", "mode_field", "mode_profile",
    "random_phase_point", "random_profile", "random_test_function", "edge_sup",
]
