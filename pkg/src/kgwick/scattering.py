"""Wave operators and the scattering map at a finite matching time.

``W_in`` sends in-data to the Cauchy data at t = 0 of the interacting
solution that matches the free one at ``-T``; ``W_out`` matches at ``+T``.
``S = W_out^{-1} W_in``.
"""
import warnings
from dataclasses import dataclass, field

import numpy as np

from .evolution import IntegratorParams, free_propagate, nonlinear_evolve
from .grid import PhaseSpacePoint, graph_distance, graph_norm, space_reflect, time_reflect


@dataclass(frozen=True)
class MatchingParams:
    T: float = 20.0
    integrator: IntegratorParams = field(default_factory=IntegratorParams)
    cauchy_check: bool = False

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError(f"matching time must be positive, got {self.T}")

    def with_T(self, T):
        return MatchingParams(T, self.integrator, self.cauchy_check)

    def refined(self, factor=2):
        return MatchingParams(self.T, self.integrator.refined(factor), self.cauchy_check)


def wraps_box(grid, T):
    """True when signals moving at unit speed could wrap the box in time T."""
    return T > 0.4 * grid.box_length


def _no_wrap(grid, T):
    if wraps_box(grid, T):
        warnings.warn(f"matching time {T} exceeds 0.4*L = {0.4 * grid.box_length}; "
                      "wave packets may wrap around the torus", RuntimeWarning, stacklevel=3)


def wave_in(grid, d_in, mp, coupling=None):
    _no_wrap(grid, mp.T)
    d = free_propagate(grid, d_in, -mp.T)
    return nonlinear_evolve(grid, d, mp.T, mp.integrator, coupling)


def wave_out(grid, d_out, mp, coupling=None):
    _no_wrap(grid, mp.T)
    d = free_propagate(grid, d_out, mp.T)
    return nonlinear_evolve(grid, d, -mp.T, mp.integrator, coupling)


def wave_in_inverse(grid, d, mp, coupling=None):
    _no_wrap(grid, mp.T)
    d = nonlinear_evolve(grid, d, -mp.T, mp.integrator, coupling)
    return free_propagate(grid, d, mp.T)


def wave_out_inverse(grid, d, mp, coupling=None):
    _no_wrap(grid, mp.T)
    d = nonlinear_evolve(grid, d, mp.T, mp.integrator, coupling)
    return free_propagate(grid, d, -mp.T)


def scatter(grid, d_in, mp, coupling=None):
    """``S = W_out^{-1} W_in``, run as one nonlinear segment from -T to +T."""
    _no_wrap(grid, mp.T)
    d = free_propagate(grid, d_in, -mp.T)
    d = nonlinear_evolve(grid, d, 2 * mp.T, mp.integrator, coupling)
    return free_propagate(grid, d, -mp.T)


def time_reflected(op):
    """``Theta^T op Theta^T``."""
    def wrapped(grid, d, mp, coupling=None):
        return time_reflect(op(grid, time_reflect(d), mp, coupling))
    return wrapped


def pt_reflected(op):
    """``Theta^T Theta^P op Theta^T Theta^P``."""
    def wrapped(grid, d, mp, coupling=None):
        flip = lambda e: time_reflect(space_reflect(grid, e))  # noqa: E731
        return flip(op(grid, flip(d), mp, coupling))
    return wrapped


def check_intertwining(grid, d_in, t, mp, coupling=None):
    """``||U(t) W_in d - W_in U_0(t) d||`` in H^1 + L_2."""
    if t == 0:
        return 0.0
    lhs = nonlinear_evolve(grid, wave_in(grid, d_in, mp, coupling), t, mp.integrator, coupling)
    rhs = wave_in(grid, free_propagate(grid, d_in, t), mp, coupling)
    return graph_distance(grid, lhs, rhs)


def solver_tolerance(grid, d, mp, op=wave_in, coupling=None):
    """Self-convergence error of ``op`` at the run's dt, from a dt/2 control run."""
    coarse = op(grid, d, mp, coupling)
    fine = op(grid, d, mp.refined(2), coupling)
    return graph_distance(grid, coarse, fine)


@dataclass
class CauchyRow:
    T: float
    T_next: float
    difference: float
    wraps: bool


def convergence_report(grid, d_in, T_list, mp, coupling=None):
    """Differences ``||W_in(T_i) d - W_in(T_{i+1}) d||`` for increasing T."""
    T_list = sorted(float(T) for T in T_list)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        images = [wave_in(grid, d_in, mp.with_T(T), coupling) for T in T_list]
    rows = []
    for (T0, a), (T1, b) in zip(zip(T_list, images), zip(T_list[1:], images[1:])):
        rows.append(CauchyRow(T0, T1, float(graph_distance(grid, a, b)), wraps_box(grid, T1)))
    return rows


def free_energy(grid, d):
    """Energy of the linear flow: half the squared graph norm."""
    return 0.5 * graph_norm(grid, d) ** 2


def scattering_summary(grid, d_in, mp, T_list=None, coupling=None):
    """Norms, symmetry residuals, Cauchy table and free energies for one datum."""
    w = wave_in(grid, d_in, mp, coupling)
    s = scatter(grid, d_in, mp, coupling)
    w_out = wave_out(grid, d_in, mp, coupling)
    tw = time_reflected(wave_in)(grid, d_in, mp, coupling)
    s_back = time_reflected(scatter)(grid, s, mp, coupling)
    norm_in = float(graph_norm(grid, d_in))
    summary = {
        "norms": {
            "d_in": norm_in,
            "W_in_d": float(graph_norm(grid, w)),
            "S_d": float(graph_norm(grid, s)),
            "S_d_minus_d": float(graph_distance(grid, s, d_in)),
        },
        "symmetry_residuals": {
            "W_out_vs_T_W_in_T": float(graph_distance(grid, w_out, tw)),
            "T_S_T_S_minus_id": float(graph_distance(grid, s_back, d_in)),
        },
        "energies": {
            "free_in": float(free_energy(grid, d_in)),
            "free_out": float(free_energy(grid, s)),
        },
    }
    if T_list:
        summary["cauchy_table"] = [row.__dict__ for row in
                                   convergence_report(grid, d_in, T_list, mp, coupling)]
    elif mp.cauchy_check:
        summary["cauchy_table"] = [row.__dict__ for row in
                                   convergence_report(grid, d_in, [mp.T, 2 * mp.T], mp, coupling)]
    return summary


def zero_like(d):
    return PhaseSpacePoint(np.zeros_like(d.phi), np.zeros_like(d.pi))
