"""Free and nonlinear Klein-Gordon flows.

The nonlinear flow ``u_tt - Lap u + m^2 u + lam u^3 = 0`` is integrated by
splitting into the exact free flow (a Fourier multiplier) and the exact
kick ``pi -> pi - tau lam phi^3``.  Strang splitting gives order 2; the
triple-jump composition of Strang steps gives order 4.  Both are symmetric,
so a negative step runs the flow backwards.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .grid import PhaseSpacePoint, apply_mu_power, map_R, map_R_inv


class BlowUpError(RuntimeError):
    pass


_CBRT2 = 2.0 ** (1.0 / 3.0)
_W1 = 1.0 / (2.0 - _CBRT2)
_W0 = -_CBRT2 / (2.0 - _CBRT2)

# (drift fractions, kick fractions); drifts interleave kicks
_SCHEMES = {
    2: ((0.5, 0.5), (1.0,)),
    4: ((_W1 / 2, (_W1 + _W0) / 2, (_W1 + _W0) / 2, _W1 / 2), (_W1, _W0, _W1)),
}

BLOWUP_SUP = 1e6


@dataclass(frozen=True)
class IntegratorParams:
    dt: float = 1e-3
    order: int = 4
    dealias: bool = True
    stability_guard: float = 100.0

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.order not in _SCHEMES:
            raise ValueError(f"order must be 2 or 4, got {self.order}")

    def refined(self, factor=2):
        return IntegratorParams(self.dt / factor, self.order, self.dealias, self.stability_guard)


# -- free flow ------------------------------------------------------------------

def _free_rotate(grid, phi_hat, pi_hat, t):
    mu = grid.mu_half
    c = np.cos(mu * t)
    s = np.sin(mu * t)
    return c * phi_hat + (s / mu) * pi_hat, -mu * s * phi_hat + c * pi_hat


def free_propagate(grid, d, t):
    """Exact linear Klein-Gordon flow for time ``t``."""
    phi_hat = sfft.rfftn(d.phi, axes=grid.axes)
    pi_hat = sfft.rfftn(d.pi, axes=grid.axes)
    phi_hat, pi_hat = _free_rotate(grid, phi_hat, pi_hat, t)
    return PhaseSpacePoint(sfft.irfftn(phi_hat, s=grid.shape, axes=grid.axes),
                           sfft.irfftn(pi_hat, s=grid.shape, axes=grid.axes))


def free_flow_z(grid, z, t):
    """Free flow in the coordinate ``z = R(phi, pi)``.

    Equal to multiplying the spectrum by ``exp(-i mu t)``; see
    :func:`free_phase` for that direct route.
    """
    return map_R(grid, free_propagate(grid, map_R_inv(grid, z), t))


def free_phase(grid, z, t):
    return sfft.ifftn(np.exp(-1j * grid.mu * t) * sfft.fftn(z, axes=grid.axes), axes=grid.axes)


def damped_flow_z(grid, z, t, s):
    """Multiply the spectrum by ``exp(i mu t - mu s)``, ``s >= 0``.

    At ``s = 0`` this is ``free_flow_z(z, -t)``.
    """
    if s < 0:
        raise ValueError(f"damping parameter must be non-negative, got {s}")
    symbol = np.exp(1j * grid.mu * t - grid.mu * s)
    return sfft.ifftn(symbol * sfft.fftn(z, axes=grid.axes), axes=grid.axes)


# -- nonlinear flow -------------------------------------------------------------

class _Splitter:
    """Spectral-state stepper for one grid, step size and scheme."""

    def __init__(self, grid, h, params, coupling):
        self.grid = grid
        self.h = h
        self.lam = coupling
        self.dealias = params.dealias
        drifts, kicks = _SCHEMES[params.order]
        self.kicks = [b * h for b in kicks]
        self.first = self._rotation(drifts[0] * h)
        self.inner = [self._rotation(a * h) for a in drifts[1:-1]]
        self.last = self._rotation(drifts[-1] * h)
        self.wrap = self._rotation((drifts[-1] + drifts[0]) * h)
        mu_max = float(np.max(grid.mu_half))
        if abs(h) * mu_max > params.stability_guard:
            warnings.warn(f"dt*max(mu) = {abs(h) * mu_max:.1f} exceeds the stability "
                          f"guard {params.stability_guard}; accuracy may degrade",
                          RuntimeWarning, stacklevel=3)

    def _rotation(self, tau):
        mu = self.grid.mu_half
        c = np.cos(mu * tau)
        s = np.sin(mu * tau)
        return c, s / mu, -mu * s

    @staticmethod
    def _drift(state, rot):
        c, s_mu, mu_s = rot
        phi_hat, pi_hat = state
        return c * phi_hat + s_mu * pi_hat, mu_s * phi_hat + c * pi_hat

    def cube(self, phi_hat):
        g = self.grid
        if self.dealias:
            phi_hat = phi_hat * g.dealias_mask
        phi = sfft.irfftn(phi_hat, s=g.shape, axes=g.axes)
        # overflow here is reported by the blow-up guard
        with np.errstate(over="ignore", invalid="ignore"):
            cube_hat = sfft.rfftn(phi * phi * phi, axes=g.axes)
        if self.dealias:
            cube_hat *= g.dealias_mask
        return phi, cube_hat

    def _kick(self, state, tau, check):
        phi_hat, pi_hat = state
        phi, cube_hat = self.cube(phi_hat)
        if check:
            _guard(phi)
        return phi_hat, pi_hat - (self.lam * tau) * cube_hat

    def run(self, state, nsteps):
        nk = len(self.kicks)
        state = self._drift(state, self.first)
        for step in range(nsteps):
            check = step % 50 == 0
            for j, tau in enumerate(self.kicks):
                state = self._kick(state, tau, check)
                if j < nk - 1:
                    state = self._drift(state, self.inner[j])
            state = self._drift(state, self.wrap if step < nsteps - 1 else self.last)
        _guard(sfft.irfftn(state[0], s=self.grid.shape, axes=self.grid.axes))
        return state


def _guard(phi):
    if not np.all(np.isfinite(phi)):
        raise BlowUpError("non-finite field values during nonlinear evolution")
    sup = float(np.max(np.abs(phi)))
    if sup > BLOWUP_SUP:
        raise BlowUpError(f"sup|phi| = {sup:.3e} exceeds blow-up guard {BLOWUP_SUP:g}")


def _step_count(t, dt):
    ratio = abs(t) / dt
    n = round(ratio)
    if abs(ratio - n) > 1e-9 * max(1.0, ratio):
        n = math.ceil(ratio)
    return max(int(n), 1)


def _to_spectral(grid, d):
    return sfft.rfftn(d.phi, axes=grid.axes), sfft.rfftn(d.pi, axes=grid.axes)


def _to_physical(grid, state):
    return PhaseSpacePoint(sfft.irfftn(state[0], s=grid.shape, axes=grid.axes),
                           sfft.irfftn(state[1], s=grid.shape, axes=grid.axes))


def nonlinear_step(grid, d, params, coupling=None):
    """One splitting step of size ``params.dt``."""
    lam = grid.coupling if coupling is None else coupling
    stepper = _Splitter(grid, params.dt, params, lam)
    return _to_physical(grid, stepper.run(_to_spectral(grid, d), 1))


def nonlinear_evolve(grid, d, t_target, params, coupling=None):
    """Evolve Cauchy data by ``t_target`` (negative runs backwards).

    The step is shrunk slightly so that an integer number of steps lands on
    ``t_target``.  Leading array axes of ``d`` are evolved as a batch.
    """
    lam = grid.coupling if coupling is None else coupling
    if t_target == 0:
        return PhaseSpacePoint(d.phi.copy(), d.pi.copy())
    if lam == 0:
        return free_propagate(grid, d, t_target)
    nsteps = _step_count(t_target, params.dt)
    stepper = _Splitter(grid, t_target / nsteps, params, lam)
    return _to_physical(grid, stepper.run(_to_spectral(grid, d), nsteps))


def nonlinear_trajectory(grid, d, times, params, coupling=None):
    """Snapshots of the nonlinear solution at each of ``times`` (from t = 0)."""
    out = []
    t_prev = 0.0
    current = d
    for t in times:
        current = nonlinear_evolve(grid, current, t - t_prev, params, coupling)
        out.append(current)
        t_prev = t
    return out


# -- diagnostics ---------------------------------------------------------------

def energy(grid, d, coupling=None, dealias=True):
    """``int pi^2/2 + |grad phi|^2/2 + m^2 phi^2/2 + lam phi^4/4 dx``.

    With ``dealias`` the quartic term uses the half-band projected field,
    which is the quantity the dealiased integrator conserves.
    """
    lam = grid.coupling if coupling is None else coupling
    phi_hat = grid.rfft(d.phi)
    pi_hat = grid.rfft(d.pi)
    weights = np.full(grid.n // 2 + 1, 2.0)
    weights[0] = weights[-1] = 1.0
    quad = np.sum((np.abs(phi_hat) ** 2 * grid.mu_half ** 2 + np.abs(pi_hat) ** 2) * weights,
                  axis=grid.axes) / grid.volume
    phi = d.phi
    if dealias:
        phi = grid.irfft(phi_hat * grid.dealias_mask)
    return 0.5 * quad + 0.25 * lam * grid.integrate(phi ** 4)


def pde_residual(grid, snapshots, dt, coupling=None):
    """Sup-norm residual of the equation from three snapshots ``dt`` apart."""
    lam = grid.coupling if coupling is None else coupling
    before, now, after = (s.phi for s in snapshots)
    u_tt = (after - 2 * now + before) / dt ** 2
    res = u_tt + apply_mu_power(grid, now, 2) + lam * now ** 3
    return float(np.max(np.abs(res)))


def energy_log(grid, snapshots, times, coupling=None):
    """Rows ``(t, energy, sup|phi|, ||phi||_L2)`` for a trajectory."""
    rows = []
    for t, d in zip(times, snapshots):
        rows.append((float(t), float(energy(grid, d, coupling)),
                     float(np.max(np.abs(d.phi))),
                     float(np.sqrt(grid.integrate(d.phi ** 2)))))
    return rows
