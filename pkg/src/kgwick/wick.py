"""Wick kernels of the interacting and outgoing fields on coherent vectors.

For ``w = conj(z1) + z2`` the kernel is

    exp<z1, z2>_{1/2} * 1/2 * (F(w) + conj(F(conj w)))

with ``F = R W_in R^{-1}`` (interacting field) or ``F = R S R^{-1}``
(outgoing field).  Values are kept factored as ``(prefactor, profile)``;
``prefactor`` alone can overflow for large profiles.
"""
from dataclasses import dataclass, field

import numpy as np

from .evolution import damped_flow_z, free_flow_z
from .fock import coherent_inner
from .grid import apply_mu_power, map_R, map_R_inv, shift_field, sobolev_inner, sobolev_norm
from .scattering import scatter, wave_in


@dataclass
class KernelValue:
    prefactor: complex
    profile: np.ndarray = field(repr=False)
    # F(w) and F(conj w), kept for the pairing form of the smeared kernel
    images: tuple = field(default=None, repr=False, compare=False)

    @property
    def full(self):
        return np.asarray(self.prefactor)[..., None] * self.profile \
            if np.ndim(self.prefactor) else self.prefactor * self.profile


def rwr(grid, z, mp, coupling=None):
    """``R W_in R^{-1}``; leading axes of ``z`` are evaluated as a batch."""
    return map_R(grid, wave_in(grid, map_R_inv(grid, z), mp, coupling))


def rsr(grid, z, mp, coupling=None):
    return map_R(grid, scatter(grid, map_R_inv(grid, z), mp, coupling))


def _kernel(grid, z1, z2, mp, op, coupling):
    z1, z2 = np.broadcast_arrays(np.asarray(z1, complex), np.asarray(z2, complex))
    w = np.conj(z1) + z2
    images = op(grid, np.stack([w, np.conj(w)]), mp, coupling)
    profile = 0.5 * (images[0] + np.conj(images[1]))
    return KernelValue(coherent_inner(grid, z1, z2), profile, (images[0], images[1]))


def kernel(grid, z1, z2, mp, coupling=None):
    """Wick kernel ``phi(e_{z1}, e_{z2})`` of the interacting field at t = 0."""
    return _kernel(grid, z1, z2, mp, rwr, coupling)


def kernel_out(grid, z1, z2, mp, coupling=None):
    return _kernel(grid, z1, z2, mp, rsr, coupling)


def kernel_at_time(grid, z1, z2, t, mp, coupling=None, out=False):
    """Kernel at time ``t``: the t = 0 kernel of freely evolved arguments."""
    fn = kernel_out if out else kernel
    return fn(grid, free_flow_z(grid, z1, t), free_flow_z(grid, z2, t), mp, coupling)


def smear(grid, kv, h):
    """``int phi(e_{z1}, e_{z2})(x) h(x) dx`` as a lattice sum."""
    return kv.prefactor * grid.integrate(kv.profile * h)


def smear_pairing(grid, kv, h):
    """Same integral through H^{1/2} pairings with ``mu^{-1} h``.

    Uses ``1/2 (<conj F(w), mu^{-1} h> + <F(conj w), mu^{-1} h>)`` when the
    images are available, else ``<conj profile, mu^{-1} h>``.
    """
    g = apply_mu_power(grid, h, -1)
    if kv.images is None:
        return kv.prefactor * sobolev_inner(grid, np.conj(kv.profile), g, 0.5)
    fw, fcw = kv.images
    return kv.prefactor * 0.5 * (sobolev_inner(grid, np.conj(fw), g, 0.5)
                                 + sobolev_inner(grid, fcw, g, 0.5))


def kernel_evolved(grid, z1, z2, t1, s1, t2, s2, mp, coupling=None):
    """Kernel between ``exp(i t H - s H)``-evolved coherent vectors."""
    if s1 < 0 or s2 < 0:
        raise ValueError("damping parameters must be non-negative")
    return kernel(grid, damped_flow_z(grid, z1, t1, s1), damped_flow_z(grid, z2, t2, s2),
                  mp, coupling)


def bilinear_form(grid, chi1, chi2, mp, coupling=None, out=False):
    """``sum_ij conj(a_1i) a_2j phi(e_{z1i}, e_{z2j})``, a profile."""
    pairs = [(a1, z1, a2, z2) for a1, z1 in chi1.terms for a2, z2 in chi2.terms]
    if not pairs:
        return np.zeros(grid.shape, complex)
    z1s = np.stack([p[1] for p in pairs])
    z2s = np.stack([p[3] for p in pairs])
    kv = (kernel_out if out else kernel)(grid, z1s, z2s, mp, coupling)
    weights = np.array([np.conj(p[0]) * p[2] for p in pairs])
    return np.tensordot(weights * kv.prefactor, kv.profile, axes=1)


def diagonal_trajectory(grid, z, times, mp, coupling=None, tol=1e-9):
    """Real diagonal ``phi(e_z, e_z)(t, .) / exp ||z||^2`` at each time."""
    zt = np.stack([free_flow_z(grid, z, t) for t in times])
    kv = kernel(grid, zt, zt, mp, coupling)
    imag = float(np.max(np.abs(kv.profile.imag)))
    if imag > tol * max(1.0, float(np.max(np.abs(kv.profile.real)))):
        raise ArithmeticError(f"diagonal kernel has imaginary residue {imag:.3e}")
    return [np.ascontiguousarray(u) for u in kv.profile.real]


# -- holomorphy ----------------------------------------------------------------

@dataclass
class HolomorphyReport:
    steps: list
    cr_holo: list        # |dg/d conj(alpha_2)| per step
    cr_antiholo: list    # |dg/d alpha_1| per step
    derivative_scale: float
    cauchy_radius: float
    cauchy_holo: float   # |mean_circle g - g(centre)| in alpha_2
    cauchy_antiholo: float
    noise: float         # |g_dt - g_{dt/2}| at the centre
    centre_value: complex

    def slopes(self, which="holo"):
        r = np.array(self.cr_holo if which == "holo" else self.cr_antiholo)
        s = np.array(self.steps)
        return list(np.log(r[:-1] / r[1:]) / np.log(s[:-1] / s[1:]))

    def noise_floor(self, step):
        """Finite-difference noise implied by the solver noise at a given step."""
        return self.noise / step


def holomorphy_check(grid, z_dirs, h, radius, mp, coupling=None, centre=(1.0, 1.0),
                     steps=(0.2, 0.1, 0.05, 0.025), n_circle=16, measure_noise=True):
    """Cauchy-Riemann and Cauchy-mean tests of ``g(a1, a2) = <h, phi(e(a1 za), e(a2 zb))>``.

    ``g`` should be antiholomorphic in ``a1`` and holomorphic in ``a2``.
    All kernel evaluations are batched into one solver run.
    """
    za, zb = (np.asarray(v, complex) for v in z_dirs)
    c1, c2 = complex(centre[0]), complex(centre[1])
    points = [(c1, c2)]
    for d in steps:
        for e in (d, -d, 1j * d, -1j * d):
            points.append((c1, c2 + e))
        for e in (d, -d, 1j * d, -1j * d):
            points.append((c1 + e, c2))
    thetas = 2 * np.pi * np.arange(n_circle) / n_circle
    for th in thetas:
        points.append((c1, c2 + radius * np.exp(1j * th)))
    for th in thetas:
        points.append((c1 + radius * np.exp(1j * th), c2))

    a1 = np.array([p[0] for p in points])[:, None]
    a2 = np.array([p[1] for p in points])[:, None]
    kv = kernel(grid, a1 * za, a2 * zb, mp, coupling)
    g = smear(grid, kv, h)

    centre_value = g[0]
    cr_holo, cr_anti = [], []
    idx = 1
    scale = 0.0
    for d in steps:
        p, m, ip, im = g[idx:idx + 4]
        dx, dy = (p - m) / (2 * d), (ip - im) / (2 * d)
        cr_holo.append(abs(0.5 * (dx + 1j * dy)))
        scale = max(scale, abs(0.5 * (dx - 1j * dy)))
        idx += 4
        p, m, ip, im = g[idx:idx + 4]
        dx, dy = (p - m) / (2 * d), (ip - im) / (2 * d)
        cr_anti.append(abs(0.5 * (dx - 1j * dy)))
        idx += 4
    circ2 = g[idx:idx + n_circle]
    circ1 = g[idx + n_circle:idx + 2 * n_circle]

    noise = 0.0
    if measure_noise:
        fine = kernel(grid, c1 * za, c2 * zb, mp.refined(2), coupling)
        noise = float(abs(smear(grid, fine, h) - centre_value))
    return HolomorphyReport(list(steps), cr_holo, cr_anti, scale, radius,
                            float(abs(circ2.mean() - centre_value)),
                            float(abs(circ1.mean() - centre_value)),
                            noise, complex(centre_value))


# -- estimates and covariance ----------------------------------------------------

def bound_ratios(grid, z1, z2, h, mp, coupling=None):
    """``|<h, phi>| / (||h||_{L2} exp Re<z1,z2> ||conj z1 + z2||_{H^1})``.

    Leading axes of ``z1``, ``z2`` form a batch.  The ratio is defined as 0
    where ``conj z1 + z2`` vanishes; the kernel must vanish there too.
    """
    kv = kernel(grid, z1, z2, mp, coupling)
    z1, z2 = np.broadcast_arrays(np.asarray(z1, complex), np.asarray(z2, complex))
    w_norm = np.atleast_1d(sobolev_norm(grid, np.conj(z1) + z2, 1.0))
    value = np.atleast_1d(np.abs(smear(grid, kv, h)))
    h_norm = np.sqrt(grid.integrate(h ** 2))
    re_inner = np.atleast_1d(np.real(sobolev_inner(grid, z1, z2, 0.5)))
    zero = w_norm == 0
    if np.any(value[zero] != 0):
        raise ArithmeticError("kernel does not vanish at conj(z1) + z2 = 0")
    ratio = np.zeros_like(value)
    ok = ~zero
    ratio[ok] = value[ok] / (h_norm * np.exp(re_inner[ok]) * w_norm[ok])
    return ratio


def bound_ratio(grid, z1, z2, h, mp, coupling=None):
    return float(bound_ratios(grid, z1, z2, h, mp, coupling)[0])


@dataclass
class BoundReport:
    ratios: list = field(default_factory=list)

    @property
    def max_ratio(self):
        return max(self.ratios) if self.ratios else 0.0


def bound_check(grid, pairs, h, mp, coupling=None):
    """Ratios over a sweep of ``(z1, z2)`` pairs; the constant is empirical."""
    if not pairs:
        return BoundReport()
    z1s = np.stack([p[0] for p in pairs])
    z2s = np.stack([p[1] for p in pairs])
    return BoundReport([float(r) for r in bound_ratios(grid, z1s, z2s, h, mp, coupling)])


def lattice_shift(grid, a):
    """Convert a displacement into whole lattice steps; reject others."""
    steps = np.asarray(np.broadcast_to(a, (grid.dim,)), float) / grid.spacing
    if np.any(np.abs(steps - np.round(steps)) > 1e-9):
        raise ValueError(f"shift {a} is not a multiple of the lattice spacing {grid.spacing}")
    return tuple(int(s) for s in np.round(steps))


def spectral_translate(grid, z, a):
    """``z(x) -> z(x - a)`` as the Fourier phase ``exp(-i k.a)``."""
    a = np.broadcast_to(np.asarray(a, float), (grid.dim,))
    phase = np.exp(-1j * sum(kj * aj for kj, aj in zip(grid.k, a)))
    return grid.ifft(phase * grid.fft(z))


def covariance_check(grid, z1, z2, t, a, mp, coupling=None, out=False):
    """Space-time translation covariance of the kernel.

    (i) the kernel at time ``t`` (arguments moved by the free flow), then
    translated by ``a`` with a lattice roll; (ii) the same kernel built from
    arguments translated by a Fourier phase.  Returns the sup-norm of the
    difference of the full values.
    """
    steps = lattice_shift(grid, a)
    if t == 0 and not any(steps):
        return 0.0
    direct = kernel_at_time(grid, z1, z2, t, mp, coupling, out)
    moved = kernel_at_time(grid, spectral_translate(grid, z1, a), spectral_translate(grid, z2, a),
                           t, mp, coupling, out)
    lhs = direct.prefactor * shift_field(grid, direct.profile, steps)
    return float(np.max(np.abs(lhs - moved.full)))
