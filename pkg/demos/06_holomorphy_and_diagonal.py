"""Two diagnostics that separate the free kernel from the interacting one.

Holomorphy: the smeared kernel, as a function of a complex multiple of the
second argument, is tested with Cauchy-Riemann differences.  The free kernel
gives residuals that fall like step^2; the interacting kernel levels off.

Diagonal: the kernel at z1 = z2 = z_t, divided by its prefactor, is compared
with the field equation via a second difference in time.
"""
import numpy as np

from kgwick import wick
from kgwick.evolution import IntegratorParams, pde_residual
from kgwick.grid import make_grid, map_R_inv
from kgwick.profiles import gaussian_field, random_profile
from kgwick.scattering import MatchingParams

grid = make_grid(1, 128, 32.0, 1.0, 0.1)
mp = MatchingParams(5.0, IntegratorParams(0.01, 4))
rng = np.random.default_rng(4)
z1, z2 = random_profile(grid, rng, 0.25), random_profile(grid, rng, 0.25)
h = gaussian_field(grid, 1.0, 1.0)
steps = (0.2, 0.1, 0.05)

for lam in (0.0, 0.1):
    rep = wick.holomorphy_check(grid, (z1, z2), h, 0.1, mp, coupling=lam, steps=steps)
    print(f"lambda = {lam}: CR residuals {[f'{v:.2e}' for v in rep.cr_holo]}, "
          f"slopes {[f'{s:.2f}' for s in rep.slopes()]}")

for lam in (0.0, 0.1):
    res = []
    for dt in (0.02, 0.01, 0.005):
        u = wick.diagonal_trajectory(grid, z1, [1 - dt, 1.0, 1 + dt], mp, coupling=lam)
        res.append(pde_residual(grid, [map_R_inv(grid, v) for v in u], dt, coupling=lam))
    print(f"lambda = {lam}: diagonal equation residual {[f'{r:.2e}' for r in res]}")
