"""The Wick kernel of the interacting field between two coherent vectors.

At zero coupling the kernel profile is conj(z1) + z2 and the kernel is
Hermitian; with coupling it stays Hermitian and is bounded by the sizes of
its arguments.
"""
import numpy as np

from kgwick import wick
from kgwick.evolution import IntegratorParams
from kgwick.grid import make_grid
from kgwick.profiles import gaussian_field, random_profile
from kgwick.scattering import MatchingParams

grid = make_grid(1, 256, 32.0, 1.0, 0.1)
mp = MatchingParams(8.0, IntegratorParams(0.01, 4))
rng = np.random.default_rng(1)
z1, z2 = random_profile(grid, rng, 0.2), random_profile(grid, rng, 0.2)
h = gaussian_field(grid, 1.0, 1.0)

kv = wick.kernel(grid, z1, z2, mp)
swap = wick.kernel(grid, z2, z1, mp)
print(f"prefactor exp<z1,z2> = {complex(kv.prefactor):.6f}")
print(f"Hermitian symmetry residual {np.max(np.abs(swap.full - np.conj(kv.full))):.1e}")

free = wick.kernel(grid, z1, z2, mp, coupling=0.0)
print(f"free reduction residual {np.max(np.abs(free.profile - (np.conj(z1) + z2))):.1e}")
print(f"interaction changes the profile by {np.max(np.abs(kv.profile - free.profile)):.2e}")

print(f"smeared: lattice sum {complex(wick.smear(grid, kv, h)):.8f}")
print(f"         H^1/2 pairing {complex(wick.smear_pairing(grid, kv, h)):.8f}")

rep = wick.bound_check(grid, [(c * z1, c * z2) for c in (0.5, 1, 2, 4)], h, mp)
print(f"bound ratios {[f'{r:.4f}' for r in rep.ratios]}")

print(f"translation covariance residual "
      f"{wick.covariance_check(grid, z1, z2, 0.5, grid.box_length / 8, mp):.1e}")
