"""Born expansion of the wave operator in the size of the data.

Subtracting the linear and cubic Born terms leaves a fifth-order remainder;
even orders vanish because the nonlinearity is odd.
"""
import numpy as np

from kgwick import perturbative as pt
from kgwick.evolution import IntegratorParams
from kgwick.fock import CoherentCombo
from kgwick.grid import make_grid, sobolev_norm
from kgwick.profiles import random_profile, random_test_function
from kgwick.scattering import MatchingParams

grid = make_grid(1, 128, 16.0, 1.0, 0.1)
mp = MatchingParams(5.0, IntegratorParams(0.002, 4))
z = random_profile(grid, np.random.default_rng(2), 1.0)
z = z / sobolev_norm(grid, z, 1.0)
eps = (0.05, 0.1, 0.2, 0.4)

for name, fit in [("first-order remainder", pt.order_scaling(grid, z, mp, eps)),
                  ("third-order remainder", pt.remainder_scaling(grid, z, mp, eps)),
                  ("even part", pt.parity(grid, z, mp, eps))]:
    vals = ", ".join(f"{v:.2e}" for v in fit.values)
    print(f"{name:22s} slope {fit.exponent:6.3f}   [{vals}]")

# Wick monomials of the incoming field on coherent vectors reduce to products
r = np.random.default_rng(3)
fs = [random_test_function(grid, r) for _ in range(3)]
chi = CoherentCombo([(1.0, random_profile(grid, r, 0.3))])
psi = CoherentCombo([(1.0, random_profile(grid, r, 0.3))])
print(f":phi(f1) phi(f2) phi(f3): on coherent vectors = {pt.wick_monomial(grid, fs, chi, psi):.6e}")
