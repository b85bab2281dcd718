"""Hermite-like basis on the mass hyperboloid.

Elements are built from the ground Gaussian by the relativistic raising
operators and come out orthonormal under d^d p / mu(p).
"""
import numpy as np

from kgwick import fock
from kgwick.grid import make_grid

grid = make_grid(1, 256, 64.0, 1.0)
idx = fock.multi_indices(1, 4)
gram = fock.gram_matrix(grid, idx)
print(f"Gram matrix of {len(idx)} elements, max deviation from identity "
      f"{np.max(np.abs(gram - np.eye(len(idx)))):.1e}")

comm = fock.commutator_matrix(grid, idx[:-1], 0)
print(f"[b, b*] matrix elements, deviation from delta {np.max(np.abs(comm - np.eye(len(idx) - 1))):.1e}")

for k in idx:
    e = fock.basis_element(k, grid)
    print(f"  e_{k[0]}: imaginary part in position space {fock.reality_residual(grid, e):.1e}")

print("refinement of the Gram error with n (fixed box):")
for n in (64, 128, 256):
    g = make_grid(1, n, 64.0, 1.0)
    err = np.max(np.abs(fock.gram_matrix(g, idx, strict=False) - np.eye(len(idx))))
    print(f"  n = {n:3}: {err:.1e}")
