"""Numerical laboratory for classical scattering and Wick kernels of the cubic Klein-Gordon field."""
from .evolution import (BlowUpError, IntegratorParams, damped_flow_z, energy, free_flow_z,
                        free_propagate, nonlinear_evolve, nonlinear_step, pde_residual)
from .fock import (CoherentCombo, basis_element, coherent_inner, phi_k, raise_element,
                   vacuum_e0)
from .grid import (Grid, PhaseSpacePoint, apply_J, apply_mu_power, make_grid, map_R, map_R_inv,
                   sobolev_inner, space_reflect, time_reflect)
from .perturbative import born_first, born_third, kernel_vs_born, order_scaling, wick_monomial
from .scattering import (MatchingParams, check_intertwining, convergence_report, scatter,
                         wave_in, wave_in_inverse, wave_out, wave_out_inverse)
from .wick import (KernelValue, bilinear_form, bound_check, covariance_check, diagonal_trajectory,
                   holomorphy_check, kernel, kernel_evolved, kernel_out, rsr, rwr, smear)

__version__ = "0.1.0"
