"""Numerical laboratory for soliton stability of the 1D focusing cubic
Klein-Gordon equation: Poschl-Teller spectral theory, iterated Darboux
transforms, coupled soliton-perturbation dynamics, topological shooting,
and dispersive-decay diagnostics."""

from .grid import Grid, apply_multiplier, forward_ft, inverse_ft, make_grid, spectral_derivative
from .cutoffs import adapted_cutoff, bump, littlewood_paley, time_partition
from .poschl_teller import (SolitonFrame, apply_L, c_coeff, distorted_ft,
                            jost_minus, jost_plus, project_pc_even,
                            resonance_constant, transmission)
from .darboux import (d1_apply, d1_adjoint_apply, d1d2_apply, d2_apply,
                      d2_adjoint_apply, i1_apply, i2_apply, j_apply, reconstruct)
from .dynamics import (SimState, SolverConfig, Trajectory, energy, evolve,
                       make_initial_state, mode_amplitudes)
from .shooting import ShootingResult, default_bracket, shoot, trapping_threshold
from .diagnostics import DecayFit, free_evolve, linf_decay_ratio, local_decay_norm, nt_norm
from .initial_data import gaussian_bump, make_family, y2_localized
from .config import ConfigError, ExperimentConfig

__version__ = "0.1.0"
