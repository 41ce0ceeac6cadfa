"""Stationary states of the 1D nonlinear Schrodinger (Gross-Pitaevskii) equation.

Semiclassical states come from mapping onto the second Painleve transcendent
(single turning point) or onto the free NLSE (shallow lattice); ``exact``
provides shooting solutions to compare against.
"""

from .config import DEFAULT, SolverConfig
from .errors import (BlowUp, ConfigError, DegeneratePhi, DivergentRegime, DomainError,
                     ForbiddenWindow, NoConvergence, NoRoot, NoTurningPoint, OutOfRange,
                     PnlseError, SignChange, WrongNodeCount)
from .exact import solve_eigenstate_exact, solve_soliton_exact, zero_count
from .painleve import solve_transcendent
from .potentials import Potential
from .quantize import g_of_mu, semiclassical_state, solve_k, solve_mu_for_g
from .soliton import SolitonParams, bright_free, bright_in_lattice, dark_free, mu_shift_curves
from .specfun import connection_constants

__all__ = [
    "DEFAULT", "SolverConfig", "Potential", "connection_constants", "solve_transcendent",
    "solve_k", "g_of_mu", "semiclassical_state", "solve_mu_for_g", "solve_eigenstate_exact",
    "solve_soliton_exact", "zero_count", "SolitonParams", "bright_free", "dark_free",
    "bright_in_lattice", "mu_shift_curves", "PnlseError", "BlowUp", "ConfigError",
    "DegeneratePhi", "DivergentRegime", "DomainError", "ForbiddenWindow", "NoConvergence",
    "NoRoot", "NoTurningPoint", "OutOfRange", "SignChange", "WrongNodeCount",
]
