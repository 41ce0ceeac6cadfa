"""Numerical defaults. Every solver takes an optional ``SolverConfig``."""

from dataclasses import dataclass, fields, replace

from .errors import ConfigError


@dataclass(frozen=True)
class SolverConfig:
    ode_tol: float = 1e-10        # local tolerance of the Painleve integration
    root_tol: float = 1e-10       # |quantization residual| accepted by solve_k
    norm_tol: float = 1e-6
    g_tol: float = 1e-9           # outer mu-solve: mismatch in g
    y_match: float = 8.0          # start of the backward Painleve integration
    blowup: float = 1e6
    map_dx: float = 0.01          # spacing of the x grid used by the maps
    map_extent: float = 10.0      # grid covers [0, x_t + map_extent]
    exact_tol: float = 1e-12      # shooting integrator tolerance
    decay_lengths: float = 6.0    # exact solver: tail action (2/3) L^1.5 beyond the turning point
    soliton_tail_action: float = 12.0  # lattice solver: int_0^x_max kappa dx
    output_dx: float = 0.01
    validity_threshold: float = 2.0    # |y(0)| below this is flagged
    weight_power: int = 6         # chi^2 weight phi^p in the coupling fit

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ConfigError(f"{f.name} must be positive")
        if self.weight_power not in (4, 6):
            raise ConfigError("weight_power must be 4 or 6")

    def updated(self, **changes):
        unknown = set(changes) - {f.name for f in fields(self)}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return replace(self, **changes)


DEFAULT = SolverConfig()
