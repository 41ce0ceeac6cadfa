"""Airy functions, the phase of Gamma on the line 1 - i t, and the
connection constants of the second Painleve transcendent."""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DivergentRegime


@dataclass(frozen=True)
class ConnectionConstants:
    k: float
    sigma: int
    d_squared: float
    theta: float

    @property
    def d(self):
        return math.sqrt(self.d_squared)


def airy_ai(y):
    """Ai(y); accepts scalars or arrays."""
    ai = special.airy(y)[0]
    return float(ai) if np.ndim(ai) == 0 else ai


def airy_ai_prime(y):
    aip = special.airy(y)[1]
    return float(aip) if np.ndim(aip) == 0 else aip


def airy_tail_integral(y0):
    """Integral of Ai(y)**2 from y0 to infinity, in closed form.

    Uses d/dy (y Ai^2 - Ai'^2) = Ai^2.
    """
    ai, aip, _, _ = special.airy(y0)
    return aip * aip - y0 * ai * ai


def gamma_arg_one_minus_half_i(d2):
    """arg Gamma(1 - i d2/2), wrapped to (-pi, pi]."""
    if d2 < 0:
        raise ValueError("d2 must be nonnegative")
    phase = float(special.loggamma(complex(1.0, -0.5 * d2)).imag)
    # the principal log-gamma branch is continuous; wrapping only matters for d2 > ~9
    return math.pi - (math.pi - phase) % (2.0 * math.pi)


def connection_constants(k, sigma):
    """d^2(k) and theta(k) linking the Airy decay at +inf to the oscillation at -inf.

    ``sigma = 0`` is accepted as the linear (Airy) limit.
    """
    if k < 0:
        raise ValueError("k must be nonnegative; use the sign symmetry for k < 0")
    if sigma not in (-1, 0, 1):
        raise ValueError("sigma must be -1, 0 or +1")
    if sigma == 1 and k >= 1.0:
        raise DivergentRegime(f"transcendent diverges for sigma=+1, k={k} >= 1")
    if sigma == 0:
        return ConnectionConstants(k, 0, 0.0, -math.pi / 4)
    d2 = -sigma / math.pi * math.log1p(-sigma * k * k)
    theta = (1.5 * sigma * d2 * math.log(2.0)
             + sigma * gamma_arg_one_minus_half_i(d2) - math.pi / 4)
    return ConnectionConstants(float(k), int(sigma), d2, theta)
