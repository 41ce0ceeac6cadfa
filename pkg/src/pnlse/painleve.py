"""Decaying solutions of the second Painleve equation phi'' = 2 sigma phi^3 + y phi."""

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from . import _ode
from .config import DEFAULT
from .errors import BlowUp, DivergentRegime, DomainError, OutOfRange, NoConvergence
from .specfun import ConnectionConstants, airy_ai, airy_ai_prime, airy_tail_integral, \
    connection_constants


@dataclass(frozen=True, eq=False)
class PainleveSolution:
    k: float
    sigma: int
    grid: np.ndarray            # ascending y nodes
    phi: np.ndarray
    dphi: np.ndarray
    y_match: float
    constants: ConnectionConstants
    tol: float
    # integral of phi**2 from each node up to y_match
    partial_norm: np.ndarray = field(repr=False)
    sign: float = 1.0

    @cached_property
    def _spline(self):
        return CubicHermiteSpline(self.grid, self.phi, self.dphi)

    @cached_property
    def _norm_spline(self):
        return CubicHermiteSpline(self.grid, self.partial_norm, -self.phi ** 2)

    @property
    def y_min(self):
        return float(self.grid[0])


def _max_step(tol):
    # keeps cubic Hermite interpolation between nodes well below 10 * tol
    return 0.5 * tol ** 0.25


def solve_transcendent(k, sigma, y_min=-12.0, y_match=None, tol=None, blowup=None,
                       sign=1.0):
    """Integrate P_II backward from ``y_match`` with Airy initial data k Ai, k Ai'.

    ``sigma = 0`` gives the linear Airy equation (used as a test mode).
    ``sign = -1`` starts from the negated data (sign symmetry check).
    """
    y_match = DEFAULT.y_match if y_match is None else y_match
    tol = DEFAULT.ode_tol if tol is None else tol
    blowup = DEFAULT.blowup if blowup is None else blowup
    if not 1e-12 <= tol <= 1e-6:
        raise ValueError("tol must lie in [1e-12, 1e-6]")
    if not (y_min < 0 < y_match and y_match >= 5):
        raise ValueError("need y_min < 0 < y_match and y_match >= 5")
    if sigma == 1 and k >= 1.0:
        raise DivergentRegime(f"transcendent diverges for sigma=+1, k={k} >= 1")
    constants = connection_constants(k, sigma)
    y0 = np.array([sign * k * airy_ai(y_match), sign * k * airy_ai_prime(y_match), 0.0])
    ts, ys, _, status = _ode.integrate(
        _ode.PAINLEVE, np.array([float(sigma)]), float(y_match), y0, float(y_min),
        tol, tol * 1e-12, _max_step(tol), blowup, 2_000_000)
    if status == _ode.BLOWUP:
        raise BlowUp(f"|phi| exceeded {blowup:g} near y={ts[-1]:.4g} (k={k}, sigma={sigma})")
    if status != _ode.OK:
        raise NoConvergence(f"Painleve integration stopped with status {status}")
    return PainleveSolution(
        k=float(k), sigma=int(sigma), grid=ts[::-1].copy(), phi=ys[::-1, 0].copy(),
        dphi=ys[::-1, 1].copy(), y_match=float(y_match), constants=constants, tol=tol,
        partial_norm=ys[::-1, 2].copy(), sign=float(sign))


def asymptotic_negative(y, constants):
    """Leading oscillatory form d |y|^(-1/4) sin(2/3 |y|^1.5 - 3/4 sigma d^2 ln|y| - theta)."""
    y = np.asarray(y, dtype=float)
    if np.any(y > -1.0):
        raise DomainError("asymptotic_negative needs y <= -1")
    a = np.abs(y)
    phase = (2.0 / 3.0) * a ** 1.5 - 0.75 * constants.sigma * constants.d_squared * np.log(a) \
        - constants.theta
    out = _amplitude(constants) * a ** -0.25 * np.sin(phase)
    return float(out) if out.ndim == 0 else out


def _amplitude(constants):
    if constants.sigma == 0:
        # linear limit: k Ai(y) ~ k pi^(-1/2) |y|^(-1/4) sin(...)
        return constants.k / math.sqrt(math.pi)
    return math.sqrt(constants.d_squared)


def asymptotic_positive(y, k):
    return k * airy_ai(y)


def evaluate(sol, y):
    """Hermite interpolation of phi on the stored nodes."""
    y = np.asarray(y, dtype=float)
    if np.any(y < sol.grid[0]) or np.any(y > sol.grid[-1]):
        raise OutOfRange(f"y outside [{sol.grid[0]:.6g}, {sol.grid[-1]:.6g}]")
    out = sol._spline(y)
    return float(out) if out.ndim == 0 else out


def evaluate_extended(sol, y):
    """phi on the stored range, continued by k Ai(y) beyond y_match."""
    y = np.asarray(y, dtype=float)
    out = np.empty_like(y)
    inside = y <= sol.y_match
    if np.any(y[inside] < sol.grid[0]):
        raise OutOfRange("y below the integrated range")
    out[inside] = sol._spline(y[inside])
    out[~inside] = sol.sign * sol.k * airy_ai(y[~inside])
    return out


def tail_norm_integral(sol, y0):
    """Integral of phi**2 from y0 to +infinity."""
    if y0 < sol.grid[0]:
        raise OutOfRange(f"y0={y0} below the integrated range")
    tail = sol.k ** 2 * airy_tail_integral(max(y0, sol.y_match))
    if y0 >= sol.y_match:
        return float(sol.k ** 2 * airy_tail_integral(y0))
    return float(sol._norm_spline(y0)) + float(tail)
