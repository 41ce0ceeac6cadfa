"""Coordinate maps psi(x) = a f(x) phi(y(x)) onto P_II and onto the free NLSE,
with the least-squares choice of the scaling constant."""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import DegeneratePhi, ForbiddenWindow
from .potentials import _panel_quad, action_from_turning_point, q_squared, turning_point

TURNING_POINT = "turning_point"
CONSTANT = "constant"


@dataclass(frozen=True, eq=False)
class MappingFunction:
    x_grid: np.ndarray
    y: np.ndarray
    dydx: np.ndarray
    f: np.ndarray
    kind: str
    x_t: float = float("nan")

    def curvature_diagnostic(self):
        """max |f''/f| on the grid: size of the term the map neglects."""
        if len(self.x_grid) < 5:
            return float("nan")
        d2f = np.gradient(np.gradient(self.f, self.x_grid), self.x_grid)
        return float(np.max(np.abs(d2f[2:-2] / self.f[2:-2])))


@dataclass(frozen=True)
class EffectiveCoupling:
    a: float
    g_eff: float
    chi2: float
    c: float   # minimising product g * a**2


def build_turning_point_map(pot, mu, x_grid):
    """Map sending the turning point to y = 0, y < 0 in the allowed region."""
    x = np.asarray(x_grid, dtype=float)
    xt = turning_point(pot, mu)
    action = action_from_turning_point(pot, mu, x)
    sgn = np.where(x < xt, -1.0, 1.0)
    y = sgn * (1.5 * action) ** (2.0 / 3.0)
    limit = (2.0 * abs(pot.dV(xt))) ** (1.0 / 3.0)
    near = np.abs(x - xt) <= 1e-9 * max(1.0, xt)
    with np.errstate(divide="ignore", invalid="ignore"):
        dydx = np.sqrt(np.abs(q_squared(pot, mu, x)) / np.abs(y))
    dydx = np.where(near, limit, dydx)
    y = np.where(near, 0.0, y)
    return MappingFunction(x, y, dydx, dydx ** -0.5, TURNING_POINT, xt)


def build_constant_map(mu, w, nu, x_grid):
    """Map onto the free NLSE with chemical potential nu: y'^2 = (mu - w cos x)/nu, y(0) = 0."""
    x = np.asarray(x_grid, dtype=float)

    def slope(t):
        return np.sqrt((mu - w * np.cos(t)) / nu)

    probe = np.concatenate([x, np.linspace(0.0, np.max(np.abs(x)), 64)])
    radicand = (mu - w * np.cos(probe)) / nu
    if np.any(radicand <= 0):
        raise ForbiddenWindow(f"(mu - w cos x)/nu <= 0 for mu={mu}, w={w}, nu={nu}")
    # y(x) = int_0^x slope, accumulated by 16-point Gauss panels on each grid interval
    edges = np.concatenate([[0.0], x]) if x[0] != 0.0 else x
    pieces = _panel_quad(slope, edges[:-1], edges[1:], n=16, width=0.5)
    y = np.cumsum(pieces)
    if x[0] == 0.0:
        y = np.concatenate([[0.0], y])
    dydx = slope(x)
    return MappingFunction(x, y, dydx, dydx ** -0.5, CONSTANT)


def effective_coupling(mapping, phi_samples, coeff, norm_target=1.0, half_line=True,
                       weight_power=6):
    """Minimise chi^2 = int [coeff y'^2 - c / y']^2 phi^6 dx over c = g a^2.

    ``weight_power`` replaces the exponent 6 of the weight; 4 makes the fit
    agree with first-order perturbation theory in g.

    ``coeff`` is sigma for the P_II map and the free-equation coupling for the
    constant map. ``a`` then follows from int (a f phi)^2 dx = norm_target,
    taken over the full line (twice the half-line grid when ``half_line``).
    """
    x = mapping.x_grid
    phi = np.asarray(phi_samples, dtype=float)
    A = coeff * mapping.dydx ** 2
    B = 1.0 / mapping.dydx
    w6 = np.abs(phi) ** weight_power
    bb = simpson(B * B * w6, x=x)
    if not bb > 1e-300:
        raise DegeneratePhi("int B^2 phi^6 dx vanishes")
    c = simpson(A * B * w6, x=x) / bb
    chi2 = simpson((A - c * B) ** 2 * w6, x=x)
    weight = 2.0 if half_line else 1.0
    norm = weight * simpson(mapping.f ** 2 * phi ** 2, x=x)
    if not norm > 0:
        raise DegeneratePhi("phi has zero norm on the grid")
    a2 = norm_target / norm
    return EffectiveCoupling(float(np.sqrt(a2)), float(c / a2), float(max(chi2, 0.0)), float(c))


def chi2_at(mapping, phi_samples, coeff, c, weight_power=6):
    """chi^2 for a given product c = g a^2 (for minimality checks)."""
    A = coeff * mapping.dydx ** 2
    B = 1.0 / mapping.dydx
    w = np.abs(np.asarray(phi_samples, dtype=float)) ** weight_power
    return float(simpson((A - c * B) ** 2 * w, x=mapping.x_grid))
