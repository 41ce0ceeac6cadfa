"""Free-NLSE solitons and the bright soliton of a shallow cosine lattice.

The free equation is phi'' + 2 nu phi - 2 g phi^3 = 0. In the lattice
V(x) = w cos x the solution is mapped onto it with
(dy/dx)^2 = (mu - w cos x)/nu and nu = mu, so the map is the identity at w = 0.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .config import DEFAULT
from .errors import DomainError, ForbiddenWindow, NoConvergence, PnlseError
from .mapping import build_constant_map, effective_coupling

BRIGHT = "bright"
DARK = "dark"


@dataclass(frozen=True)
class SolitonParams:
    nu: float
    g: float
    y0: float = 0.0
    kind: str = BRIGHT

    def __post_init__(self):
        if self.kind == BRIGHT:
            if not (self.nu < 0 and self.g < 0):
                raise DomainError("bright solitons need nu < 0 and g < 0")
        elif self.kind == DARK:
            # the tanh form solves the free equation only for nu > 0
            if not (self.nu > 0 and self.g > 0):
                raise DomainError("dark solitons need nu > 0 and g > 0")
        else:
            raise DomainError(f"unknown soliton kind {self.kind!r}")

    @classmethod
    def unit_bright(cls, nu, y0=0.0):
        """Bright soliton with unit norm: g = -sqrt(-8 nu)."""
        if not nu < 0:
            raise DomainError("bright solitons need nu < 0")
        return cls(nu, -math.sqrt(-8.0 * nu), y0, BRIGHT)

    @property
    def amplitude(self):
        ratio = 2.0 * self.nu / self.g if self.kind == BRIGHT else self.nu / self.g
        return math.sqrt(ratio)

    @property
    def norm(self):
        """Integral of phi^2 over the line (bright only)."""
        if self.kind != BRIGHT:
            raise DomainError("dark solitons are not normalizable")
        return -2.0 * math.sqrt(-2.0 * self.nu) / self.g


def bright_free(p, y):
    """sqrt(2 nu/g) sech(sqrt(-2 nu) (y - y0))."""
    if p.kind != BRIGHT:
        raise DomainError("expected bright soliton parameters")
    y = np.asarray(y, dtype=float)
    # sech via exp(-|z|) so the far tail underflows quietly instead of overflowing cosh
    e = np.exp(-np.abs(math.sqrt(-2.0 * p.nu) * (y - p.y0)))
    out = p.amplitude * 2.0 * e / (1.0 + e * e)
    return float(out) if out.ndim == 0 else out


def dark_free(p, y):
    """sqrt(nu/g) tanh(sqrt(nu) (y - y0))."""
    if p.kind != DARK:
        raise DomainError("expected dark soliton parameters")
    y = np.asarray(y, dtype=float)
    out = p.amplitude * np.tanh(math.sqrt(p.nu) * (y - p.y0))
    return float(out) if out.ndim == 0 else out


@dataclass(eq=False)
class LatticeSoliton:
    mu: float
    w: float
    g_eff: float
    a: float
    chi2: float
    x_grid: np.ndarray
    psi: np.ndarray
    mapping: object = field(repr=False)

    def __iter__(self):
        # unpacks as (g_eff, x_grid, psi)
        return iter((self.g_eff, self.x_grid, self.psi))


def _support(mu, w, dx, floor=1e-8):
    """Half-line grid on which the base soliton falls below ``floor``."""
    base = SolitonParams.unit_bright(mu)
    y_end = math.log(2.0 * base.amplitude / floor) / math.sqrt(-2.0 * mu)
    slope_min = math.sqrt(1.0 - abs(w / mu))
    m = int(math.ceil(y_end / slope_min / dx))
    return np.linspace(0.0, m * dx, m + 1)


def bright_in_lattice(mu, w, config=None, x_grid=None):
    """Semiclassical bright soliton of psi'' + 2(mu - w cos x) psi - 2 g psi^3 = 0.

    The soliton sits on a lattice minimum, taken as the origin: for w > 0 that
    is a shift by pi, so only |w| enters. ``x_grid`` (optional, any points)
    only sets where psi is returned; the fit uses its own half-line grid.
    """
    cfg = config or DEFAULT
    if not mu < -abs(w):
        raise ForbiddenWindow(f"need mu < -|w| (mu={mu}, w={w})")
    w_min = -abs(w)
    base = SolitonParams.unit_bright(mu)
    half = _support(mu, w_min, cfg.map_dx)
    mapping = build_constant_map(mu, w_min, mu, half)
    phi = bright_free(base, mapping.y)
    fit = effective_coupling(mapping, phi, base.g, weight_power=cfg.weight_power)
    if x_grid is None:
        grid = np.concatenate([-half[:0:-1], half])
        f = np.concatenate([mapping.f[:0:-1], mapping.f])
        y = np.concatenate([mapping.y[:0:-1], mapping.y])
    else:
        # the map is even in x: evaluate on sorted |x| and scatter back
        grid = np.asarray(x_grid, dtype=float)
        ax, inverse = np.unique(np.abs(grid), return_inverse=True)
        at = build_constant_map(mu, w_min, mu, ax)
        f, y = at.f[inverse], at.y[inverse]
    psi = fit.a * f * bright_free(base, y)
    return LatticeSoliton(mu, w, fit.g_eff, fit.a, fit.chi2, grid, psi, mapping)


def _invert(g_of_mu, g_target, w, mu_seed):
    """mu < -|w| with g_of_mu(mu) = g_target; g_eff decreases as mu decreases."""
    edge = -abs(w)
    hi = min(mu_seed, edge - 1e-3)
    g_hi = g_of_mu(hi)
    step = 0.25 * max(abs(hi), 0.1)
    if g_hi < g_target:
        # move up towards the band edge
        while g_hi < g_target:
            new = edge - 0.5 * (edge - hi)
            if edge - new < 1e-6:
                raise NoConvergence("g_eff target not reached below the band edge")
            hi, g_hi = new, g_of_mu(new)
        lo = hi - step
        while g_of_mu(lo) > g_target:
            lo -= step
    else:
        lo = hi
        while True:
            lo -= step
            step *= 2.0
            if g_of_mu(lo) < g_target:
                break
            hi = lo
            if step > 1e4:
                raise NoConvergence("cannot bracket mu")
    return brentq(lambda m: g_of_mu(m) - g_target, lo, hi, xtol=1e-13, rtol=1e-13)


def mu_for_g(g_eff, w, method="sc", config=None, tol=None):
    """Chemical potential of the bright lattice soliton with nonlinearity g_eff < 0."""
    if not g_eff < 0:
        raise DomainError("bright solitons need g_eff < 0")
    if method == "sc":
        def g_of_mu(m):
            return bright_in_lattice(m, w, config).g_eff
    elif method == "exact":
        from .exact import solve_soliton_exact

        def g_of_mu(m):
            return solve_soliton_exact(w, m, tol, config).g_eff
    else:
        raise ValueError(f"unknown method {method!r}")
    seed = -g_eff ** 2 / 8.0 - abs(w)
    return _invert(g_of_mu, g_eff, w, seed)


def mu_shift_curves(w=None, g_values=None, g_eff=None, w_values=None, config=None, tol=None):
    """Paired (semiclassical, exact) chemical potentials of the lattice soliton.

    Either sweep g_eff at fixed ``w`` (``g_values``) or sweep ``w_values`` at
    fixed ``g_eff``. Failing points carry their error in ``status``.
    """
    if g_values is not None:
        if w is None:
            raise ValueError("a g_eff sweep needs w")
        points = [(float(g), float(w)) for g in g_values]
    elif w_values is not None:
        if g_eff is None:
            raise ValueError("a w sweep needs g_eff")
        points = [(float(g_eff), float(v)) for v in w_values]
    else:
        raise ValueError("give g_values or w_values")
    return [soliton_point(g, v, config, tol) for g, v in points]


def soliton_point(g, w, config=None, tol=None):
    row = {"g_eff": g, "w": w, "mu_sc": math.nan, "mu_ex": math.nan, "status": "ok"}
    problems = []
    for key, method in (("mu_sc", "sc"), ("mu_ex", "exact")):
        try:
            row[key] = mu_for_g(g, w, method, config, tol)
        except (PnlseError, ValueError) as exc:
            problems.append(f"{method}: {exc}")
    if problems:
        row["status"] = "; ".join(problems)
    return row
