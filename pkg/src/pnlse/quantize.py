"""Semiclassical quantization at fixed chemical potential and the inverse problem mu(g).

At fixed mu the quantization condition is a scalar equation for the Airy
multiplier k; the normalization of the resulting transcendent then fixes g.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import brentq

from .config import DEFAULT
from .errors import DivergentRegime, NoConvergence, NoRoot, PnlseError
from .exact import zero_count
from .mapping import build_turning_point_map, effective_coupling
from .painleve import evaluate_extended, solve_transcendent, tail_norm_integral
from .potentials import action_from_turning_point, turning_point
from .specfun import connection_constants

log = logging.getLogger(__name__)

K_FLAG = 64.0
K_CAP = 2.0 ** 20


@dataclass
class EigenstateResult:
    n: int
    mu: float
    g: float
    k: float
    sigma: int
    x_grid: np.ndarray
    psi: np.ndarray
    diagnostics: dict = field(default_factory=dict)


def origin_y(pot, mu):
    """y(0) < 0 of the turning-point map."""
    return -(1.5 * action_from_turning_point(pot, mu, 0.0)) ** (2.0 / 3.0)


def _phase_residual(y0_abs, k, sigma, n):
    cc = connection_constants(k, sigma)
    return ((2.0 / 3.0) * y0_abs ** 1.5 - 0.75 * cc.sigma * cc.d_squared * math.log(y0_abs)
            - cc.theta - 0.5 * (n + 1) * math.pi)


def wedge_residual(mu, k, F, sigma, n):
    """Quantization residual for V = F|x|, written directly in mu."""
    cc = connection_constants(k, sigma)
    return ((2.0 * mu) ** 1.5 / (3.0 * F)
            - 0.75 * cc.sigma * cc.d_squared * math.log(2.0 ** (1.0 / 3.0) * mu / F ** (2.0 / 3.0))
            - cc.theta - 0.5 * (n + 1) * math.pi)


def mapped_residual(mu, k, pot, sigma, n):
    """Quantization residual with |y(0)| taken from the turning-point map."""
    return _phase_residual(-origin_y(pot, mu), k, sigma, n)


def _residual_fn(mu, pot, sigma, n):
    if pot.kind == "wedge":
        return lambda k: wedge_residual(mu, k, pot.param, sigma, n)
    y0_abs = -origin_y(pot, mu)
    return lambda k: _phase_residual(y0_abs, k, sigma, n)


def solve_k(mu, pot, sigma, n, root_tol=None):
    """Airy multiplier k_n at fixed mu."""
    root_tol = DEFAULT.root_tol if root_tol is None else root_tol
    if sigma not in (-1, 1):
        raise ValueError("sigma must be +1 or -1")
    res = _residual_fn(mu, pot, sigma, n)
    lo = 1e-9
    r_lo = res(lo)
    if sigma == 1:
        hi = 1.0 - 1e-9
        r_hi = res(hi)
    else:
        hi = 2.0
        r_hi = res(hi)
        while r_lo * r_hi > 0 and hi < K_CAP:
            hi *= 2.0
            r_hi = res(hi)
        if hi > K_FLAG:
            log.warning("k bracket for mu=%g, n=%d expanded to %g", mu, n, hi)
    if r_lo * r_hi > 0:
        raise NoRoot(f"no k root for mu={mu}, n={n}, sigma={sigma}")
    k = brentq(res, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
    if abs(res(k)) > root_tol:
        raise NoRoot(f"k root residual {res(k):.3g} above tolerance")
    return k


def linear_mu(pot, n):
    """Chemical potential of the k = 0 (linear) state."""
    if pot.kind == "harmonic":
        return n + 0.5
    if pot.kind == "wedge":
        target = 0.5 * (n + 1) * math.pi - 0.25 * math.pi
        return 0.5 * (3.0 * pot.param * target) ** (2.0 / 3.0)
    raise ValueError(f"no turning-point quantization for {pot.kind}")


@dataclass
class _State:
    mu: float
    n: int
    sigma: int
    k: float
    g: float
    a: float
    y0: float
    residual: float
    mapping: object
    phi: np.ndarray
    chi2: float = 0.0


def _half_grid(pot, mu, cfg):
    xt = turning_point(pot, mu)
    xmax = xt + cfg.map_extent
    m = int(round(xmax / cfg.map_dx))
    return np.linspace(0.0, m * cfg.map_dx, m + 1)


def semiclassical_state(mu, pot, sigma, n, config=None):
    """Everything the fixed-mu procedure produces; sigma = 0 gives the linear state."""
    cfg = config or DEFAULT
    y0 = origin_y(pot, mu)
    mapping = build_turning_point_map(pot, mu, _half_grid(pot, mu, cfg))
    if sigma == 0:
        k, residual = 1.0, 0.0
    else:
        k = solve_k(mu, pot, sigma, n, cfg.root_tol)
        residual = _residual_fn(mu, pot, sigma, n)(k)
    sol = solve_transcendent(k, sigma, y_min=min(y0, -1.0) - 0.5, y_match=cfg.y_match,
                             tol=cfg.ode_tol, blowup=cfg.blowup)
    phi = evaluate_extended(sol, mapping.y)
    chi2 = 0.0
    if sigma == 0:
        coupling = effective_coupling(mapping, phi, 1.0)
        g, a = 0.0, coupling.a
    elif pot.kind == "wedge":
        two_f = 2.0 * pot.param
        g = sigma * 2.0 * two_f ** (1.0 / 3.0) * tail_norm_integral(sol, y0)
        a = math.sqrt(two_f / abs(g))
    else:
        coupling = effective_coupling(mapping, phi, sigma, weight_power=cfg.weight_power)
        g, a, chi2 = coupling.g_eff, coupling.a, coupling.chi2
    return _State(mu, n, sigma, k, g, a, y0, residual, mapping, phi, chi2)


def g_of_mu(mu, pot, sigma, n, config=None):
    """Effective nonlinearity g_n(mu) and the multiplier k_n."""
    st = semiclassical_state(mu, pot, sigma, n, config)
    return st.g, st.k


def _mirror(x_half, psi_half, n):
    x = np.concatenate([-x_half[:0:-1], x_half])
    psi = np.concatenate([(-1) ** n * psi_half[:0:-1], psi_half])
    if n % 2 == 1 and x_half[0] == 0.0:
        # odd extension; the leftover |psi_half(0)| is reported as parity_gap
        psi[len(x_half) - 1] = 0.0
    return x, psi


def _infer_n(mu, k, pot, sigma):
    if sigma == 0 or k == 0:
        y0_abs = -origin_y(pot, mu)
        return int(round(((2.0 / 3.0) * y0_abs ** 1.5 + 0.25 * math.pi) / (0.5 * math.pi) - 1))
    r = _phase_residual(-origin_y(pot, mu), k, sigma, 0)
    return int(round(r / (0.5 * math.pi)))


def assemble_wavefunction(mu, k, pot, sigma, a, n=None, config=None):
    """psi = a f(x) phi(y(x)) on x >= 0, mirrored with parity (-1)^n."""
    cfg = config or DEFAULT
    if n is None:
        n = _infer_n(mu, k, pot, sigma)
    mapping = build_turning_point_map(pot, mu, _half_grid(pot, mu, cfg))
    y0 = origin_y(pot, mu)
    sol = solve_transcendent(k, sigma, y_min=min(y0, -1.0) - 0.5, y_match=cfg.y_match,
                             tol=cfg.ode_tol, blowup=cfg.blowup)
    psi_half = a * mapping.f * evaluate_extended(sol, mapping.y)
    return _mirror(mapping.x_grid, psi_half, n)


def _result(st, pot, cfg):
    psi_half = st.a * st.mapping.f * st.phi
    x, psi = _mirror(st.mapping.x_grid, psi_half, st.n)
    norm = 2.0 * simpson(psi_half ** 2, x=st.mapping.x_grid)
    validity = abs(st.y0)
    peak = np.max(np.abs(psi_half))
    if st.n % 2 == 1:
        gap = abs(psi_half[0]) / peak
    else:
        # even states should be flat at the origin: relative one-sided slope
        slope = np.gradient(psi_half, st.mapping.x_grid)
        gap = abs(slope[0]) / np.max(np.abs(slope))
    zeros = zero_count(psi)
    diagnostics = {
        "y0": st.y0,
        "quantization_residual": abs(st.residual),
        "norm_error": abs(norm - 1.0),
        "asymptotic_validity": validity,
        "flagged": validity < cfg.validity_threshold or zeros != st.n,
        "zero_count": int(zeros),
        "parity_gap": float(gap),
        "psi0_right": float(psi_half[0]),   # right-hand limit of psi at x = 0
        "chi2": st.chi2,
        "max_f2_over_f": st.mapping.curvature_diagnostic(),
    }
    return EigenstateResult(st.n, st.mu, st.g, st.k, st.sigma, x, psi, diagnostics)


def solve_mu_for_g(g_target, pot, n, config=None, max_iter=60):
    """Chemical potential of the n-th state at nonlinearity g_target (secant in mu)."""
    cfg = config or DEFAULT
    mu_lin = linear_mu(pot, n)
    linear = semiclassical_state(mu_lin, pot, 0, n, cfg)
    if g_target == 0:
        return _result(linear, pot, cfg)
    sigma = 1 if g_target > 0 else -1
    # first-order shift d mu/d g = int psi^4 seeds the secant
    psi_half = linear.a * linear.mapping.f * linear.phi
    slope = 2.0 * simpson(psi_half ** 4, x=linear.mapping.x_grid)
    gtol = cfg.g_tol * max(1.0, abs(g_target))

    def evaluate_at(mu):
        return semiclassical_state(mu, pot, sigma, n, cfg)

    mu_prev, g_prev = mu_lin, 0.0
    mu_cur = mu_lin + g_target * slope
    st = None
    for _ in range(max_iter):
        try:
            st = evaluate_at(mu_cur)
        except (NoRoot, DivergentRegime, PnlseError):
            # overshoot out of the admissible region: retreat toward the last good point
            mu_cur = 0.5 * (mu_cur + mu_prev)
            st = None
            continue
        if abs(st.g - g_target) <= gtol:
            return _result(st, pot, cfg)
        denom = st.g - g_prev
        if denom == 0:
            break
        step = (g_target - st.g) * (mu_cur - mu_prev) / denom
        mu_prev, g_prev = mu_cur, st.g
        mu_cur = mu_cur + step
        if sigma == 1 and mu_cur <= mu_lin:
            mu_cur = 0.5 * (mu_prev + mu_lin)
        if sigma == -1 and mu_cur >= mu_lin:
            mu_cur = 0.5 * (mu_prev + mu_lin)
    raise NoConvergence(f"mu(g) secant failed for g={g_target}, n={n}")
