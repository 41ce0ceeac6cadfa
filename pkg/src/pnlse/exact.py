"""Parity shooting for the stationary NLSE psi'' = -q^2 psi + 2 g psi^3.

This is the comparison standard for every semiclassical result. At a fixed
initial amplitude the chemical potential is bracketed by node counting and
polished on the tail log-derivative mismatch; the amplitude is then tuned to
unit norm. For the lattice soliton mu is fixed instead and the amplitude is
shot, with g_eff following from the norm by rescaling.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq

from . import _ode
from .config import DEFAULT
from .errors import ForbiddenWindow, NoConvergence, WrongNodeCount
from .potentials import Potential, _panel_quad, action_from_turning_point, q_squared

_H_MAX = 0.02


def zero_count(psi, threshold=1e-9):
    """Strict sign changes, skipping samples below threshold * max|psi|."""
    psi = np.asarray(psi, dtype=float)
    if psi.size == 0:
        return 0
    keep = np.abs(psi) > threshold * np.max(np.abs(psi))
    s = np.sign(psi[keep])
    return int(np.count_nonzero(s[1:] != s[:-1]))


@dataclass(frozen=True)
class _Shot:
    x: np.ndarray
    y: np.ndarray       # columns: psi, psi', int_0^x psi^2
    f: np.ndarray
    status: int
    mismatch: float     # normalised tail log-derivative mismatch in [-1, 1]
    nodes: int


@dataclass(eq=False)
class ExactEigenstate:
    n: int
    mu: float
    g: float
    x_grid: np.ndarray
    psi: np.ndarray
    decay_residual: float
    norm_error: float
    x_max: float = float("nan")
    _shot: _Shot = field(default=None, repr=False)
    _scale: float = 1.0
    _pot: Potential = field(default=None, repr=False)

    def sample(self, x):
        """psi at arbitrary x (parity applied; WKB continuation past x_max)."""
        return _sample(self._shot, self._scale, self.n % 2, self._pot, self.mu, x)

    def trajectory(self):
        """Integrator nodes on x >= 0 up to the tail cut: (x, psi, dpsi), normalised."""
        return _trajectory(self._shot, self._scale)


def _trajectory(shot, scale):
    cut = _cut_index(shot) + 1
    return shot.x[:cut].copy(), scale * shot.y[:cut, 0], scale * shot.y[:cut, 1]


def _tail_rate(pot, mu, x):
    """Decay rate of the WKB tail kappa^(-1/2) exp(-int kappa)."""
    kappa2 = -q_squared(pot, mu, x)
    if kappa2 <= 0:
        return 0.0
    kappa = math.sqrt(kappa2)
    return kappa + float(pot.dV(x)) / (2.0 * kappa2)


def _x_max(pot, mu, cfg):
    """End of the shooting interval: the tail action from the classical edge is fixed."""
    target = (2.0 / 3.0) * cfg.decay_lengths ** 1.5
    if pot.kind in ("wedge", "harmonic") and mu > 0:
        xt = mu / pot.param if pot.kind == "wedge" else math.sqrt(2.0 * mu)
        hi = xt + 1.0
        while action_from_turning_point(pot, mu, hi) < target:
            hi = xt + 2.0 * (hi - xt)
        return brentq(lambda x: action_from_turning_point(pot, mu, x) - target, xt, hi,
                      xtol=1e-10)
    # mu below the trap floor, or the lattice: measure the decay from the origin
    if pot.kind == "cosine":
        target = cfg.soliton_tail_action

    def action(x):
        return float(_panel_quad(lambda u: np.sqrt(np.maximum(-q_squared(pot, mu, u), 0.0)),
                                 0.0, x)[0]) - target

    hi = 1.0
    while action(hi) < 0:
        hi *= 2.0
    return brentq(action, 0.0, hi, xtol=1e-10)


def _shoot(pot, mu, g, amp, odd, x_max, tol):
    start = np.array([0.0, amp, 0.0]) if odd else np.array([amp, 0.0, 0.0])
    q0 = math.sqrt(max(q_squared(pot, mu, 0.0), 1.0))
    blow = 1e3 * abs(amp) * (max(1.0, 1.0 / q0) if odd else 1.0)
    p = np.array([float(pot.code), pot.param, mu, g])
    x, y, f, status = _ode.integrate(_ode.NLSE, p, 0.0, start, x_max, tol,
                                     tol * 1e-6 * abs(amp), _H_MAX, blow, 4_000_000)
    psi_end, dpsi_end = y[-1, 0], y[-1, 1]
    if status == _ode.BLOWUP:
        mismatch = math.copysign(1.0, psi_end)
    else:
        lam = _tail_rate(pot, mu, x[-1])
        mismatch = (dpsi_end + lam * psi_end) / (abs(dpsi_end) + lam * abs(psi_end) + 1e-300)
    return _Shot(x, y, f, status, mismatch, zero_count(y[1:, 0]))


def _mu_at_amplitude(pot, g, amp, n, mu_guess, tol, cfg, width=0.5):
    """mu for which the shot with fixed amplitude has n//2 nodes on x > 0 and decays."""
    m = n // 2
    odd = n % 2 == 1

    def shot(mu):
        return _shoot(pot, mu, g, amp, odd, _x_max(pot, mu, cfg), tol)

    s = shot(mu_guess)
    if s.nodes <= m:
        lo, hi, step = mu_guess, mu_guess + width, width
        while shot(hi).nodes <= m:
            lo, step = hi, 2.0 * step
            hi = hi + step
            if step > 1e4:
                raise NoConvergence("cannot bracket mu from above")
    else:
        hi, lo, step = mu_guess, mu_guess - width, width
        while shot(lo).nodes > m:
            hi, step = lo, 2.0 * step
            lo = lo - step
            if step > 1e4:
                raise NoConvergence("cannot bracket mu from below")
    for _ in range(200):
        if hi - lo < 1e-6 * max(1.0, abs(lo)):
            break
        mid = 0.5 * (lo + hi)
        if shot(mid).nodes <= m:
            lo = mid
        else:
            hi = mid
    r_lo, r_hi = shot(lo).mismatch, shot(hi).mismatch
    if r_lo * r_hi > 0:
        mu = lo if abs(r_lo) < abs(r_hi) else hi
    else:
        mu = brentq(lambda v: shot(v).mismatch, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
    return mu, shot(mu)


def _cut_index(shot):
    """Node where the trusted shot ends and the WKB tail takes over.

    Past the minimum of |psi| the round-off driven growing solution dominates;
    at the minimum it is still as large as the decaying one. Backing off to
    where |psi| is 100 times that floor leaves a contamination of ~1e-4.
    """
    psi = np.abs(shot.y[:, 0])
    peak = np.max(psi)
    last_big = np.nonzero(psi > 1e-3 * peak)[0][-1]
    i_min = last_big + int(np.argmin(psi[last_big:]))
    floor = psi[i_min]
    if floor == 0.0:
        return i_min
    above = np.nonzero(psi[:i_min + 1] >= 100.0 * floor)[0]
    return int(above[-1]) if above.size else i_min


def _tail_norm(pot, mu, x_c, psi_c):
    """int_{x_c}^inf psi^2 for the WKB continuation psi_c sqrt(k_c/k) exp(-int k)."""
    kappa = lambda t: np.sqrt(np.maximum(-q_squared(pot, mu, t), 1e-300))
    k_c = float(kappa(x_c))
    x = x_c + np.linspace(0.0, 25.0 / k_c, 4001)
    k = kappa(x)
    phase = np.concatenate([[0.0], np.cumsum(0.5 * (k[1:] + k[:-1]) * np.diff(x))])
    dens = (k_c / k) * np.exp(-2.0 * phase)
    return psi_c * psi_c * float(np.trapezoid(dens, x))


def _half_norm(shot, pot, mu):
    cut = _cut_index(shot)
    return shot.y[cut, 2] + _tail_norm(pot, mu, shot.x[cut], shot.y[cut, 0])


def _sample(shot, scale, odd, pot, mu, x):
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    cut = _cut_index(shot)
    xs, ys, fs = shot.x[:cut + 1], shot.y[:cut + 1], shot.f[:cut + 1]
    spline = CubicHermiteSpline(xs, ys[:, 0], ys[:, 1])
    out = np.empty_like(ax)
    inside = ax <= xs[-1]
    out[inside] = spline(ax[inside])
    if np.any(~inside):
        x_c, psi_c = xs[-1], ys[-1, 0]
        outside = ax[~inside]
        out[~inside] = psi_c * _wkb_decay(pot, mu, x_c, outside)
    out *= scale
    if odd:
        out = np.where(x < 0, -out, out)
    return float(out) if out.ndim == 0 else out


def _wkb_decay(pot, mu, x_c, x):
    """kappa^(-1/2) exp(-int kappa) continuation ratio from x_c to x > x_c."""
    kappa = lambda t: np.sqrt(np.maximum(-q_squared(pot, mu, t), 1e-300))
    order = np.argsort(x)
    xx = x[order]
    grid = np.concatenate([[x_c], xx])
    # trapezoid on a fine sub-grid between consecutive points
    total = np.zeros(len(xx))
    acc = 0.0
    for i in range(len(xx)):
        u = np.linspace(grid[i], grid[i + 1], 9)
        acc += np.trapezoid(kappa(u), u)
        total[i] = acc
    ratio = np.sqrt(kappa(x_c) / kappa(xx)) * np.exp(-total)
    out = np.empty_like(x)
    out[order] = ratio
    return out


def _default_grid(x_max, dx):
    m = int(math.ceil(x_max / dx))
    half = np.linspace(0.0, m * dx, m + 1)
    return np.concatenate([-half[:0:-1], half])


def solve_eigenstate_exact(pot, g, n, tol=None, config=None, x_grid=None, mu_guess=None):
    """Numerically exact n-th parity eigenstate of the trap at nonlinearity g."""
    cfg = config or DEFAULT
    tol = cfg.exact_tol if tol is None else tol
    if pot.kind not in ("wedge", "harmonic"):
        raise ValueError("exact eigenstates are defined for wedge and harmonic traps")
    if n < 0:
        raise ValueError("n must be nonnegative")
    from .quantize import linear_mu   # seed only; the shooting does not use the semiclassics
    mu0 = linear_mu(pot, n) if mu_guess is None else mu_guess
    mu_lin, s_lin = _mu_at_amplitude(pot, 0.0, 1.0, n, mu0 if g == 0 else linear_mu(pot, n),
                                     tol, cfg)
    amp_lin = 1.0 / math.sqrt(2.0 * _half_norm(s_lin, pot, mu_lin))
    if g == 0:
        return _package(pot, 0.0, n, mu_lin, s_lin, amp_lin, cfg, x_grid)

    cache = {}

    def log_norm(log_amp):
        amp = math.exp(log_amp)
        guess = cache.get("mu", mu0)
        mu, s = _mu_at_amplitude(pot, g, amp, n, guess, tol, cfg)
        cache["mu"] = mu
        cache[log_amp] = (mu, s)
        return math.log(2.0 * _half_norm(s, pot, mu))

    a = math.log(amp_lin)
    fa = log_norm(a)
    step = -0.3 if fa > 0 else 0.3
    b, fb = a + step, log_norm(a + step)
    while fa * fb > 0:
        a, fa = b, fb
        b = b + step
        fb = log_norm(b)
        if abs(b) > 50:
            raise NoConvergence("cannot bracket the amplitude for unit norm")
    root = brentq(log_norm, min(a, b), max(a, b), xtol=1e-14, rtol=1e-14)
    if root not in cache:
        log_norm(root)
    mu, shot = cache[root]
    return _package(pot, g, n, mu, shot, 1.0, cfg, x_grid)


def _package(pot, g, n, mu, shot, scale, cfg, x_grid):
    trusted = zero_count(shot.y[1:_cut_index(shot) + 1, 0])
    if trusted != n // 2:
        raise WrongNodeCount(f"shot has {trusted} nodes on x > 0, expected {n // 2}")
    # sign convention shared with the semiclassical states: psi > 0 in the right tail
    if shot.y[_cut_index(shot), 0] < 0:
        scale = -scale
    x_max = float(shot.x[-1])
    grid = _default_grid(x_max, cfg.output_dx) if x_grid is None else np.asarray(x_grid, float)
    psi = _sample(shot, scale, n % 2, pot, mu, grid)
    norm = 2.0 * scale ** 2 * _half_norm(shot, pot, mu)
    state = ExactEigenstate(n, mu, g, grid, psi, abs(shot.mismatch), abs(norm - 1.0), x_max,
                            shot, scale, pot)
    if zero_count(psi) != n:
        raise WrongNodeCount(f"sampled state has {zero_count(psi)} zeros, expected {n}")
    return state


@dataclass(eq=False)
class ExactSoliton:
    mu: float
    w: float
    g_eff: float
    x_grid: np.ndarray
    psi: np.ndarray
    decay_residual: float
    x_max: float
    _shot: _Shot = field(default=None, repr=False)
    _scale: float = 1.0

    def sample(self, x):
        return _sample(self._shot, self._scale, 0, Potential.cosine(-abs(self.w)), self.mu, x)

    def trajectory(self):
        """Integrator nodes on x >= 0 up to the tail cut: (x, psi, dpsi), normalised."""
        return _trajectory(self._shot, self._scale)

    def __iter__(self):
        # unpacks as (g_eff, x_grid, psi)
        return iter((self.g_eff, self.x_grid, self.psi))


def _first_event(s):
    """(+1, x) if psi turns back up while positive, (-1, x) if it crosses zero, (0, x_end) otherwise."""
    psi, dpsi = s.y[1:, 0], s.y[1:, 1]
    up = np.flatnonzero((dpsi > 0.0) & (psi > 0.0))
    neg = np.flatnonzero(psi < 0.0)
    i_up = up[0] if up.size else psi.size
    i_neg = neg[0] if neg.size else psi.size
    if i_up == i_neg == psi.size:
        return 0, s.x[-1]
    if i_up < i_neg:
        return 1, s.x[1 + i_up]
    return -1, s.x[1 + i_neg]


def solve_soliton_exact(w, mu, tol=None, config=None, x_grid=None):
    """Even bright soliton of psi'' + 2(mu - w cos x) psi - 2 g psi^3 = 0 centred at x = 0.

    Shoots psi(0) with g = -1, then rescales to unit norm: g_eff = -norm.
    For w > 0 the origin is moved to the lattice minimum at x = pi, which
    amounts to replacing w by -|w|. ``decay_residual`` is |psi| at the end of
    the trusted shot relative to the peak.
    """
    cfg = config or DEFAULT
    tol = cfg.exact_tol if tol is None else tol
    if not mu < -abs(w):
        raise ForbiddenWindow(f"need mu < -|w| (mu={mu}, w={w})")
    pot = Potential.cosine(-abs(w))
    x_max = _x_max(pot, mu, cfg)

    def shot(amp):
        return _shoot(pot, mu, -1.0, amp, False, x_max, tol)

    # free soliton amplitude sqrt(-2 mu) as the first guess; classify each shot by
    # its first event: turning back upward (too small) or crossing zero (too large)
    guess = math.sqrt(-2.0 * mu)
    lo, hi = 0.5 * guess, 2.0 * guess
    while _first_event(shot(lo))[0] < 0:
        lo *= 0.5
    while _first_event(shot(hi))[0] > 0:
        hi *= 2.0
        if hi > 1e6:
            raise NoConvergence("cannot bracket the soliton amplitude")
    best, best_x = None, -1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        s = shot(mid)
        side, x_event = _first_event(s)
        if side == 0:
            # no event inside the window: the tail log-derivative still tells the sides apart
            side = 1 if s.mismatch > 0 else -1
            x_event = s.x[-1] + abs(s.mismatch) ** -1
        if x_event > best_x:
            best, best_x = mid, x_event
        if side > 0:
            lo = mid
        else:
            hi = mid
    amp = best
    s = shot(amp)
    norm = 2.0 * _half_norm(s, pot, mu)
    scale = 1.0 / math.sqrt(norm)
    grid = _default_grid(x_max, cfg.output_dx) if x_grid is None else np.asarray(x_grid, float)
    psi = _sample(s, scale, 0, pot, mu, grid)
    tail = abs(s.y[_cut_index(s), 0]) / amp
    return ExactSoliton(mu, w, -norm, grid, psi, tail, x_max, s, scale)
