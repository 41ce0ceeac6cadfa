"""Reference values computed independently of the package.

Nothing here imports ``pnlse``: Airy values come from Maclaurin series in
extended precision, arg Gamma from the product-limit definition, and ODE
residuals from re-integrating between stored nodes with classical RK4.
"""

import math

import mpmath as mp
import numpy as np

_DPS = 90


def _airy_pair(y):
    """(Ai(y), Ai'(y)) summed from the Maclaurin series at 90 digits."""
    with mp.workdps(_DPS):
        y = mp.mpf(y)
        c1 = 1 / (mp.power(3, mp.mpf(2) / 3) * mp.gamma(mp.mpf(2) / 3))
        c2 = 1 / (mp.power(3, mp.mpf(1) / 3) * mp.gamma(mp.mpf(1) / 3))
        y3 = y ** 3
        # f = sum y^(3k)/(3k)! prod(3j+1), g = sum y^(3k+1)/(3k+1)! prod(3j+2)
        f_term, g_term = mp.mpf(1), y
        f, g = f_term, g_term
        df, dg = mp.mpf(0), mp.mpf(1)
        k = 0
        while True:
            k += 1
            f_term = f_term * y3 / ((3 * k - 1) * (3 * k))
            g_term = g_term * y3 / ((3 * k) * (3 * k + 1))
            f += f_term
            g += g_term
            df += f_term * 3 * k / y if y != 0 else 0
            dg += g_term * (3 * k + 1) / y if y != 0 else 0
            if abs(f_term) + abs(g_term) < mp.mpf(10) ** (-_DPS + 5) * (abs(f) + abs(g)) and k > 5:
                break
        return c1 * f - c2 * g, c1 * df - c2 * dg


def airy_ai(y):
    return float(_airy_pair(y)[0])


def airy_ai_prime(y):
    return float(_airy_pair(y)[1])


def _bisect(fn, a, b, tol=1e-13):
    fa = fn(a)
    for _ in range(200):
        m = 0.5 * (a + b)
        fm = fn(m)
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
        if b - a < tol:
            break
    return 0.5 * (a + b)


def airy_zeros(count, derivative=False):
    """First ``count`` zeros of Ai (or Ai') on the negative axis, by scan + bisection."""
    fn = airy_ai_prime if derivative else airy_ai
    zeros, y, step = [], 0.0, 0.05
    prev = fn(y)
    while len(zeros) < count:
        nxt = fn(y - step)
        if (nxt > 0) != (prev > 0):
            zeros.append(_bisect(fn, y - step, y))
        y -= step
        prev = nxt
    return np.array(zeros)


def linear_wedge_mu(n, F=1.0):
    """g = 0 wedge spectrum: even n from zeros of Ai', odd n from zeros of Ai."""
    j = n // 2 + 1
    if n % 2 == 0:
        a = airy_zeros(j, derivative=True)[-1]
    else:
        a = airy_zeros(j)[-1]
    return -a * F ** (2.0 / 3.0) / 2.0 ** (1.0 / 3.0)


def _arg_gamma_product(t, n):
    # Gamma(z) = lim n^z n! / (z (z+1) ... (z+n)), z = 1 - i t; each arg(z+j) is principal
    j = np.arange(n + 1, dtype=float)
    args = np.arctan2(-t, 1.0 + j)
    return -t * math.log(n) - math.fsum(args)


def arg_gamma_one_minus_it(t):
    """arg Gamma(1 - i t), product limit with two Richardson steps, wrapped to (-pi, pi]."""
    n = 1 << 18
    a1, a2, a4 = (_arg_gamma_product(t, m) for m in (n, 2 * n, 4 * n))
    r1 = 2 * a2 - a1
    r2 = 2 * a4 - a2
    val = (4 * r2 - r1) / 3
    return math.remainder(val, 2 * math.pi) if abs(val) > math.pi else val


def connection_constants(k, sigma):
    """d^2 and theta re-evaluated with mpmath at 40 digits."""
    with mp.workdps(40):
        k = mp.mpf(k)
        d2 = -(sigma / mp.pi) * mp.log(1 - sigma * k ** 2)
        arg = mp.im(mp.loggamma(1 - 0.5j * d2))
        theta = mp.mpf(1.5) * sigma * d2 * mp.log(2) + sigma * arg - mp.pi / 4
        return float(d2), float(theta)


def airy_tail_integral(y0):
    """int_{y0}^inf Ai^2 by mpmath quadrature."""
    with mp.workdps(30):
        return float(mp.quad(lambda t: mp.airyai(t) ** 2, [y0, y0 + 5, mp.inf]))


def rk4_node_residual(rhs, t, Y, substeps=64):
    """Max relative mismatch after re-integrating each stored step with RK4.

    ``rhs(t, y)`` returns the derivative of the state vector ``y``. Returns the
    largest |Y_rk4(t_{i+1}) - Y[i+1]| divided by the scale max|Y| + 1.
    """
    scale = np.max(np.abs(Y)) + 1.0
    worst = 0.0
    for i in range(len(t) - 1):
        h = (t[i + 1] - t[i]) / substeps
        y = np.array(Y[i], dtype=float)
        s = t[i]
        for _ in range(substeps):
            k1 = rhs(s, y)
            k2 = rhs(s + h / 2, y + h / 2 * k1)
            k3 = rhs(s + h / 2, y + h / 2 * k2)
            k4 = rhs(s + h, y + h * k3)
            y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            s += h
        worst = max(worst, float(np.max(np.abs(y - Y[i + 1]))) / scale)
    return worst


def thomas_fermi_mu(g):
    """Harmonic-trap Thomas-Fermi chemical potential 1/2 (3g/2)^(2/3)."""
    return 0.5 * (1.5 * g) ** (2.0 / 3.0)


def sech_norm(nu, g):
    """int (2 nu/g) sech^2(sqrt(-2 nu) y) dy = -2 sqrt(-2 nu)/g in closed form."""
    return -2.0 * math.sqrt(-2.0 * nu) / g


def golden_min(fn, a, b, tol=1e-12):
    """Golden-section minimiser (independent of scipy)."""
    r = (math.sqrt(5) - 1) / 2
    c, d = b - r * (b - a), a + r * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol * (1 + abs(a) + abs(b)):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - r * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + r * (b - a)
            fd = fn(d)
    return 0.5 * (a + b)
