"""Compiled Dormand-Prince 5(4) integrator for the two second-order ODEs used here.

State layout is ``(u, u', accumulator)``; the accumulator integrates ``u**2``
so norms come out of the same adaptive step control as the solution.
"""

import numpy as np
from numba import njit

PAINLEVE = 0
NLSE = 1

OK = 0
BLOWUP = 1
MAXSTEPS = 2
UNDERFLOW = 3

# potential codes for the NLSE model
WEDGE = 0
HARMONIC = 1
COSINE = 2
FREE = 3

# Dormand-Prince tableau
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0,
                                49.0 / 176.0, -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                                -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)


@njit(cache=True)
def potential_value(code, param, x):
    if code == WEDGE:
        return param * abs(x)
    if code == HARMONIC:
        return 0.5 * x * x
    if code == COSINE:
        return param * np.cos(x)
    return 0.0


@njit(cache=True)
def _rhs(model, p, t, y, out):
    if model == PAINLEVE:
        out[0] = y[1]
        out[1] = 2.0 * p[0] * y[0] ** 3 + t * y[0]
        out[2] = -y[0] * y[0]
    else:
        q2 = 2.0 * (p[2] - potential_value(int(p[0]), p[1], t))
        out[0] = y[1]
        out[1] = -q2 * y[0] + 2.0 * p[3] * y[0] ** 3
        out[2] = y[0] * y[0]


@njit(cache=True)
def integrate(model, p, t0, y0, t1, rtol, atol, h_max, blowup, max_steps):
    """Integrate from ``t0`` to ``t1`` (either direction).

    Returns ``(t, Y, F, status)`` with ``F`` the right-hand side at every
    accepted node, so callers can build Hermite interpolants.
    """
    n = 3
    direction = 1.0 if t1 >= t0 else -1.0
    span = abs(t1 - t0)
    ts = np.empty(max_steps + 1)
    ys = np.empty((max_steps + 1, n))
    fs = np.empty((max_steps + 1, n))
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    k5 = np.empty(n)
    k6 = np.empty(n)
    k7 = np.empty(n)
    ytmp = np.empty(n)
    ynew = np.empty(n)
    y = y0.copy()
    t = t0
    _rhs(model, p, t, y, k1)
    ts[0] = t
    ys[0, :] = y
    fs[0, :] = k1
    count = 1
    status = OK
    h = min(h_max, 1e-3 * max(span, 1.0), span)
    while direction * (t1 - t) > 1e-14 * max(1.0, abs(t1)):
        if count > max_steps:
            status = MAXSTEPS
            break
        if h > abs(t1 - t):
            h = abs(t1 - t)
        if h < 1e-14 * max(1.0, abs(t)):
            status = UNDERFLOW
            break
        hs = direction * h
        for i in range(n):
            ytmp[i] = y[i] + hs * _A21 * k1[i]
        _rhs(model, p, t + _C2 * hs, ytmp, k2)
        for i in range(n):
            ytmp[i] = y[i] + hs * (_A31 * k1[i] + _A32 * k2[i])
        _rhs(model, p, t + _C3 * hs, ytmp, k3)
        for i in range(n):
            ytmp[i] = y[i] + hs * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i])
        _rhs(model, p, t + _C4 * hs, ytmp, k4)
        for i in range(n):
            ytmp[i] = y[i] + hs * (_A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i] + _A54 * k4[i])
        _rhs(model, p, t + _C5 * hs, ytmp, k5)
        for i in range(n):
            ytmp[i] = y[i] + hs * (_A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i]
                                   + _A64 * k4[i] + _A65 * k5[i])
        _rhs(model, p, t + hs, ytmp, k6)
        for i in range(n):
            ynew[i] = y[i] + hs * (_B1 * k1[i] + _B3 * k3[i] + _B4 * k4[i]
                                   + _B5 * k5[i] + _B6 * k6[i])
        _rhs(model, p, t + hs, ynew, k7)
        err = 0.0
        for i in range(n):
            e = hs * (_E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i] + _E5 * k5[i]
                      + _E6 * k6[i] + _E7 * k7[i])
            sc = atol + rtol * max(abs(y[i]), abs(ynew[i]))
            r = abs(e) / sc
            if r > err:
                err = r
        if err != err:
            # NaN: shrink hard and retry
            h *= 0.1
            continue
        if err <= 1.0:
            t = t + hs
            for i in range(n):
                y[i] = ynew[i]
                k1[i] = k7[i]
            ts[count] = t
            ys[count, :] = y
            fs[count, :] = k1
            count += 1
            if abs(y[0]) > blowup:
                status = BLOWUP
                break
            fac = 5.0 if err == 0.0 else min(5.0, 0.9 * err ** -0.2)
        else:
            fac = max(0.2, 0.9 * err ** -0.2)
        h = min(h * fac, h_max)
    return ts[:count].copy(), ys[:count].copy(), fs[:count].copy(), status
