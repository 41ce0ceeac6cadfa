"""Trap potentials, q^2(x) = 2 (mu - V(x)), turning points and action integrals."""

import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _ode
from .errors import ConfigError, NoTurningPoint, SignChange

_KINDS = ("wedge", "harmonic", "cosine", "free")


@dataclass(frozen=True)
class Potential:
    kind: str
    param: float = 0.0   # F for the wedge, w for the cosine lattice

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown potential {self.kind!r}")
        if self.kind == "wedge" and self.param <= 0:
            raise ValueError("wedge needs F > 0")

    @classmethod
    def wedge(cls, F=1.0):
        return cls("wedge", float(F))

    @classmethod
    def harmonic(cls):
        return cls("harmonic")

    @classmethod
    def cosine(cls, w):
        return cls("cosine", float(w))

    @classmethod
    def free(cls):
        return cls("free")

    @classmethod
    def parse(cls, text):
        """Parse ``wedge:F=1``, ``harmonic``, ``cosine:w=-0.2`` or ``free``."""
        m = re.fullmatch(r"\s*(\w+)\s*(?::\s*(\w+)\s*=\s*([-+0-9.eE]+))?\s*", text)
        if not m:
            raise ConfigError(f"cannot parse potential {text!r}")
        kind, key, value = m.groups()
        expected = {"wedge": "F", "cosine": "w"}.get(kind)
        try:
            if kind in ("harmonic", "free"):
                if key is not None:
                    raise ConfigError(f"{kind} takes no parameter")
                return cls(kind)
            if expected is None:
                raise ConfigError(f"unknown potential {kind!r}")
            if key is None:
                return cls(kind, 1.0) if kind == "wedge" else cls(kind, 0.0)
            if key != expected:
                raise ConfigError(f"{kind} expects parameter {expected}")
            return cls(kind, float(value))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def spec(self):
        if self.kind == "wedge":
            return f"wedge:F={self.param:g}"
        if self.kind == "cosine":
            return f"cosine:w={self.param:g}"
        return self.kind

    @property
    def code(self):
        return {"wedge": _ode.WEDGE, "harmonic": _ode.HARMONIC,
                "cosine": _ode.COSINE, "free": _ode.FREE}[self.kind]

    def V(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "wedge":
            v = self.param * np.abs(x)
        elif self.kind == "harmonic":
            v = 0.5 * x * x
        elif self.kind == "cosine":
            v = self.param * np.cos(x)
        else:
            v = np.zeros_like(x)
        return float(v) if v.ndim == 0 else v

    def dV(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "wedge":
            d = self.param * np.sign(x)
        elif self.kind == "harmonic":
            d = x.copy()
        elif self.kind == "cosine":
            d = -self.param * np.sin(x)
        else:
            d = np.zeros_like(x)
        return float(d) if d.ndim == 0 else d


def q_squared(pot, mu, x):
    q2 = 2.0 * (mu - np.asarray(pot.V(x)))
    return float(q2) if np.ndim(q2) == 0 else q2


def turning_point(pot, mu):
    """Positive root of V(x) = mu for the wedge and harmonic traps."""
    if pot.kind not in ("wedge", "harmonic"):
        raise NoTurningPoint(f"{pot.kind} potential has no single turning point")
    if mu <= 0:
        raise NoTurningPoint(f"mu={mu} <= 0 lies below the trap minimum")
    if pot.kind == "wedge":
        return mu / pot.param
    return math.sqrt(2.0 * mu)


@lru_cache(maxsize=None)
def _gauss(n):
    return np.polynomial.legendre.leggauss(n)


def _panel_quad(fun, a, b, n=48, width=1.0):
    """Composite Gauss-Legendre on [a, b], panels no wider than ``width``."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    npan = max(1, int(math.ceil(np.max(np.abs(b - a)) / width)))
    nodes, weights = _gauss(n)
    total = np.zeros(np.broadcast(a, b).shape)
    for j in range(npan):
        lo = a + (b - a) * j / npan
        hi = a + (b - a) * (j + 1) / npan
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        u = mid[..., None] + half[..., None] * nodes
        total += half * np.sum(weights * fun(u), axis=-1)
    return total


def action_from_turning_point(pot, mu, x):
    """Integral of sqrt|q^2| between the turning point and each x (nonnegative).

    The substitution x = x_t -/+ u^2 removes the square-root endpoint behaviour.
    """
    xt = turning_point(pot, mu)
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    sgn = np.where(flat < xt, -1.0, 1.0)[:, None]
    umax = np.sqrt(np.abs(flat - xt))

    def integrand(u):
        return 2.0 * u * np.sqrt(np.abs(q_squared(pot, mu, xt + sgn * u * u)))

    out = _panel_quad(integrand, np.zeros_like(umax), umax).reshape(x.shape)
    return float(out) if out.ndim == 0 else out


def action_integral(pot, mu, x_a, x_b):
    """Integral of sqrt|q^2(x)| over [x_a, x_b], which must not straddle a turning point."""
    if not x_a < x_b:
        raise ValueError("need x_a < x_b")
    try:
        xt = turning_point(pot, mu)
    except NoTurningPoint:
        xt = None
    if xt is not None and x_a >= 0:
        if x_a < xt < x_b and not (math.isclose(x_a, xt) or math.isclose(x_b, xt)):
            raise SignChange(f"turning point {xt:.6g} inside [{x_a}, {x_b}]")
        sa, sb = action_from_turning_point(pot, mu, np.array([x_a, x_b]))
        return float(abs(sa - sb))
    xs = np.linspace(x_a, x_b, 257)
    q2 = q_squared(pot, mu, xs)
    if np.any(q2 > 0) and np.any(q2 < 0):
        raise SignChange("q^2 changes sign inside the interval")
    return float(_panel_quad(lambda u: np.sqrt(np.abs(q_squared(pot, mu, u))), x_a, x_b)[0])
