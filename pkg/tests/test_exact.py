import math

import numpy as np
import pytest
from scipy.integrate import simpson

import oracles
from pnlse.errors import ForbiddenWindow
from pnlse.exact import solve_eigenstate_exact, solve_soliton_exact, zero_count
from pnlse.potentials import Potential

HARM = Potential.harmonic()
WEDGE = Potential.wedge(1.0)


def test_zero_count_examples():
    assert zero_count(np.array([1.0, -1.0, 2.0, -0.5])) == 3
    assert zero_count(np.array([0.1, 0.5, 3.0])) == 0
    # samples below the amplitude threshold do not create sign changes
    assert zero_count(np.array([1.0, 1e-12, -1e-12, 1.0])) == 0
    assert zero_count(np.array([1.0, 0.0, -1.0])) == 1


def test_harmonic_linear():
    e = solve_eigenstate_exact(HARM, 0.0, 3)
    assert e.mu == pytest.approx(3.5, abs=1e-8)


@pytest.mark.parametrize("n", [0, 1, 2, 5, 10])
def test_wedge_linear_against_airy_zeros(n):
    e = solve_eigenstate_exact(WEDGE, 0.0, n)
    assert e.mu == pytest.approx(oracles.linear_wedge_mu(n), abs=1e-7)
    if n == 0:
        assert e.mu == pytest.approx(0.808617, abs=1e-6)


def test_thomas_fermi_ground_state():
    e = solve_eigenstate_exact(HARM, 10.0, 0)
    tf = oracles.thomas_fermi_mu(10.0)
    assert tf == pytest.approx(3.041, abs=1e-3)
    assert abs(e.mu - tf) / tf <= 0.05


def _rhs(pot, mu, g):
    return lambda x, u: np.array([u[1], -2 * (mu - pot.V(x)) * u[0] + 2 * g * u[0] ** 3])


@pytest.mark.parametrize("pot,g,n", [(HARM, 10.0, 10), (HARM, -5.0, 3), (WEDGE, 5.0, 6),
                                     (WEDGE, -3.0, 1), (HARM, 30.0, 0)])
def test_state_invariants(pot, g, n):
    e = solve_eigenstate_exact(pot, g, n)
    x, psi = e.x_grid, e.psi
    assert zero_count(psi) == n
    assert np.allclose(psi[::-1], (-1) ** n * psi, rtol=0, atol=1e-14)
    assert e.norm_error <= 1e-8
    right = x >= 0
    assert 2 * simpson(psi[right] ** 2, x=x[right]) == pytest.approx(1.0, abs=1e-6)
    # decaying tail: tiny and moving toward zero
    xs, ps, dps = e.trajectory()
    assert abs(ps[-1]) <= 1e-2 * np.max(np.abs(ps))
    assert np.all(np.abs(psi[-5:]) < 1e-3 * np.max(np.abs(psi)))
    assert ps[-1] * dps[-1] < 0
    # ODE residual by re-integrating every stored step
    Y = np.column_stack([ps, dps])
    scale = np.max(np.abs(Y)) + 1
    assert oracles.rk4_node_residual(_rhs(pot, e.mu, g), xs, Y, substeps=32) <= 100 * 1e-12 * scale * 10


def test_first_order_perturbation_slope():
    lin = solve_eigenstate_exact(HARM, 0.0, 10)
    x = np.linspace(-12, 12, 24001)
    slope = simpson(lin.sample(x) ** 4, x=x)
    g = 1e-3
    up = solve_eigenstate_exact(HARM, g, 10).mu
    down = solve_eigenstate_exact(HARM, -g, 10).mu
    assert (up - down) / (2 * g) == pytest.approx(slope, rel=1e-4)


def test_mu_continuous_and_increasing_in_g():
    mus = [solve_eigenstate_exact(HARM, g, 2).mu for g in np.arange(0.0, 5.01, 0.5)]
    assert np.all(np.diff(mus) > 0)
    assert np.max(np.diff(mus)) < 0.2


def test_free_soliton_recovered():
    s = solve_soliton_exact(0.0, -1.0)
    assert s.g_eff == pytest.approx(-math.sqrt(8.0), rel=1e-8)
    x = s.x_grid
    ref = (2 * -1.0 / s.g_eff) ** 0.5 / np.cosh(math.sqrt(2.0) * x)
    assert np.max(np.abs(s.psi - ref)) <= 1e-7


def test_lattice_soliton_shape():
    g_eff, x, psi = solve_soliton_exact(-0.2, -1.0)
    assert g_eff < 0
    assert np.allclose(psi, psi[::-1], rtol=0, atol=1e-14)
    right = x >= 0
    assert np.all(np.diff(psi[right]) <= 0)
    assert np.all(psi > 0)
    assert simpson(psi ** 2, x=x) == pytest.approx(1.0, abs=1e-6)


def test_lattice_soliton_tail_rate():
    w, mu = -0.2, -1.0
    s = solve_soliton_exact(w, mu)
    lo, hi = math.sqrt(-2 * (mu + abs(w))), math.sqrt(-2 * (mu - abs(w)))
    x0 = 3.0
    # mean decay rate over one lattice period
    rate = -(math.log(s.sample(x0 + 2 * math.pi)) - math.log(s.sample(x0))) / (2 * math.pi)
    assert lo <= rate <= hi


def test_lattice_soliton_residual():
    s = solve_soliton_exact(-0.2, -1.0)
    xs, ps, dps = s.trajectory()
    pot = Potential.cosine(-0.2)
    Y = np.column_stack([ps, dps])
    assert oracles.rk4_node_residual(_rhs(pot, -1.0, s.g_eff), xs, Y, substeps=32) <= 1e-9


def test_positive_w_is_shifted_lattice():
    a = solve_soliton_exact(0.3, -1.5)
    b = solve_soliton_exact(-0.3, -1.5)
    assert a.g_eff == b.g_eff
    assert np.array_equal(a.psi, b.psi)


def test_forbidden_window():
    with pytest.raises(ForbiddenWindow):
        solve_soliton_exact(-0.2, -0.1)
    with pytest.raises(ForbiddenWindow):
        solve_soliton_exact(0.2, 0.1)
