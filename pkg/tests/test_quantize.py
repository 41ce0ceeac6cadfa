import math

import mpmath as mp
import numpy as np
import pytest
from scipy.integrate import simpson
from hypothesis import given, settings, strategies as st

from pnlse.errors import NoRoot
from pnlse.exact import solve_eigenstate_exact, zero_count
from pnlse.potentials import Potential
from pnlse.quantize import (assemble_wavefunction, g_of_mu, linear_mu, mapped_residual,
                            solve_k, solve_mu_for_g, wedge_residual)

HARM = Potential.harmonic()
WEDGE = Potential.wedge(1.0)


def _theta_mp(k, sigma):
    d2 = -(sigma / mp.pi) * mp.log(1 - sigma * mp.mpf(k) ** 2)
    return d2, mp.mpf(1.5) * sigma * d2 * mp.log(2) + sigma * mp.im(mp.loggamma(1 - 0.5j * d2)) - mp.pi / 4


def test_wedge_residual_linear_limit():
    for n in range(5):
        mu = 1.7 + n
        expected = (2 * mu) ** 1.5 / 3 + math.pi / 4 - (n + 1) * math.pi / 2
        assert wedge_residual(mu, 1e-12, 1.0, 1, n) == pytest.approx(expected, abs=1e-12)
    mu0 = 0.5 * (3 * math.pi / 4) ** (2 / 3)
    assert mu0 == pytest.approx(0.8853, abs=1e-4)
    assert abs(wedge_residual(mu0, 1e-12, 1.0, -1, 0)) < 1e-12
    assert linear_mu(WEDGE, 0) == pytest.approx(mu0, rel=1e-14)


def test_wedge_residual_extended_precision():
    with mp.workdps(40):
        mu, F, n = mp.mpf(5), mp.mpf(1), 6
        d2, theta = _theta_mp(0.5, 1)
        ref = (2 * mu) ** 1.5 / (3 * F) - mp.mpf(0.75) * d2 * mp.log(mp.cbrt(2) * mu / F ** (mp.mpf(2) / 3)) \
            - theta - (n + 1) * mp.pi / 2
    assert wedge_residual(5.0, 0.5, 1.0, 1, 6) == pytest.approx(float(ref), abs=1e-12)


def test_mapped_residual_extended_precision():
    with mp.workdps(40):
        mu, n = mp.mpf("10.5"), 10
        y0 = (3 * mp.pi * mu / 4) ** (mp.mpf(2) / 3)
        d2, theta = _theta_mp(0.3, 1)
        ref = mp.mpf(2) / 3 * y0 ** 1.5 - mp.mpf(0.75) * d2 * mp.log(y0) - theta - (n + 1) * mp.pi / 2
    assert mapped_residual(10.5, 0.3, HARM, 1, 10) == pytest.approx(float(ref), abs=1e-10)


@given(st.floats(0.3, 20.0), st.floats(0.01, 0.99), st.sampled_from([1, -1]), st.integers(0, 12))
@settings(max_examples=40, deadline=None)
def test_wedge_mapped_equivalence(mu, k, sigma, n):
    assert mapped_residual(mu, k, WEDGE, sigma, n) == pytest.approx(
        wedge_residual(mu, k, 1.0, sigma, n), abs=1e-12)


@pytest.mark.parametrize("n", [0, 3, 10])
def test_harmonic_linear_condition_gives_n_plus_half(n):
    assert abs(mapped_residual(n + 0.5, 1e-12, HARM, 1, n)) < 1e-12


def test_solve_k_continuation_from_linear_limit():
    deltas = (1e-6, 1e-4, 1e-3, 1e-2, 1e-1)
    ks = [solve_k(10.5 + d, HARM, 1, 10) for d in deltas]
    assert all(k > 0 for k in ks)
    assert np.all(np.diff(ks) > 0)
    assert ks[0] < 2e-3
    # near the linear point d^2 ~ k^2 / pi is linear in the shift, so k^2 / delta levels off
    ratios = [k * k / d for k, d in zip(ks[:3], deltas[:3])]
    assert max(ratios) / min(ratios) < 1.05
    for k, d in zip(ks, deltas):
        assert abs(mapped_residual(10.5 + d, k, HARM, 1, 10)) <= 1e-10


def test_solve_k_rejects_wrong_side():
    with pytest.raises(NoRoot):
        solve_k(10.4, HARM, 1, 10)


def test_g_of_mu_limits_and_monotonicity():
    g, k = g_of_mu(10.5 + 1e-6, HARM, 1, 10)
    assert k < 1e-2 and 0 < g < 1e-3
    gs = [g_of_mu(mu, HARM, 1, 10)[0] for mu in np.linspace(10.55, 11.5, 6)]
    assert np.all(np.diff(gs) > 0)
    gw = [g_of_mu(mu, WEDGE, 1, 6)[0] for mu in np.linspace(linear_mu(WEDGE, 6) + 0.05, 6.0, 6)]
    assert np.all(np.diff(gw) > 0)


def test_wedge_g5_n6_forward_check():
    sc = solve_mu_for_g(5.0, WEDGE, 6)
    g, _ = g_of_mu(sc.mu, WEDGE, 1, 6)
    assert g == pytest.approx(5.0, abs=1e-8)
    ex = solve_eigenstate_exact(WEDGE, g, 6)
    assert abs(ex.mu - sc.mu) <= 0.01


def test_linear_limit_returns_linear_state():
    r = solve_mu_for_g(0.0, HARM, 4)
    assert r.mu == 4.5 and r.g == 0.0
    assert zero_count(r.psi) == 4


def test_harmonic_linear_limit_all_n():
    for n in range(31):
        assert abs(solve_mu_for_g(0.0, HARM, n).mu - (n + 0.5)) <= 1e-9


@pytest.mark.parametrize("pot", [HARM, WEDGE], ids=["harmonic", "wedge"])
@pytest.mark.parametrize("n", [6, 10])
def test_mu_monotone_in_g(pot, n):
    mus = [solve_mu_for_g(g, pot, n).mu for g in np.arange(-10, 10.5, 1.0)]
    assert np.all(np.diff(mus) > 0)


@pytest.mark.parametrize("pot", [HARM, WEDGE], ids=["harmonic", "wedge"])
@pytest.mark.parametrize("g", [1.0, 5.0, 10.0, -5.0])
def test_state_invariants(pot, g):
    for n in range(4, 21):
        r = solve_mu_for_g(g, pot, n)
        d = r.diagnostics
        x, psi = r.x_grid, r.psi
        assert abs(r.g - g) <= 1e-9 * max(1, abs(g))
        assert d["quantization_residual"] <= 1e-10
        # integrate the right half with the one-sided value at x = 0 (odd states
        # carry a small jump there), then double by parity
        right = x >= 0
        half = psi[right].copy()
        half[0] = d["psi0_right"]
        assert abs(2 * simpson(half ** 2, x=x[right]) - 1) <= 1e-6
        assert d["norm_error"] <= 1e-6
        assert np.array_equal(psi[::-1], (-1) ** n * psi)
        if n % 2:
            assert psi[len(x) // 2] == 0.0
        if not d["flagged"]:
            assert zero_count(psi) == n


def test_small_odd_states_are_flagged_when_node_count_breaks():
    # the asymptotic quantization leaves phi(y0) != 0 for odd n; with a large
    # gap the mirrored state picks up two extra sign changes and must be flagged
    r = solve_mu_for_g(5.0, WEDGE, 3)
    assert r.diagnostics["zero_count"] in (3, 5)
    assert r.diagnostics["flagged"] == (r.diagnostics["zero_count"] != 3)
    assert r.diagnostics["parity_gap"] > 0


def test_validity_flag():
    r = solve_mu_for_g(1.0, HARM, 0)
    assert r.diagnostics["asymptotic_validity"] == pytest.approx(abs(r.diagnostics["y0"]))
    low = solve_mu_for_g(0.0, WEDGE, 0)
    assert abs(low.diagnostics["y0"]) < 2 and low.diagnostics["flagged"]


def test_assemble_matches_solver_state():
    r = solve_mu_for_g(10.0, HARM, 10)
    x, psi = assemble_wavefunction(r.mu, r.k, HARM, 1, _a_of(r), n=10)
    assert np.allclose(x, r.x_grid)
    assert np.allclose(psi, r.psi, atol=1e-12)
    x2, psi2 = assemble_wavefunction(r.mu, r.k, HARM, 1, _a_of(r))
    assert zero_count(psi2) == 10


def _a_of(r):
    from pnlse.quantize import semiclassical_state
    return semiclassical_state(r.mu, HARM, 1, r.n).a
