import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact.errors import ContourError
from artifact.special import (
    ASYMPTOTIC_CASES, EULER_GAMMA, BarnesQuadrature, WhittakerParams, asymptotic_slope, asymptotic_small_z,
    barnes_integrand_bound, digamma_cx, gamma_cx, kummer_ode_residual, kummer_phi, loggamma_cx, rgamma_cx,
    route_agreement, route_grid, tricomi_psi, whittaker_W, whittaker_W_barnes,
)


def test_gamma_examples():
    assert complex(gamma_cx(5)) == pytest.approx(24, rel=1e-13)
    assert complex(digamma_cx(1)) == pytest.approx(-EULER_GAMMA, rel=1e-13)
    z = 0.3 + 0.2j
    assert complex(gamma_cx(z) * gamma_cx(1 - z)) == pytest.approx(math.pi / cmath.sin(math.pi * z), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.floats(-8, 8), st.floats(-30, 30))
def test_gamma_against_mpmath(x, y):
    z = complex(x, y)
    if abs(z - round(x)) < 1e-3 and round(x) <= 0:
        return
    want = complex(mp.loggamma(mp.mpc(x, y)))
    got = complex(loggamma_cx(z))
    # compare modulo 2 pi i: the branches of log Gamma may differ
    d = got - want
    assert abs(d.real) <= 1e-11 * max(1, abs(want))
    assert abs((d.imag + math.pi) % (2 * math.pi) - math.pi) <= 1e-11 * max(1, abs(want))
    assert complex(digamma_cx(z)) == pytest.approx(complex(mp.digamma(mp.mpc(x, y))), rel=1e-11, abs=1e-11)


def test_reciprocal_gamma_at_poles():
    for n in range(0, 6):
        assert complex(rgamma_cx(-n)) == 0


def test_kummer_examples():
    assert complex(kummer_phi(0.7, 1.3, 0)) == 1
    assert complex(kummer_phi(1, 1, 1)) == pytest.approx(math.e, rel=1e-14)
    assert kummer_ode_residual(0.7, 1.3, 0.5 + 0.5j) <= 1e-8


def test_kummer_ode_at_random_points():
    rng = np.random.default_rng(11)
    for _ in range(10):
        a = complex(*rng.uniform(-1, 1, 2))
        g = complex(rng.uniform(0.2, 1.5), rng.uniform(-1, 1))
        z = complex(*rng.uniform(-1, 1, 2))
        assert kummer_ode_residual(a, g, z) <= 1e-8


@pytest.mark.parametrize("a, g, z", [(0.3, 0.8, 2 + 1j), (-1.5, 2.5, -3 + 0.5j), (1 + 1j, 0.4 - 0.2j, 5.0)])
def test_kummer_against_mpmath(a, g, z):
    assert complex(kummer_phi(a, g, z)) == pytest.approx(complex(mp.hyp1f1(a, g, z)), rel=1e-12)


def test_tricomi_examples():
    for g, z in ((1.7, 0.4 + 1j), (3.0, 2.0), (0.2, 5j)):
        assert complex(tricomi_psi(0, g, z)) == pytest.approx(1, abs=1e-12)
    assert complex(tricomi_psi(0.5, 1.5, 1 + 1j)) == pytest.approx(complex(mp.hyperu(0.5, 1.5, 1 + 1j)), rel=1e-10)


@pytest.mark.parametrize("a, b, z", [(0.7, 2, 0.3 + 0.2j), (1.2, 1, 2.0), (0.4, 3, 1 - 1j), (-0.6, 0, 0.8j)])
def test_tricomi_integer_gamma_against_mpmath(a, b, z):
    assert complex(tricomi_psi(a, b, z)) == pytest.approx(complex(mp.hyperu(a, b, z)), rel=1e-11)


def test_tricomi_perturbed_mode_agrees_with_exact():
    exact = complex(tricomi_psi(0.7, 2, 0.5 + 0.5j))
    pert = complex(tricomi_psi(0.7, 2, 0.5 + 0.5j, integer_mode="perturbed"))
    assert pert == pytest.approx(exact, rel=1e-6)


def test_tricomi_small_z_leading_term():
    a = 0.7
    excess = []
    for r in (1e-3, 1e-4, 1e-5):
        z = r * cmath.exp(0.4j)
        excess.append(abs(complex(tricomi_psi(a, 2, z)) - 1 / (math.gamma(a) * z)) / abs(cmath.log(z)))
    # the excess over the leading pole is O(|log z|): the normalized excess stays bounded
    assert max(excess) / min(excess) < 2


def test_whittaker_closed_form_case():
    assert whittaker_W(WhittakerParams(1.0, 0.5, 2.0)) == pytest.approx(2 * math.exp(-1), rel=1e-13)


def test_whittaker_small_z_limit():
    w = whittaker_W(WhittakerParams(-1.5, 0.5, 1e-7))
    assert w == pytest.approx(4 / (3 * math.sqrt(math.pi)), abs=1e-5)


@pytest.mark.parametrize("k, mu, z", [(-1.5, 0.3, 0.8 * cmath.exp(0.25j * math.pi)), (-1.5, 0.0, 1.0),
                                      (-0.75, 0.5, 2 - 1j), (0.2, 0.25j, 0.5 + 0.1j)])
def test_whittaker_against_mpmath(k, mu, z):
    assert whittaker_W(WhittakerParams(k, mu, z)) == pytest.approx(complex(mp.whitw(k, mu, z)), rel=1e-11)


def test_barnes_examples():
    p = WhittakerParams(-1.5, 0.3, 0.8 * cmath.exp(0.25j * math.pi))
    assert abs(whittaker_W_barnes(p).value - whittaker_W(p)) <= 1e-8
    p = WhittakerParams(-1.5, 0.0, 1.0)
    assert abs(whittaker_W_barnes(p).value - whittaker_W(p)) <= 1e-8
    p = WhittakerParams(-1.5, 0.5 - 1e-4, 1.0)
    assert abs(whittaker_W_barnes(p).value - whittaker_W(p)) <= 1e-6


def test_barnes_excluded_parameters():
    with pytest.raises(ContourError):
        whittaker_W_barnes(WhittakerParams(0.25, 0.25, 1.0))


def test_barnes_line_choice_is_irrelevant():
    p = WhittakerParams(-0.75, 0.3, 1 + 1j)
    a = whittaker_W_barnes(p, BarnesQuadrature(c=-0.5)).value
    b = whittaker_W_barnes(p, BarnesQuadrature(c=0.6)).value
    assert abs(a - b) <= 1e-9


def test_barnes_integrand_bound_at_fifty():
    k, mu, z, c, T = -1.5, 0.3, 0.8 + 0.5j, -0.3, 50.0
    den = gamma_cx(0.5 - k - mu) * gamma_cx(0.5 - k + mu)
    for t in (T, -T):
        s = complex(c, t)
        val = gamma_cx(s) * gamma_cx(-s - k - mu + 0.5) * gamma_cx(-s - k + mu + 0.5) * z**s / den
        assert abs(complex(val)) <= barnes_integrand_bound(k, mu, z, c, T)


def test_route_grid_agreement():
    grid = route_grid()
    assert len(grid) == 27
    assert max(route_agreement(p).difference for p in grid) <= 1e-8


def test_asymptotic_mu_zero_example():
    z = 1e-3
    p = WhittakerParams(-1.5, 0.0, z)
    lead = -math.sqrt(z) / math.gamma(2) * (math.log(z) + complex(digamma_cx(2)).real + 2 * EULER_GAMMA)
    assert abs(whittaker_W(p) - lead) <= 10 * z**1.5 * abs(math.log(z))
    assert asymptotic_small_z(p).value == pytest.approx(lead, rel=1e-12)


def test_asymptotic_ratio_test_mu_03():
    ratios = []
    for r in (1e-2, 5e-3, 2.5e-3, 1.25e-3, 1e-4):
        z = r * cmath.exp(0.3j)
        a = asymptotic_small_z(WhittakerParams(-1.5, 0.3, z))
        ratios.append(abs(whittaker_W(WhittakerParams(-1.5, 0.3, z)) - a.value) / r**0.8)
    assert max(ratios) / min(ratios) < 3


def test_asymptotic_imaginary_mu_scaling():
    errs = []
    for r in (1e-2, 1e-3, 1e-4):
        z = r * cmath.exp(0.3j)
        p = WhittakerParams(-1.5, 0.25j, z)
        errs.append(abs(whittaker_W(p) - asymptotic_small_z(p).value))
    slope = np.polyfit(np.log([1e-2, 1e-3, 1e-4]), np.log(errs), 1)[0]
    assert slope >= 1.4


@pytest.mark.parametrize("mu", ASYMPTOTIC_CASES)
def test_asymptotic_slopes(mu):
    check = asymptotic_slope(-1.5, mu)
    assert check.passed, check


def test_asymptotic_cases_are_distinct():
    cases = {asymptotic_slope(-1.5, mu).case for mu in ASYMPTOTIC_CASES}
    assert len(cases) == 5


@settings(max_examples=30, deadline=None)
@given(st.floats(-2, 0.4), st.floats(0, 0.9), st.floats(0.05, 5), st.floats(-2.5, 2.5))
def test_whittaker_conjugation(k, mu, r, theta):
    z = r * cmath.exp(1j * theta)
    w = whittaker_W(WhittakerParams(k, mu, z))
    wc = whittaker_W(WhittakerParams(k, mu, z.conjugate()))
    assert abs(wc - w.conjugate()) <= 1e-12 * max(1, abs(w))


@pytest.mark.parametrize("k, mu, z", [(0.0, 1e-5, 1.0), (0.0, 1e-9, 1.0), (-1.5, 0.02 + 0.01j, 0.01),
                                      (-1.5, 0.5 + 1e-7, 1e-3 * cmath.exp(2j)), (0.2, 0.03, 5 - 2j)])
def test_whittaker_near_integer_gamma(k, mu, z):
    """2 mu + 1 close to an integer, where the two connection terms nearly cancel."""
    w = whittaker_W(WhittakerParams(k, mu, z))
    assert w == pytest.approx(complex(mp.whitw(k, mu, z)), rel=1e-12)
