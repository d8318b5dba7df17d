import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact.arith import RealCharacter, gaussian_dedekind_spec, sieve, zeta_spec
from artifact.errors import DomainError
from artifact.remainder import (
    TruncationPolicy, character_sums, decomposition_report, error_term, f_series, g_series,
    jump_identity_residual, riesz_direct, riesz_mean, riesz_piecewise, saw_tooth, volterra_residual,
)

ZETA = zeta_spec()
GAUSS = gaussian_dedekind_spec(1 / math.pi)
CHI5 = RealCharacter(5)
SIX_PI2 = 6 / math.pi**2


def test_error_term_examples():
    assert error_term(ZETA, 1) == pytest.approx(1 - 3 / math.pi**2, abs=1e-7)
    assert error_term(ZETA, 0.5) == pytest.approx(-3 / math.pi**2 * 0.25, abs=1e-7)
    assert sum(sieve(10).totient[1:11]) == 32
    assert error_term(ZETA, 10) == pytest.approx(32 - 300 / math.pi**2, abs=1e-6)


def test_f_series_examples():
    assert f_series(ZETA, 0) == 0
    assert f_series(ZETA, 1) == pytest.approx(1 - SIX_PI2, abs=1e-7)
    assert f_series(ZETA, 2.5) == pytest.approx(-2.5 * SIX_PI2 + 2 - 0.5, abs=1e-7)


def test_g_series_examples():
    assert g_series(ZETA, 0).value == 0
    g = g_series(ZETA, 1, policy=TruncationPolicy(N_terms=1))
    assert g.value == pytest.approx(SIX_PI2 - 1, abs=1e-7)


@pytest.mark.parametrize("x", [0.7, 3.3, 17.25, 99.5])
def test_g_tail_closure_matches_extended_sum(x):
    short = g_series(ZETA, x).value
    long = g_series(ZETA, x, policy=TruncationPolicy(N_terms=10**6)).value
    assert abs(short - long) <= 1e-9


def test_g_bound_only_reports_closure_size():
    g = g_series(ZETA, 50.0, policy=TruncationPolicy(N_terms=100, tail_mode="bound-only"))
    full = g_series(ZETA, 50.0)
    assert abs(g.value - full.value) <= g.bound + 1e-12
    assert g.bound > 0 and g.meets_tolerance == (g.bound <= g.target_tol)


def test_exact_closure_rejects_short_truncation():
    with pytest.raises(DomainError):
        f_series(ZETA, 10.5, policy=TruncationPolicy(N_terms=5))


@pytest.mark.parametrize("x, want", [(3, 0.0), (0.25, 0.25), (0.75, -0.25), (-0.25, -0.25)])
def test_saw_tooth(x, want):
    assert saw_tooth(x) == pytest.approx(want)


def test_character_at_zero():
    S1, _ = character_sums(CHI5)
    assert f_series(CHI5, 0) == pytest.approx(S1 / 2)
    assert g_series(CHI5, 0).value == 0


def test_character_sums_against_direct_series():
    import mpmath as mp
    L1 = sum(CHI5(r) * -mp.digamma(mp.mpf(r) / 5) for r in range(1, 5)) / 5
    L2 = sum(CHI5(r) * mp.zeta(2, mp.mpf(r) / 5) for r in range(1, 5)) / 25
    S1, S2 = character_sums(CHI5)
    assert S1 == pytest.approx(float(1 / L1), rel=1e-12)
    assert S2 == pytest.approx(float(1 / L2), rel=1e-12)


@pytest.mark.parametrize("x", [3.7, 4.0, 10.0, 250.5])
def test_twisted_decomposition(x):
    assert decomposition_report(CHI5, x).residual <= 1e-8


@pytest.mark.parametrize("x", [7.3, 100.0, 1.0, 9999.99])
def test_zeta_decomposition(x):
    r = decomposition_report(ZETA, x)
    assert r.residual <= 1e-8
    assert r.constant == 0.5 and r.variant == "zeta"


def test_gaussian_decomposition():
    r = decomposition_report(GAUSS, 50.0)
    assert r.variant == "F" and r.constant == 0.0
    assert r.residual <= 1e-6


@settings(max_examples=40, deadline=None)
@given(st.floats(1.0, 2000.0, allow_nan=False))
def test_decomposition_residual_property(x):
    assert decomposition_report(ZETA, x).residual <= 1e-8


def test_decomposition_domain():
    with pytest.raises(DomainError):
        decomposition_report(ZETA, 0.5)
    with pytest.raises(DomainError):
        decomposition_report(GAUSS, 3.0, variant="zeta")


@pytest.mark.parametrize("target", [ZETA, CHI5], ids=["zeta", "chi5"])
@pytest.mark.parametrize("A", [0, 1, -2.5 + 1j])
def test_volterra_family(target, A):
    assert volterra_residual(target, 0.0, A).residual == 0
    for x in (0.5, 1.0, 25.5, 100.0):
        assert volterra_residual(target, x, A).residual <= 1e-9


@pytest.mark.parametrize("target", [ZETA, GAUSS, CHI5], ids=["zeta", "gauss", "chi5"])
def test_jump_identity(target):
    for N in range(1, 101):
        assert jump_identity_residual(target, N) <= 1e-12


def test_riesz_short_range():
    C = 3 / math.pi**2
    for x in (0.3, 0.9):
        r = riesz_mean(ZETA, 1, x)
        assert r.way1 == pytest.approx(-C * x**2 / 2, abs=1e-7)
        assert r.difference <= 1e-12


def test_riesz_k1_at_twenty():
    phi = sieve(20).totient
    explicit = sum(int(phi[n]) * math.log(20 / n) for n in range(1, 21)) - 3 / (2 * math.pi**2) * 400
    r = riesz_mean(ZETA, 1, 20.0)
    assert r.difference <= 1e-9
    assert r.way1 == pytest.approx(explicit, abs=1e-6)


def test_riesz_k2_by_composition():
    """The second mean is the first one integrated against dt/t."""
    x = 20.0
    C = float(riesz_direct(ZETA, 1, 0.5) / -(0.5**2 / 2))
    total = -C / 4  # the t < 1 piece
    nodes, weights = np.polynomial.legendre.leggauss(12)
    for m in range(1, 20):
        t = m + (nodes + 1) / 2
        vals = [float(riesz_direct(ZETA, 1, float(u))) / u for u in t]
        total += 0.5 * float(np.dot(weights, vals))
    assert abs(float(riesz_direct(ZETA, 2, x)) - total) <= 1e-7
    assert abs(float(riesz_piecewise(ZETA, 2, x)) - total) <= 1e-7


@pytest.mark.parametrize("spec", [ZETA, GAUSS], ids=["zeta", "gauss"])
def test_riesz_ways_agree(spec):
    for x in np.linspace(1.0, 500.0, 20):
        for k in (1, 2):
            assert riesz_mean(spec, k, float(x)).difference <= 1e-9


def test_riesz_rejects_order():
    with pytest.raises(DomainError):
        riesz_direct(ZETA, 3, 10.0)
