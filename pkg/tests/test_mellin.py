import math

import mpmath as mp
import pytest

from artifact.arith import RealCharacter, dirichlet_spec, gaussian_dedekind_spec, zeta_spec
from artifact.errors import DomainError
from artifact.mellin import mellin_check, mellin_lhs, mellin_rhs, perron_kernel, riesz_contour_check
from artifact.remainder import mean_constant

ZETA = zeta_spec()
CHI5 = dirichlet_spec(RealCharacter(5))
GAUSS = gaussian_dedekind_spec(1 / math.pi)


def test_zeta_examples():
    assert mellin_check(ZETA, 3.0).relative_residual <= 1e-4
    assert mellin_check(ZETA, 2.5 + 1j).relative_residual <= 1e-3


def test_rhs_value_at_three():
    want = float(3 / mp.pi**2 - mp.zeta(2) / (6 * mp.zeta(3)))
    assert complex(mellin_rhs(ZETA, 3.0)[0]) == pytest.approx(want, abs=1e-9)
    assert want == pytest.approx(0.0758914, abs=1e-7)


def test_rhs_regular_at_two():
    """The C/(s-2) term is cancelled by the pole of zeta(s-1) against sum alpha(n)/n^2 = 2C."""
    C = mean_constant(ZETA).value.real
    vals = [complex(mellin_rhs(ZETA, 2 + e)[0]).real for e in (1e-2, 1e-3, 1e-4)]
    assert C / 1e-4 > 1e3
    assert max(abs(v) for v in vals) < 1
    assert abs(vals[2] - vals[1]) < abs(vals[1] - vals[0])


def test_character_case():
    assert mellin_check(CHI5, 3.0).relative_residual <= 1e-3
    assert mellin_check(CHI5, 2.5 + 1j).relative_residual <= 1e-3


@pytest.mark.parametrize("spec", [ZETA, CHI5, GAUSS], ids=["zeta", "chi5", "gauss"])
@pytest.mark.parametrize("s", [3.0, 2.5 + 1j, 4 - 2j])
def test_mellin_sweep(spec, s):
    r = mellin_check(spec, s)
    assert r.residual <= max(1e-4 * abs(r.rhs), r.tail_bound)


def test_doubling_cut_moves_lhs_within_tail():
    a = mellin_check(ZETA, 3.0, X_cut=50_000)
    b = mellin_check(ZETA, 3.0, X_cut=100_000)
    assert abs(a.lhs - b.lhs) <= a.tail_bound


@pytest.mark.parametrize("a, want", [(2.0, 1.0), (1.0, 0.5), (0.5, 0.0)])
def test_perron_kernel_values(a, want):
    r = perron_kernel(a, 1.0, 1e3)
    assert r.limit == want
    assert abs(r.value - want) <= 1e-3


def test_perron_rate():
    e1 = abs(perron_kernel(1.0, 1.0, 500.0).value - 0.5)
    e2 = abs(perron_kernel(1.0, 1.0, 1000.0).value - 0.5)
    assert 1.6 <= e1 / e2 <= 2.4


def test_perron_domain():
    with pytest.raises(DomainError):
        perron_kernel(-1.0, 1.0, 10.0)


@pytest.mark.parametrize("k, x, tol", [(1, 20.5, 1e-3), (2, 20.5, 1e-3), (1, 1.5, 1e-4)])
def test_riesz_contour(k, x, tol):
    assert riesz_contour_check(ZETA, k, x).residual <= tol
