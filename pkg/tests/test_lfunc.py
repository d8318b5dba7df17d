import cmath
import math

import mpmath as mp
import numpy as np
import pytest

from artifact.arith import RealCharacter, coefficient_table, gaussian_dedekind_spec, zeta_spec
from artifact.errors import DomainError, UnsupportedSpecError, ZeroFileError
from artifact.lfunc import (
    GROUPING_DELTA, EvalConfig, F_eval, F_prime_at, check_grouping_height, dirichlet_L, grouping_heights,
    hurwitz_zeta, load_zeros, packaged_zeros, parse_zeros, zeros_for_spec, zeta_cx,
)
from artifact.special import gamma_cx

ZETA = zeta_spec()
GAUSS = gaussian_dedekind_spec(1 / math.pi)
CHI5 = RealCharacter(5)
CHIM4 = RealCharacter(-4)


def test_zeta_examples():
    assert complex(zeta_cx(2)) == pytest.approx(math.pi**2 / 6, rel=1e-13)
    assert complex(zeta_cx(0)) == pytest.approx(-0.5, rel=1e-13)
    first = packaged_zeros("zeta").ordinates[0]
    assert abs(complex(zeta_cx(0.5 + 1j * first))) <= 1e-6


def test_zeta_functional_equation_in_strip():
    rng = np.random.default_rng(5)
    for _ in range(20):
        s = complex(rng.uniform(0.05, 0.95), rng.uniform(-40, 40))
        refl = 2**s * math.pi ** (s - 1) * cmath.sin(math.pi * s / 2) * complex(gamma_cx(1 - s)) * complex(zeta_cx(1 - s))
        assert abs(complex(zeta_cx(s)) - refl) <= 1e-9 * abs(refl)


@pytest.mark.parametrize("s", [0.5 + 3j, -2.5 + 1j, 1.5 - 20j, 3.0, 0.25])
def test_zeta_against_mpmath(s):
    assert complex(zeta_cx(s)) == pytest.approx(complex(mp.zeta(s)), rel=1e-12)


def test_hurwitz_against_mpmath():
    for s, a in ((2.0, 0.2), (0.5 + 2j, 0.75), (3 - 1j, 1.0)):
        assert complex(hurwitz_zeta(s, a)) == pytest.approx(complex(mp.zeta(s, a)), rel=1e-12)


def test_dirichlet_examples():
    assert complex(dirichlet_L(1.0, CHIM4)) == pytest.approx(math.pi / 4, rel=1e-13)
    L2 = complex(dirichlet_L(2.0, CHI5)).real
    n = np.arange(1, 10**6 + 1, dtype=float)
    direct = math.fsum(CHI5.values(n.astype(np.int64)) / n**2)
    assert abs(L2 - direct) <= 1e-9 + 1 / 10**6  # series tail below 1/N
    hurwitz = float(sum(CHI5(r) * mp.zeta(2, mp.mpf(r) / 5) for r in range(1, 5)) / 25)
    assert L2 == pytest.approx(hurwitz, rel=1e-13)


def test_dirichlet_at_half_against_oracle():
    oracle = float(sum(CHI5(r) * mp.zeta(0.5, mp.mpf(r) / 5) for r in range(1, 5)) / mp.sqrt(5))
    assert abs(complex(dirichlet_L(0.5, CHI5)).real - oracle) <= 1e-8


def test_F_eval_examples():
    catalan = float(mp.catalan)
    assert complex(F_eval(GAUSS, 2.0)) == pytest.approx(math.pi**2 / 6 * catalan, rel=1e-12)
    N = 10**5
    tab = coefficient_table(GAUSS, N)
    n = np.arange(1, N + 1, dtype=float)
    series = math.fsum(tab.aF[1:N + 1].real / n**3)
    assert abs(complex(F_eval(GAUSS, 3.0)) - series) <= 1e-9


def test_F_eval_requires_factors():
    from artifact.arith import EulerProductSpec
    bare = EulerProductSpec(name="bare", degree=1, local_roots=lambda p: [1.0])
    with pytest.raises(UnsupportedSpecError):
        F_eval(bare, 2.0)


def test_F_prime_step_halving():
    zs = packaged_zeros("zeta").ordinates[:50]
    rho = 0.5 + 1j * zs
    d1 = np.asarray(F_prime_at(ZETA, rho))
    d2 = np.asarray(F_prime_at(ZETA, rho, EvalConfig(h=0.5e-5)))
    assert np.max(np.abs(d1 - d2) / np.abs(d1)) <= 1e-6
    assert complex(d1[0]) == pytest.approx(complex(mp.zeta(rho[0], derivative=1)), rel=1e-6)


def test_union_spec_vanishes_at_both_tables():
    for label in ("zeta", "L_chi-4"):
        o = packaged_zeros(label).ordinates[:20]
        assert np.max(np.abs(np.asarray(F_eval(GAUSS, 0.5 + 1j * o)))) <= 1e-5


def test_packaged_tables_against_mpmath():
    z = packaged_zeros("zeta").ordinates
    for n in (1, 2, 10, 100):
        assert z[n - 1] == pytest.approx(float(mp.zetazero(n).imag), abs=1e-9)
    first = packaged_zeros("L_chi-4").ordinates[0]
    assert abs(complex(dirichlet_L(0.5 + 1j * first, CHIM4))) <= 1e-9


def test_zero_file_parsing(tmp_path):
    p = tmp_path / "z.txt"
    p.write_text("14.134725\n21.022040\n")
    t = load_zeros(p)
    assert t.count == 2
    assert grouping_heights(t, 25) == pytest.approx([(14.134725 + 21.022040) / 2, 21.022040 + GROUPING_DELTA])
    bad = tmp_path / "bad.txt"
    bad.write_text("14.134725\n21.022040\nabc\n")
    with pytest.raises(ZeroFileError) as exc:
        load_zeros(bad)
    assert exc.value.line == 3
    with pytest.raises(ZeroFileError):
        load_zeros(tmp_path / "missing.txt")


def test_zero_file_sanity_gates():
    with pytest.raises(ZeroFileError):
        parse_zeros("21.0\n14.1\n")
    with pytest.raises(ZeroFileError):
        parse_zeros("# label: zeta\n6.0209\n")
    assert parse_zeros("# label: L_chi-4\n6.0209\n").label == "L_chi-4"


def test_grouping_height_checks():
    t = packaged_zeros("zeta")
    with pytest.raises(DomainError):
        check_grouping_height(t, t.ordinates[3] + 1e-5)
    with pytest.raises(DomainError):
        check_grouping_height(t, t.ordinates[-1] + 5)
    check_grouping_height(t, (t.ordinates[3] + t.ordinates[4]) / 2)


def test_union_table_is_sorted_merge():
    u = zeros_for_spec(GAUSS)
    z, c = packaged_zeros("zeta").ordinates, packaged_zeros("L_chi-4").ordinates
    top = min(z[-1], c[-1])
    assert u.count == np.sum(z <= top) + np.sum(c <= top)
    assert np.all(np.diff(u.ordinates) > 0)
