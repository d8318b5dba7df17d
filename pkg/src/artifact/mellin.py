"""Mellin transform of the analytic part, the Perron kernel and Riesz-mean contour integrals."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .arith import EulerProductSpec, coefficient_table, primes_up_to
from .errors import DomainError, TruncationError
from .lfunc import F_eval, zeta_cx
from .quad import arc_rule, gauss_legendre, panel_nodes, segment_rule
from .remainder import LD, _stream, mean_constant, riesz_mean

ALPHA_SERIES_TERMS = 10**6
H_PRIME_LIMIT = 10**5


@dataclass(frozen=True)
class MellinCheck:
    s: complex
    X_cut: float
    lhs: complex
    rhs: complex
    tail_bound: float
    growth_constant: float  # measured max |E_AN(x)| / x on [1, X_cut]

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def relative_residual(self) -> float:
        return self.residual / abs(self.rhs)


@dataclass(frozen=True)
class ContourResidual:
    x: float
    k: int
    contour_value: complex
    reference: float
    height: float

    @property
    def residual(self) -> float:
        return abs(self.contour_value - self.reference)


# --- left side ------------------------------------------------------------------

def analytic_part_pieces(spec: EulerProductSpec, X: int):
    """(A_m, B_m, C) with E_AN(x) = A_m - B_m x + C x^2 on [m, m+1).

    A_m = sum_{n<=m} phi(n, F) and B_m = sum_{n<=m} a(n)/n [m/n] = sum_{j<=m} b(j)/j.
    """
    lim = 1 << max(4, X.bit_length())
    st = _stream(spec, lim)
    j = np.arange(1, X + 1, dtype=LD)
    A = st.A[1:X + 1]
    B = np.cumsum(st.b[1:X + 1] / j)
    return A, B, st.two_alpha / 2


def mellin_lhs(spec: EulerProductSpec, s: complex, X_cut: int = 10**5, order: int = 8):
    """int_1^X E_AN(x) x^{-s-1} dx panel by panel, plus a tail bound.

    Returns (value, tail_bound, c) where c = max |E_AN| / x on the sampled panels.
    """
    s = complex(s)
    if s.real <= 2:
        raise DomainError("the Mellin identity needs Re s > 2")
    X = int(X_cut)
    A, B, C = analytic_part_pieces(spec, X)
    u, w = gauss_legendre(order)
    m = np.arange(1, X, dtype=np.float64)[:, None]
    x = m + (u + 1) / 2
    EAN = (A[:-1, None] - B[:-1, None] * x.astype(LD) + C * x.astype(LD) ** 2).astype(complex)
    kern = np.exp(-(s + 1) * np.log(x))
    vals = (EAN * kern) @ (w / 2)
    value = complex(math.fsum(vals.real) + 1j * math.fsum(vals.imag))
    c = float(np.max(np.abs(EAN) / x))
    tail = c * X ** (1 - s.real) / (s.real - 1)
    return value, tail, c


# --- right side -----------------------------------------------------------------

@functools.lru_cache(maxsize=8)
def _alpha_series_data(spec: EulerProductSpec, N: int):
    tab = coefficient_table(spec, N)
    a = tab.alpha[1:N + 1]
    logn = np.log(np.arange(1, N + 1, dtype=float))
    half = np.abs(a[N // 2:])
    return a, logn, float(np.mean(half))


def alpha_series(spec: EulerProductSpec, s: complex, N: int = ALPHA_SERIES_TERMS) -> tuple[complex, float]:
    """sum_{n<=N} alpha(n) n^-s with a tail estimate from the mean size of |alpha| near N."""
    s = complex(s)
    if s.real <= 1:
        raise DomainError("the alpha series is used only for Re s > 1")
    a, logn, mean_abs = _alpha_series_data(spec, N)
    terms = a * np.exp(-s * logn)
    val = complex(math.fsum(terms.real) + 1j * math.fsum(terms.imag))
    tail = 10 * mean_abs * N ** (1 - s.real) / (s.real - 1)
    return val, tail


def mellin_rhs(spec: EulerProductSpec, s: complex, N: int = ALPHA_SERIES_TERMS) -> tuple[complex, float]:
    """C(F)/(s-2) + zeta(s-1)/(s(1-s)) sum alpha(n) n^-s, with the series tail bound carried."""
    s = complex(s)
    if s.real <= 2:
        raise DomainError("the Mellin identity needs Re s > 2")
    C = mean_constant(spec).value
    ser, tail = alpha_series(spec, s, N)
    pref = zeta_cx(s - 1) / (s * (1 - s))
    return C / (s - 2) + pref * ser, abs(pref) * tail + mean_constant(spec).bound / abs(s - 2)


def mellin_check(spec: EulerProductSpec, s: complex, X_cut: int = 10**5, tol: float | None = None) -> MellinCheck:
    lhs, tail, c = mellin_lhs(spec, s, X_cut)
    if tol is not None and tail > tol:
        raise TruncationError(f"tail bound {tail:.3g} above tolerance; raise X_cut", tail)
    rhs, rtail = mellin_rhs(spec, s)
    return MellinCheck(s=complex(s), X_cut=X_cut, lhs=lhs, rhs=rhs, tail_bound=tail + rtail, growth_constant=c)


# --- Perron kernel ----------------------------------------------------------------

@dataclass(frozen=True)
class PerronResult:
    value: float
    limit: float
    error_estimate: float


def perron_kernel(a: float, c: float, T: float, width: float = 0.5, order: int = 16) -> PerronResult:
    """(1/2 pi i) int_{c-iT}^{c+iT} a^z / z dz, folded onto [0, T] by conjugate symmetry."""
    if not a > 0 or not c > 0:
        raise DomainError("need a > 0 and c > 0")
    t, w = panel_nodes(0.0, T, width, order)
    z = c + 1j * t
    val = float(np.dot(w, (np.exp(z * math.log(a)) / z).real) / math.pi)
    limit = 1.0 if a > 1 else (0.5 if a == 1 else 0.0)
    if a == 1:
        err = c / (math.pi * T)
    else:
        err = a**c / (math.pi * T * abs(math.log(a)))
    return PerronResult(val, limit, err)


# --- Riesz means on the keyhole contour ---------------------------------------------

def _prime_cut(sigma: float, P: int) -> int:
    """The omitted factors are 1 + O(p^{-2 sigma}); small primes suffice well inside Re s > 1."""
    if sigma >= 2.5:
        return min(P, 200)
    if sigma >= 1.5:
        return min(P, 2000)
    return P


def euler_factor_correction(spec: EulerProductSpec, s: np.ndarray, P: int = H_PRIME_LIMIT) -> np.ndarray:
    """H(s) = F(s) sum alpha(n) n^-s as prod_p F_p(s)(1 - gamma(p) p^-s), truncated at P.

    Identically 1 when every local factor has degree one.
    """
    s = np.asarray(s, dtype=complex)
    if spec.degree == 1:
        return np.ones(s.shape, dtype=complex)
    ps = primes_up_to(P)
    R = spec.roots_at(ps)
    pf = ps.astype(float)
    gam = pf * (1 - np.prod(1 - R / pf[:, None], axis=1))
    lp = np.log(pf)
    flat = s.ravel()
    res = np.empty(flat.shape, dtype=complex)
    order = np.argsort(-flat.real, kind="stable")
    for i in range(0, flat.size, 256):
        idx = order[i:i + 256]
        blk = flat[idx]
        npr = np.searchsorted(ps, _prime_cut(float(blk.real.min()), P), side="right")
        ps_ = np.exp(-np.outer(lp[:npr], blk))  # p^-s
        loc = np.prod(1 - R[:npr, :, None] * ps_[:, None, :], axis=1)
        res[idx] = np.exp(np.sum(np.log((1 - gam[:npr, None] * ps_) / loc), axis=0))
    return res.reshape(s.shape)


def alpha_over_F(spec: EulerProductSpec, s: np.ndarray) -> np.ndarray:
    """sum alpha(n) n^-s continued to Re s >= 1 as H(s)/F(s)."""
    return euler_factor_correction(spec, s) / np.asarray(F_eval(spec, s))


def keyhole_rule(height: float, width: float = 1.0, order: int = 20):
    """The path Re s = 3 from 3 - iT to 3 - 2i, the left half circle |s - 3| = 2, then up to 3 + iT."""
    lo = segment_rule(3 - 1j * height, 3 - 2j, width, order)
    arc = arc_rule(3.0, 2.0, 1.5 * math.pi, 0.5 * math.pi, 0.25, order)
    hi = segment_rule(3 + 2j, 3 + 1j * height, width, order)
    return (np.concatenate([lo[0], arc[0], hi[0]]), np.concatenate([lo[1], arc[1], hi[1]]))


def riesz_contour_integral(spec: EulerProductSpec, k: int, x: float, height: float = 1500.0) -> complex:
    """(1/2 pi i) int zeta(s-1) H(s)/F(s) x^s / s^(k+1) ds over the keyhole path."""
    if k not in (1, 2):
        raise DomainError("k must be 1 or 2")
    s, ds = keyhole_rule(height)
    f = np.asarray(zeta_cx(s - 1)) * alpha_over_F(spec, s) * np.exp(s * math.log(x)) / s ** (k + 1)
    return complex(np.dot(ds, f) / (2j * math.pi))


def riesz_contour_check(spec: EulerProductSpec, k: int, x: float, height: float = 1500.0) -> ContourResidual:
    if x < 1 or float(x).is_integer():
        raise DomainError("use a non-integer x >= 1")
    val = riesz_contour_integral(spec, k, x, height)
    ref = riesz_mean(spec, k, x).way2
    return ContourResidual(x=x, k=k, contour_value=val, reference=ref, height=height)
