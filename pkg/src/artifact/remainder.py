"""Error terms of totient-type sums and their arithmetic/analytic split.

Three variants share the machinery:

* ``"zeta"``  E(x) = x f(x) + g(x)/2 + 1/2 with g = sum mu(n) {x/n}^2,
* ``"F"``     E(x, F) = x f(x, F) + g(x, F)/2 with g carrying {x/n}^2 + [x/n],
* ``"chi"``   E_1(x, chi) = x f(x, chi) + g(x, chi)/2 with saw-tooth f and
  {x/d}({x/d} - 1) in g; E_1 takes the midpoint at integers.

Sums run in extended precision because E is a difference of quantities of
size x^2.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .arith import (C_of_F, ConstantEstimate, EulerProductSpec, RealCharacter,
                    coefficient_table, dirichlet_spec)
from .errors import DomainError
from .lfunc import dirichlet_L

LD = np.longdouble
CLD = np.clongdouble
VARIANTS = ("zeta", "F", "chi")
C_PRIME_LIMIT = 10**7


@dataclass(frozen=True)
class TruncationPolicy:
    N_terms: int | None = None  # None: ceil(x), the smallest exact choice
    target_tol: float = 1e-9
    tail_mode: str = "exact-closure"

    def __post_init__(self):
        if self.tail_mode not in ("exact-closure", "bound-only"):
            raise DomainError(f"unknown tail mode {self.tail_mode!r}")
        if self.N_terms is not None and self.N_terms < 1:
            raise DomainError("N_terms must be positive")
        if not self.target_tol > 0:
            raise DomainError("target_tol must be positive")

    def terms_for(self, x: float) -> int:
        need = max(1, math.ceil(x))
        if self.N_terms is None:
            return need
        if self.tail_mode == "exact-closure" and self.N_terms < need:
            raise DomainError(f"exact closure needs N_terms >= ceil(x) = {need}")
        return self.N_terms


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class SeriesValue:
    """A truncated series value with an absolute error bound."""

    value: float
    bound: float
    target_tol: float

    @property
    def meets_tolerance(self) -> bool:
        return self.bound <= self.target_tol

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class DecompositionReport:
    x: float
    variant: str
    E: float
    f: float
    g: float
    E_AR: float
    E_AN: float
    residual: float
    constant: float
    n_terms: int
    C_bound: float


@dataclass(frozen=True)
class VolterraReport:
    x: float
    A: complex
    lhs: complex
    rhs: complex
    residual: float


@dataclass(frozen=True)
class RieszReport:
    x: float
    k: int
    way1: float
    way2: float

    @property
    def difference(self) -> float:
        return abs(self.way1 - self.way2)


# --- shared data ---------------------------------------------------------------

@functools.lru_cache(maxsize=16)
def mean_constant(spec: EulerProductSpec, P: int = C_PRIME_LIMIT) -> ConstantEstimate:
    """C(F), in closed form for a single zeta or L factor, else the prime product."""
    if spec.factors == (("zeta",),):
        return ConstantEstimate(3 / math.pi**2, 0.0, 0)
    if len(spec.factors) == 1 and spec.factors[0][0] == "L":
        L2 = dirichlet_L(2.0, RealCharacter(spec.factors[0][1]))
        return ConstantEstimate(complex(0.5 / L2.real), 1e-14, 0)
    return C_of_F(spec, P)


@functools.lru_cache(maxsize=16)
def character_sums(chi: RealCharacter) -> tuple[float, float]:
    """S1 = sum mu chi(d)/d = 1/L(1, chi) and S2 = sum mu chi(d)/d^2 = 1/L(2, chi)."""
    L1 = dirichlet_L(1.0, chi).real
    L2 = dirichlet_L(2.0, chi).real
    return 1.0 / L1, 1.0 / L2


@dataclass
class _Stream:
    """Prefix data for one coefficient stream a(n) with b = a * Id."""

    a: np.ndarray  # a(n), extended precision, index 0 unused
    b: np.ndarray  # b(n) = phi(n, F)
    A: np.ndarray  # prefix sums of b
    inv_sq: np.ndarray  # prefix sums of a(n)/n^2
    inv: np.ndarray  # prefix sums of a(n)/n
    two_alpha: np.longdouble | np.clongdouble
    C_bound: float
    limit: int
    real: bool


def _dtype(real: bool):
    return LD if real else CLD


def _times_identity(a: np.ndarray) -> np.ndarray:
    """b = a * Id in extended precision, so b and a agree to the last bit."""
    N = len(a) - 1
    b = np.zeros_like(a)
    for d in range(1, N + 1):
        if a[d] != 0:
            b[d::d] += a[d] * np.arange(1, N // d + 1, dtype=LD)
    return b


@functools.lru_cache(maxsize=8)
def _stream(spec: EulerProductSpec, limit: int) -> _Stream:
    tab = coefficient_table(spec, limit)
    real = spec.real_coefficients
    dt = _dtype(real)
    # the cached table may be longer than asked for
    a = (tab.alpha.real if real else tab.alpha)[:limit + 1].astype(dt)
    if len(spec.factors) == 1:
        # a single zeta or L factor has alpha = mu chi in {-1, 0, 1}; drop the rounding noise
        a = np.round(a)
    b = _times_identity(a)
    n = np.arange(len(a), dtype=LD)
    n[0] = 1
    C = mean_constant(spec)
    return _Stream(
        a=a, b=b, A=np.cumsum(b), inv_sq=np.cumsum(a / n**2), inv=np.cumsum(a / n),
        two_alpha=LD(2 * C.value.real) if real else CLD(2 * C.value), C_bound=C.bound, limit=limit, real=real,
    )


def _stream_for(target, x: float, extra: int = 0) -> tuple[_Stream, str]:
    spec = dirichlet_spec(target) if isinstance(target, RealCharacter) else target
    need = max(16, math.ceil(x) + 1 + extra)
    # round up so that sweeps reuse one table
    lim = 1 << max(4, (need - 1).bit_length())
    return _stream(spec, lim), ("chi" if isinstance(target, RealCharacter) else None)


def _scalar(v, real: bool):
    return float(v) if real else complex(v)


def _floor_parts(x: float, n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """([x/n], {x/n}) with the remainder taken exactly by fmod."""
    xl = LD(x)
    r = np.fmod(xl, n)
    q = np.round((xl - r) / n)
    return q, r / n


def default_variant(target) -> str:
    if isinstance(target, RealCharacter):
        return "chi"
    return "zeta" if target.factors == (("zeta",),) else "F"


def _check_variant(target, variant: str | None) -> str:
    v = variant or default_variant(target)
    if v not in VARIANTS:
        raise DomainError(f"unknown variant {v!r}")
    if v == "chi" and not isinstance(target, RealCharacter):
        raise DomainError("the chi variant needs a RealCharacter")
    if v == "zeta" and not (isinstance(target, EulerProductSpec) and target.factors == (("zeta",),)):
        raise DomainError("the zeta variant is specific to the Riemann zeta spec")
    return v


# --- the building blocks ----------------------------------------------------------

def saw_tooth(x: float) -> float:
    fx = x - math.floor(x)
    return 0.0 if fx == 0 else 0.5 - fx


def _saw_tooth_array(frac: np.ndarray) -> np.ndarray:
    return np.where(frac == 0, LD(0), LD(0.5) - frac)


def error_term(target, x: float) -> float:
    """E(x, F) (right-continuous); for a character, E_1(x, chi) with midpoints."""
    if x < 0:
        raise DomainError("x must be nonnegative")
    st, _ = _stream_for(target, x)
    return _scalar(_error(st, x, isinstance(target, RealCharacter)), st.real)


def _error(st: _Stream, x: float, midpoint: bool):
    m = int(math.floor(x))
    A = st.A[m] if m >= 1 else LD(0)
    if midpoint and m >= 1 and x == m:
        A = A - st.b[m] / 2
    return A - st.two_alpha / 2 * LD(x) ** 2


def f_series(target, x: float, variant: str | None = None, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """f(x) = -sum a(n)/n {x/n}, evaluated as -2 alpha x + sum_{n<=x} a(n)/n [x/n].

    The chi variant uses the saw tooth, with tail closed through 1/L(1, chi)
    and 1/L(2, chi).
    """
    v = _check_variant(target, variant)
    if x < 0:
        raise DomainError("x must be nonnegative")
    N = policy.terms_for(x)
    st, _ = _stream_for(target, x, extra=N)
    return _scalar(_f(st, target, x, v, N), st.real)


def _f(st: _Stream, target, x: float, v: str, N: int):
    if v == "chi":
        S1, S2 = character_sums(target)
        if x == 0:
            # right limit: every {0+/n} term contributes its 1/2 a(n)/n
            return LD(S1) / 2
        n = np.arange(1, N + 1, dtype=LD)
        _, frac = _floor_parts(x, n)
        body = np.sum(st.a[1:N + 1] / n * _saw_tooth_array(frac))
        return body + (S1 - st.inv[N]) / 2 - LD(x) * (S2 - st.inv_sq[N])
    m = int(math.floor(x))
    if m == 0:
        return -st.two_alpha * LD(x)
    n = np.arange(1, m + 1, dtype=LD)
    q, _ = _floor_parts(x, n)
    return -st.two_alpha * LD(x) + np.sum(st.a[1:m + 1] / n * q)


def g_series(target, x: float, variant: str | None = None,
             policy: TruncationPolicy = DEFAULT_POLICY) -> SeriesValue:
    """g for the chosen variant with the n > N tail closed exactly.

    In bound-only mode the closure is not added; its size becomes the bound.
    """
    v = _check_variant(target, variant)
    if x < 0:
        raise DomainError("x must be nonnegative")
    N = policy.terms_for(x)
    st, _ = _stream_for(target, x, extra=N)
    body, closure, skipped = _g_parts(st, target, x, v, N)
    if policy.tail_mode == "exact-closure":
        bound = float(abs(x) ** 2 * 2 * st.C_bound) if v != "chi" else 0.0
        return SeriesValue(_scalar(body + closure, st.real), bound, policy.target_tol)
    return SeriesValue(_scalar(body, st.real), float(abs(closure) + skipped), policy.target_tol)


def _g_parts(st: _Stream, target, x: float, v: str, N: int):
    """(sum over n <= N, closed tail, bound on skipped terms x >= n > N)."""
    xl = LD(x)
    n = np.arange(1, N + 1, dtype=LD)
    q, frac = _floor_parts(x, n)
    a = st.a[1:N + 1]
    if v == "chi":
        S1, S2 = character_sums(target)
        body = np.sum(a * frac * (frac - 1))
        closure = xl**2 * (S2 - st.inv_sq[N]) - xl * (S1 - st.inv[N])
    else:
        terms = frac**2 if v == "zeta" else frac**2 + q
        body = np.sum(a * terms)
        closure = xl**2 * (st.two_alpha - st.inv_sq[N])
    skipped = 0.0
    if N < x:
        # terms N < n <= x are not of tail form; bound them directly
        k = np.arange(N + 1, int(math.floor(x)) + 1)
        skipped = float(np.sum(np.abs(st.a[k]) * (1 + x / k + x**2 / k**2)))
    return body, closure, skipped


def decomposition_report(target, x: float, variant: str | None = None,
                         policy: TruncationPolicy = DEFAULT_POLICY) -> DecompositionReport:
    """E next to x f + g/2 (+ 1/2 for the zeta variant)."""
    v = _check_variant(target, variant)
    if x < 1:
        raise DomainError("the decomposition is stated for x >= 1")
    N = policy.terms_for(x)
    st, _ = _stream_for(target, x, extra=N)
    E = _error(st, x, v == "chi")
    f = _f(st, target, x, v, N)
    body, closure, _ = _g_parts(st, target, x, v, N)
    g = body + closure
    const = 0.5 if v == "zeta" else 0.0
    E_AR = LD(x) * f
    E_AN = g / 2 + LD(const)
    res = E - E_AR - E_AN
    sc = functools.partial(_scalar, real=st.real)
    return DecompositionReport(
        x=x, variant=v, E=sc(E), f=sc(f), g=sc(g), E_AR=sc(E_AR), E_AN=sc(E_AN),
        residual=float(abs(res)), constant=const, n_terms=N, C_bound=float(st.C_bound),
    )


# --- Volterra equation ----------------------------------------------------------

def _floor_integral(y: np.ndarray) -> np.ndarray:
    """int_0^y [u] du."""
    q = np.floor(y)
    return q * (q - 1) / 2 + q * (y - q)


def f1_one_sided(target, N: int) -> tuple[complex, complex]:
    """(f_1(N - 0), f_1(N + 0)) at a positive integer N from the finite forms."""
    if N < 1 or int(N) != N:
        raise DomainError("N must be a positive integer")
    st, _ = _stream_for(target, N)
    n = np.arange(1, N + 1, dtype=np.int64)
    a = st.a[1:N + 1]
    nl = n.astype(LD)
    right = np.sum(a / nl * (N // n).astype(LD))
    left_q = -(-N // n) - 1  # ceil(N/n) - 1
    left = np.sum(a[:-1] / nl[:-1] * left_q[:-1].astype(LD))
    base = -st.two_alpha * LD(N)
    return complex(base + left), complex(base + right)


def jump_identity_residual(target, N: int) -> float:
    """|f_1(N+0) - f_1(N-0) - b(N)/N|."""
    lo, hi = f1_one_sided(target, N)
    st, _ = _stream_for(target, N)
    return abs(hi - lo - complex(st.b[N] / LD(N)))


def volterra_residual(target, x: float, A: complex = 0.0) -> VolterraReport:
    """F_1(x) - int_0^x F_1(t) dt/t against the error term, with F_1 = (f_1 + A) x.

    The integral of f_1 is taken exactly piecewise: [t/n] is constant between
    integers. For a character the saw-tooth f(., chi) = S1/2 + f_1 is used and
    the right side is E_1(x, chi).
    """
    if x < 0:
        raise DomainError("x must be nonnegative")
    chi = isinstance(target, RealCharacter)
    st, _ = _stream_for(target, x)
    xl = LD(x)
    A = complex(A)
    m = int(math.floor(x))
    if chi:
        S1, _ = character_sums(target)
        N = max(1, math.ceil(x))
        f_val = _f(st, target, x, "chi", N)
        shift = LD(S1) / 2
    else:
        f_val = _f(st, target, x, "F", 0)
        shift = LD(0)
    integral = shift * xl - st.two_alpha / 2 * xl**2
    if m >= 1:
        n = np.arange(1, m + 1, dtype=LD)
        integral = integral + np.sum(st.a[1:m + 1] * _floor_integral(xl / n))
    # the A-terms cancel analytically; they are kept to exercise the whole family
    F1 = complex(f_val * xl) + A * x
    lhs = F1 - (complex(integral) + A * x)
    rhs = complex(_error(st, x, chi))
    return VolterraReport(x=x, A=A, lhs=lhs, rhs=rhs, residual=abs(lhs - rhs))


# --- Riesz means ----------------------------------------------------------------

def riesz_direct(spec: EulerProductSpec, k: int, x: float):
    """(1/k!) sum_{n<=x} phi(n, F) log(x/n)^k - C x^2 / 2^k."""
    if k not in (1, 2):
        raise DomainError("k must be 1 or 2")
    st, _ = _stream_for(spec, x)
    m = int(math.floor(x))
    xl = LD(x)
    tail = st.two_alpha / 2 * xl**2 / LD(2) ** k
    if m < 1:
        return -tail
    n = np.arange(1, m + 1, dtype=LD)
    s = np.sum(st.b[1:m + 1] * np.log(xl / n) ** k) / math.factorial(k)
    return s - tail


def riesz_piecewise(spec: EulerProductSpec, k: int, x: float):
    """delta_k(E)(x) by integrating the step function A(t) exactly on each [m, m+1)."""
    if k not in (1, 2):
        raise DomainError("k must be 1 or 2")
    st, _ = _stream_for(spec, x)
    M = int(math.floor(x))
    xl = LD(x)
    tail = st.two_alpha / 2 * xl**2 / LD(2) ** k
    if M < 1:
        return -tail
    m = np.arange(1, M + 1, dtype=LD)
    lo = np.log(m)
    hi = np.log(np.append(m[1:], xl))  # upper ends: m+1, the last one x
    A = st.A[1:M + 1]
    if k == 1:
        return np.sum(A * (hi - lo)) - tail
    Lsum = np.cumsum(st.b[1:M + 1] * lo)  # sum_{n<=m} b(n) log n
    return np.sum(A * (hi**2 - lo**2) / 2 - Lsum * (hi - lo)) - tail


def riesz_mean(spec: EulerProductSpec, k: int, x: float) -> RieszReport:
    if x <= 0:
        raise DomainError("x must be positive")
    st, _ = _stream_for(spec, x)
    return RieszReport(x=x, k=k, way1=_scalar(riesz_direct(spec, k, x), st.real),
                       way2=_scalar(riesz_piecewise(spec, k, x), st.real))


__all__ = [
    "TruncationPolicy", "SeriesValue", "DecompositionReport", "VolterraReport", "RieszReport",
    "mean_constant", "character_sums", "saw_tooth", "error_term", "f_series", "g_series",
    "decomposition_report", "f1_one_sided", "jump_identity_residual", "volterra_residual",
    "riesz_direct", "riesz_piecewise", "riesz_mean", "default_variant",
]
