"""Sums over nontrivial zeros, their contour decomposition and the Whittaker-series continuation.

Notation used throughout:

* G(s) = zeta(s-1)/F(s), the integrand whose residues at the zeros give the sums.
* K(s) = (2 pi Q^2)^s zeta(2-s) / conj F(1-conj s) * Gamma(s+mu) Gamma(s-mu) Gamma(2-s),
  the kernel left after both functional equations are applied, so that
  G(s) = -sum_phi kappa(phi) K(s) e^{i phi s} over the four phases.
* L(phi, z) = int over Re s = a of K(s) e^{(z + i phi) s} ds, expanded as a
  double series of Whittaker blocks minus the residues crossed by the line.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .arith import EulerProductSpec, coefficient_table, dirichlet_convolve, zeta_spec
from .errors import ContourError, DomainError, PoleError, TruncationError, UnsupportedSpecError
from .lfunc import F_eval, F_prime_at, ZeroTable, check_grouping_height, grouping_heights, zeta_cx
from .quad import panel_nodes, segment_rule
from .special import EULER_GAMMA, digamma_cx, loggamma_cx, whittaker_W_log

TWO_PI_I = 2j * math.pi
WHITTAKER_K = -1.5


class PhaseTag(Enum):
    """The shift phi in e^{(z + i phi) s}, in units of pi."""

    PLUS_3HALF = 1.5
    MINUS_HALF = -0.5
    PLUS_HALF = 0.5
    MINUS_3HALF = -1.5

    @property
    def angle(self) -> float:
        return self.value * math.pi

    @property
    def family(self) -> int:
        """Index of the residue family whose exponentials carry z + i phi."""
        return {-1.5: 1, 1.5: 2, -0.5: 3, 0.5: 4}[self.value]


ALL_PHASES = (PhaseTag.PLUS_3HALF, PhaseTag.MINUS_HALF, PhaseTag.PLUS_HALF, PhaseTag.MINUS_3HALF)


# --- data types -------------------------------------------------------------------

@dataclass(frozen=True)
class ContourSpec:
    a: float = -0.25
    b: float = 3.0
    alpha: float | None = None  # height of the polyline apex; None takes half the first ordinate
    width: float = 0.5  # panel width along the vertical line
    order: int = 16
    height: float | None = None  # None picks the cut from the decay of the integrand


@dataclass(frozen=True)
class QuadValue:
    value: complex
    error: float
    height: float = 0.0

    def __complex__(self) -> complex:
        return complex(self.value)


@dataclass(frozen=True)
class ZeroSum:
    value: complex
    tail: float
    count: int
    height: float

    def __complex__(self) -> complex:
        return complex(self.value)


@dataclass(frozen=True)
class IdentityResidual:
    z: complex
    lhs: complex
    rhs: complex
    zero_count: int = 0
    quad_height: float = 0.0
    series_cut: int = 0
    error_budget: float = 0.0

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)


@dataclass(frozen=True)
class SeriesCut:
    M: int = 1 << 16  # largest n k summed term by term

    def __post_init__(self):
        if self.M < 16:
            raise DomainError("series cut must be at least 16")

    def doubled(self) -> "SeriesCut":
        return SeriesCut(2 * self.M)


@dataclass(frozen=True)
class WhittakerSeries:
    value: complex
    tail_estimate: float
    cut: int

    def __complex__(self) -> complex:
        return complex(self.value)


DEFAULT_CONTOUR = ContourSpec()
DEFAULT_CUT = SeriesCut()


def _fe(spec: EulerProductSpec):
    fe = spec.fe_data
    if fe is None:
        raise UnsupportedSpecError(
            f"{spec.name} has no single-gamma functional equation with lambda = 1 and 0 <= mu < 1")
    return fe


def _trivial_zero_real_parts(spec: EulerProductSpec) -> list[float]:
    out = []
    for fac in spec.factors:
        if fac[0] == "zeta":
            out.append(-2.0)
        else:
            odd = fac[1] < 0  # real characters: chi(-1) = sign of the discriminant
            out.append(-1.0 if odd else 0.0)
    return out


def contour_for(spec: EulerProductSpec, zeros: ZeroTable, **overrides) -> ContourSpec:
    c = ContourSpec(**overrides)
    if c.alpha is None:
        c = ContourSpec(c.a, c.b, 0.5 * float(zeros.ordinates[0]), c.width, c.order, c.height)
    validate_contour(spec, c)
    return c


def validate_contour(spec: EulerProductSpec, c: ContourSpec) -> None:
    neg = [r for r in _trivial_zero_real_parts(spec) if r < 0]
    lower = max([-1.5] + [0.5 * r for r in neg])
    if not lower < c.a < 0:
        raise ContourError(f"a = {c.a} must lie in ({lower}, 0)")
    if not c.b > 2.5:
        raise ContourError("b must exceed 5/2")
    if c.alpha is not None and not c.alpha > 0:
        raise ContourError("polyline apex must lie above the real axis")
    if spec.fe_data is not None:
        mu = spec.fe_data.mu_shift
        for pole in (c.a - mu, c.a + mu):
            if abs(pole - round(pole)) < 1e-3 and round(pole) <= 0:
                raise ContourError(f"Re s = {c.a} meets a pole of Gamma(s +- mu)")


# --- sums over zeros -----------------------------------------------------------------

_ZERO_CACHE: dict = {}


def _zero_coefficients(spec: EulerProductSpec, zeros: ZeroTable) -> np.ndarray:
    """zeta(rho - 1)/F'(rho) for rho = 1/2 + i gamma over the table."""
    key = (spec, zeros.label, zeros.count, float(zeros.ordinates[0]), float(zeros.ordinates[-1]))
    if key not in _ZERO_CACHE:
        rho = 0.5 + 1j * zeros.ordinates
        dF = np.asarray(F_prime_at(spec, rho, neighbours=zeros.ordinates))
        _ZERO_CACHE[key] = np.asarray(zeta_cx(rho - 1)) / dF
    return _ZERO_CACHE[key]


def _zero_height(zeros: ZeroTable, T: float | None) -> float:
    if T is None:
        return grouping_heights(zeros, float(zeros.ordinates[-1]) + 1.0)[-1]
    check_grouping_height(zeros, T)
    return float(T)


def _zero_sum(spec, zeros, z, T, lower: bool) -> ZeroSum:
    T = _zero_height(zeros, T)
    coef = _zero_coefficients(spec, zeros)
    gam = zeros.ordinates
    used = gam < T
    if lower:
        rho = 0.5 - 1j * gam[used]
        terms = np.conj(coef[used]) * np.exp(rho * z)
    else:
        rho = 0.5 + 1j * gam[used]
        terms = coef[used] * np.exp(rho * z)
    value = complex(math.fsum(terms.real) + 1j * math.fsum(terms.imag))
    # first omitted ordinate, or one mean gap past the table
    rest = gam[~used]
    gaps = np.diff(gam)
    nxt = float(rest[0]) if rest.size else float(gam[-1] + (gaps.mean() if gaps.size else 1.0))
    gap = float(gaps[-10:].mean()) if gaps.size else 1.0
    y = abs(z.imag)
    scale = float(np.max(np.abs(coef[used][-10:]))) * (nxt / gam[used][-1]) ** 2 if used.any() else 1.0
    tail = scale * math.exp(0.5 * z.real - nxt * y) / -math.expm1(-y * gap)
    return ZeroSum(value, tail, int(used.sum()), T)


def f_zero_sum(spec: EulerProductSpec, zeros: ZeroTable, z: complex, T: float | None = None) -> ZeroSum:
    """sum over 0 < gamma < T of e^{rho z} zeta(rho - 1)/F'(rho), zeros taken on the critical line."""
    z = complex(z)
    if not z.imag > 0:
        raise DomainError("the upper zero sum needs Im z > 0")
    return _zero_sum(spec, zeros, z, T, lower=False)


def f_minus_zero_sum(spec: EulerProductSpec, zeros: ZeroTable, z: complex, T: float | None = None) -> ZeroSum:
    """The sum over conjugate zeros, built from the positive-ordinate table."""
    z = complex(z)
    if not z.imag < 0:
        raise DomainError("the lower zero sum needs Im z < 0")
    if not spec.real_coefficients:
        raise UnsupportedSpecError("lower zeros by conjugation need real Dirichlet coefficients")
    return _zero_sum(spec, zeros, z, T, lower=True)


# --- the vertical half-line ----------------------------------------------------------

def _growth_exponent(spec: EulerProductSpec, a: float) -> float:
    """|G(a + it)| grows like t^p: zeta(a - 1) contributes 3/2 - a, each factor of 1/F a - 1/2."""
    return 1.5 - a + spec.degree * (a - 0.5)


def _cut_height(rate: float, p: float, digits: float = 38.0, cap: float = 2.0e4) -> float:
    if rate < 0.01:
        raise ContourError(f"decay rate {rate:.3g} too small for a finite cut")
    H = digits / rate
    for _ in range(6):
        H = (digits + max(p, 0.0) * math.log(max(H, 2.0))) / rate
    H = max(H, 20.0)
    if H > cap:
        raise ContourError(f"cut height {H:.0f} above {cap:.0f}; move z away from the real axis")
    return H


def _quantize(H: float) -> float:
    """Round up to 64 * 2^k so that nearby z share one cached line."""
    return float(64 * 2 ** max(0, math.ceil(math.log2(H / 64))))


@functools.lru_cache(maxsize=16)
def _line_G(spec: EulerProductSpec, a: float, width: float, order: int, H: float):
    t, w = panel_nodes(0.0, H, width, order)
    s = a + 1j * t
    G = np.asarray(zeta_cx(s - 1)) / np.asarray(F_eval(spec, s))
    return t, w, G


def f1_integrand_bound(spec: EulerProductSpec, a: float, t: float, z: complex) -> float:
    """Upper bound for |G(a+it) e^{(a+it) z}| at t >= 10 from the functional equations.

    |zeta(a-1+it)| <= 1.1 (t/2 pi)^{3/2-a} zeta(2-a) and, per factor of conductor q,
    1/|L(a+it)| <= 1.1 (q t/2 pi)^{a-1/2} zeta(1-a)/zeta(2-2a).
    """
    if t < 10:
        raise DomainError("the bound is stated for t >= 10")
    zr = lambda x: float(zeta_cx(x).real)  # noqa: E731
    val = 1.1 * (t / (2 * math.pi)) ** (1.5 - a) * zr(2 - a)
    for fac in spec.factors:
        q = 1 if fac[0] == "zeta" else abs(fac[1])
        val *= 1.1 * (q * t / (2 * math.pi)) ** (a - 0.5) * zr(1 - a) / zr(2 - 2 * a)
    z = complex(z)
    return val * math.exp(a * z.real - t * z.imag)


def _f1_height(spec, c: ContourSpec, y: float) -> float:
    if c.height is not None:
        return c.height
    return _quantize(_cut_height(abs(y), _growth_exponent(spec, c.a)))


def f1_integral(spec: EulerProductSpec, z: complex, contour: ContourSpec = DEFAULT_CONTOUR) -> QuadValue:
    """int from a + i infinity down to a of G(s) e^{sz} ds, for Im z > 0."""
    z = complex(z)
    if not z.imag > 0:
        raise DomainError("the upper half-line integral needs Im z > 0")
    validate_contour(spec, contour)
    H = _f1_height(spec, contour, z.imag)
    t, w, G = _line_G(spec, contour.a, contour.width, contour.order, H)
    terms = w * G * np.exp((contour.a + 1j * t) * z)
    val = -1j * complex(np.sum(terms))
    err = abs(terms[-1]) / max(w[-1], 1e-300) / z.imag + 1e-15 * float(np.sum(np.abs(terms)))
    return QuadValue(val, err, H)


def f1_minus_integral(spec: EulerProductSpec, z: complex, contour: ContourSpec = DEFAULT_CONTOUR) -> QuadValue:
    """int from a down to a - i infinity of G(s) e^{sz} ds, for Im z < 0."""
    z = complex(z)
    if not z.imag < 0:
        raise DomainError("the lower half-line integral needs Im z < 0")
    if not spec.real_coefficients:
        raise UnsupportedSpecError("the lower line is evaluated by conjugation")
    validate_contour(spec, contour)
    H = _f1_height(spec, contour, z.imag)
    t, w, G = _line_G(spec, contour.a, contour.width, contour.order, H)
    terms = w * np.conj(G) * np.exp((contour.a - 1j * t) * z)
    val = -1j * complex(np.sum(terms))
    err = abs(terms[-1]) / max(w[-1], 1e-300) / -z.imag + 1e-15 * float(np.sum(np.abs(terms)))
    return QuadValue(val, err, H)


# --- the polyline below the first zero --------------------------------------------------

@functools.lru_cache(maxsize=16)
def _polyline(spec: EulerProductSpec, a: float, b: float, alpha: float, order: int):
    apex = 0.5 * (a + b) + 1j * alpha
    s1, d1 = segment_rule(a, apex, 0.25, order)
    s2, d2 = segment_rule(apex, b, 0.25, order)
    s, ds = np.concatenate([s1, s2]), np.concatenate([d1, d2])
    Fv = np.asarray(F_eval(spec, s))
    if np.min(np.abs(Fv)) < 1e-8:
        raise ContourError("F vanishes on the polyline; lower the apex")
    return s, ds, np.asarray(zeta_cx(s - 1)) / Fv


def _alpha(contour: ContourSpec) -> float:
    if contour.alpha is None:
        raise ContourError("polyline apex unset; build the contour with contour_for")
    return contour.alpha


def f2_integral(spec: EulerProductSpec, z: complex, contour: ContourSpec) -> QuadValue:
    """G(s) e^{sz} along a -> (a+b)/2 + i alpha -> b."""
    s, ds, G = _polyline(spec, contour.a, contour.b, _alpha(contour), contour.order)
    terms = ds * G * np.exp(s * complex(z))
    return QuadValue(complex(np.sum(terms)), 1e-14 * float(np.sum(np.abs(terms))))


def f2_minus_integral(spec: EulerProductSpec, z: complex, contour: ContourSpec) -> QuadValue:
    """G(s) e^{sz} along the mirrored polyline, run from b back to a."""
    if not spec.real_coefficients:
        raise UnsupportedSpecError("the mirrored polyline is evaluated by conjugation")
    s, ds, G = _polyline(spec, contour.a, contour.b, _alpha(contour), contour.order)
    terms = np.conj(ds) * np.conj(G) * np.exp(np.conj(s) * complex(z))
    return QuadValue(-complex(np.sum(terms)), 1e-14 * float(np.sum(np.abs(terms))))


# --- the right vertical line, summed termwise ------------------------------------------

F3_TERMS = 1 << 18


@functools.lru_cache(maxsize=8)
def _g_data(spec: EulerProductSpec, N: int):
    g = coefficient_table(spec, N).gcoef[1:N + 1]
    return g, np.log(np.arange(1, N + 1, dtype=float))


def _density_tail(u0: float, decay: float, f) -> complex:
    """int_{u0}^inf f(u) du for an integrand decaying like e^{-decay u}."""
    u, w = panel_nodes(u0, u0 + 40.0 / decay, 0.5, 16)
    return complex(np.dot(w, f(u)))


def _check_log_poles(z: complex, N: int, gap: float = 1e-6) -> None:
    if abs(z.imag) < gap and 0 <= z.real <= math.log(N) + 1:
        n0 = max(1, round(math.exp(z.real)))
        for n in (n0 - 1, n0, n0 + 1):
            if 1 <= n <= N and abs(z - math.log(n)) < gap:
                raise PoleError(f"z lies within {gap} of log {n}")


def _f3_sum(spec: EulerProductSpec, z: complex, b: float, N: int) -> tuple[complex, float]:
    z = complex(z)
    _check_log_poles(z, N)
    if not b > 2:
        raise DomainError("the g-series needs b > 2")
    g, logn = _g_data(spec, N)
    terms = g * np.exp(-b * logn) / (z - logn)
    head = complex(math.fsum(terms.real) + 1j * math.fsum(terms.imag))
    # sum_{n <= x} g(n) ~ x^2 / (2 F(2)): close the remainder with that density
    invF2 = 1 / complex(F_eval(spec, 2.0))
    u0 = math.log(N + 0.5)
    tail = invF2 * _density_tail(u0, b - 2, lambda u: np.exp((2 - b) * u) / (z - u))
    dist = max(abs(z.imag), abs(min(z.real - u0, 0.0)), 1e-3) if z.real < u0 else abs(z.imag) + 1e-3
    bound = (2 + math.log(N)) * N ** (1 - b) / dist
    return head + tail, bound


def f3_series(spec: EulerProductSpec, z: complex, b: float = 3.0, N: int = F3_TERMS) -> QuadValue:
    """-e^{bz} sum g(n) n^-b / (z - log n), the right line integrated termwise."""
    s, bound = _f3_sum(spec, z, b, N)
    e = np.exp(b * complex(z))
    return QuadValue(complex(-e * s), float(abs(e) * bound))


def f3_minus_series(spec: EulerProductSpec, z: complex, b: float = 3.0, N: int = F3_TERMS) -> QuadValue:
    """The mirror of the right line: the same series with the opposite sign."""
    up = f3_series(spec, z, b, N)
    return QuadValue(-up.value, up.error)


# --- contour identity ------------------------------------------------------------------

def identity_residual_upper(spec: EulerProductSpec, zeros: ZeroTable, z: complex,
                            contour: ContourSpec | None = None, T: float | None = None,
                            N: int = F3_TERMS) -> IdentityResidual:
    """2 pi i times the zero sum against f1 + f2 + f3."""
    z = complex(z)
    c = contour or contour_for(spec, zeros)
    zs = f_zero_sum(spec, zeros, z, T)
    p1, p2, p3 = f1_integral(spec, z, c), f2_integral(spec, z, c), f3_series(spec, z, c.b, N)
    return IdentityResidual(
        z=z, lhs=TWO_PI_I * zs.value, rhs=p1.value + p2.value + p3.value, zero_count=zs.count,
        quad_height=p1.height, series_cut=N,
        error_budget=2 * math.pi * zs.tail + p1.error + p2.error + p3.error)


def identity_residual_lower(spec: EulerProductSpec, zeros: ZeroTable, z: complex,
                            contour: ContourSpec | None = None, T: float | None = None,
                            N: int = F3_TERMS) -> IdentityResidual:
    z = complex(z)
    c = contour or contour_for(spec, zeros)
    zs = f_minus_zero_sum(spec, zeros, z, T)
    p1, p2, p3 = f1_minus_integral(spec, z, c), f2_minus_integral(spec, z, c), f3_minus_series(spec, z, c.b, N)
    return IdentityResidual(
        z=z, lhs=TWO_PI_I * zs.value, rhs=p1.value + p2.value + p3.value, zero_count=zs.count,
        quad_height=p1.height, series_cut=N,
        error_budget=2 * math.pi * zs.tail + p1.error + p2.error + p3.error)


def f2_pair_closed_form(spec: EulerProductSpec, z: complex) -> complex:
    """The clockwise loop around s = 2 leaves -2 pi i e^{2z}/F(2)."""
    return -TWO_PI_I * np.exp(2 * complex(z)) / complex(F_eval(spec, 2.0))


def fitted_pole_residue(spec: EulerProductSpec, zeros: ZeroTable, n: int,
                        contour: ContourSpec | None = None, rel_radii=(0.14, 0.23, 0.32),
                        angles: int = 25, degree: int = 12) -> complex:
    """Residue of f1 + f2 + f3 at z = log n from a least-squares fit of w (f1+f2+f3)(log n + w).

    Samples lie on upper half arcs, where the half-line integral converges; the
    radii scale with the distance to the neighbouring poles log(n +- 1).
    """
    if n < 1:
        raise DomainError("n must be positive")
    c = contour or contour_for(spec, zeros)
    R = math.log1p(1 / n) if n == 1 else min(math.log1p(1 / n), -math.log1p(-1 / n))
    th = np.linspace(0.15 * math.pi, 0.85 * math.pi, angles)
    w = np.concatenate([r * R * np.exp(1j * th) for r in rel_radii])
    z0 = math.log(n)
    h = np.empty(w.shape, dtype=complex)
    for i, wi in enumerate(w):
        z = z0 + wi
        h[i] = wi * (f1_integral(spec, z, c).value + f2_integral(spec, z, c).value + f3_series(spec, z, c.b).value)
    V = np.vander(w / (max(rel_radii) * R), degree + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(V, h, rcond=None)
    return complex(coef[0])


# --- residues of the Barnes kernel -------------------------------------------------------

POLE_KINDS = ("mu-m", "-mu-m", "int", "half")


def _pole_location(kind: str, m: int, mu: float) -> float:
    return {"mu-m": mu - m, "-mu-m": -mu - m, "int": -m, "half": 0.5 - m}[kind]


def _kind_for(mu: float) -> tuple[str, ...]:
    if mu == 0:
        return ("int",)
    if mu == 0.5:
        return ("half",)
    return ("mu-m", "-mu-m")


def poles_between(mu: float, lo: float, hi: float) -> list[tuple[str, int]]:
    """Poles of Gamma(s+mu)Gamma(s-mu) with lo < s0 < hi, in decreasing position."""
    out = []
    for kind in _kind_for(mu):
        m = 0
        while True:
            s0 = _pole_location(kind, m, mu)
            if s0 <= lo:
                break
            if s0 < hi:
                out.append((kind, m))
            m += 1
    out.sort(key=lambda km: -_pole_location(km[0], km[1], mu))
    return out


def _log_scale(spec_or_Q, k, n) -> np.ndarray:
    Q = spec_or_Q if isinstance(spec_or_Q, (int, float)) else _fe(spec_or_Q).Q
    return np.log(2 * math.pi * Q * Q * np.asarray(k, dtype=float) * np.asarray(n, dtype=float))


def _residue(kind: str, m: int, mu: float, L):
    """Residue of Gamma(s+mu)Gamma(s-mu)Gamma(2-s) e^{L s} at the selected pole; L may be an array."""
    L = np.asarray(L, dtype=complex)
    if kind in ("mu-m", "-mu-m"):
        sg = 1 if kind == "mu-m" else -1
        g1 = 2 * sg * mu - m
        if g1 <= 0 and abs(g1 - round(g1)) < 1e-12:
            raise PoleError("Gamma(+-2mu - m) at a pole; use the mu = 0 or mu = 1/2 family")
        s0 = sg * mu - m
        lg = loggamma_cx(g1) + loggamma_cx(2 - s0)
        return (-1) ** m / math.factorial(m) * np.exp(lg + s0 * L)
    if kind == "int":
        if mu != 0:
            raise DomainError("the integer family needs mu = 0")
        H = math.fsum(1.0 / j for j in range(1, m + 1))
        return (m + 1) / math.factorial(m) * np.exp(-m * L) * (L + H - EULER_GAMMA - 1.0 / (m + 1))
    if kind == "half":
        if mu != 0.5:
            raise DomainError("the half-integer family needs mu = 1/2")
        pre = np.exp(loggamma_cx(1.5 + m)) / math.factorial(m) ** 2
        bracket = m * (digamma_cx(1.5 + m) - 2 * digamma_cx(m + 1.0)) - m * L + 1
        return pre * np.exp((0.5 - m) * L) * bracket
    raise DomainError(f"unknown pole kind {kind!r}")


def residue_term(phase: PhaseTag, pole_kind: str, spec, k: int, n: int, m: int, z: complex, mu: float) -> complex:
    """Closed-form residue at the pole selected by (pole_kind, m) for one (k, n) and phase.

    ``spec`` supplies Q through its functional-equation data; a bare number is taken as Q.
    """
    if m < 0 or k < 1 or n < 1:
        raise DomainError("k, n must be positive and m nonnegative")
    L = _log_scale(spec, k, n) + complex(z) + 1j * phase.angle
    return complex(_residue(pole_kind, m, float(mu), L))


def barnes_kernel(s, mu: float, L: complex):
    """Gamma(s+mu)Gamma(s-mu)Gamma(2-s) e^{L s}."""
    s = np.asarray(s, dtype=complex)
    return np.exp(loggamma_cx(s + mu) + loggamma_cx(s - mu) + loggamma_cx(2 - s) + L * s)


def residue_oracle(phase: PhaseTag, spec, k: int, n: int, z: complex, mu: float, s0: float,
                   radius: float = 0.1, points: int = 64) -> complex:
    """Trapezoidal (1/2 pi i) times the integral over the circle |s - s0| = radius."""
    L = _log_scale(spec, k, n) + complex(z) + 1j * phase.angle
    e = np.exp(2j * math.pi * np.arange(points) / points)
    vals = barnes_kernel(s0 + radius * e, mu, complex(L))
    return complex(np.mean(vals * radius * e))


# --- Whittaker blocks and the double series ------------------------------------------------

def _block(logY: np.ndarray, w: complex, mu: float) -> np.ndarray:
    """2 pi i Y^{1/2} exp(X/2 + w/2) Gamma(2+mu) Gamma(2-mu) W_{-3/2,mu}(X) with log X = -w - log Y."""
    logX = -w - logY
    X = np.exp(logX)
    lg = loggamma_cx(2 + mu) + loggamma_cx(2 - mu)
    W = np.asarray(whittaker_W_log(WHITTAKER_K, mu, logX))
    return TWO_PI_I * np.exp(0.5 * logY + 0.5 * X + 0.5 * w + lg) * W


def whittaker_block(phase: PhaseTag, spec, k: int, n: int, z: complex, mu: float) -> complex:
    """The integral over a Barnes path keeping every pole of Gamma(s +- mu) on its left.

    W is continued along log X = -(z + i phi) - log(2 pi n k Q^2), so the value is
    analytic in z also where the argument leaves the principal sheet.
    """
    logY = np.atleast_1d(_log_scale(spec, k, n))
    return complex(_block(logY, complex(z) + 1j * phase.angle, float(mu))[0])


def _residue_sum(logY: np.ndarray, w: complex, mu: float, lo: float, hi: float) -> np.ndarray:
    L = logY + w
    acc = np.zeros(L.shape, dtype=complex)
    for kind, m in poles_between(mu, lo, hi):
        acc = acc + _residue(kind, m, mu, L)
    return acc


def curly_bracket(phase: PhaseTag, spec, m, z: complex, mu: float, a: float = DEFAULT_CONTOUR.a) -> np.ndarray:
    """block/(2 pi i) minus the residues at poles right of Re s = a, for nk = m."""
    logY = np.atleast_1d(_log_scale(spec, 1, np.asarray(m, dtype=float)))
    w = complex(z) + 1j * phase.angle
    return _block(logY, w, mu) / TWO_PI_I - _residue_sum(logY, w, mu, a, math.inf)


def _asymptotic_bracket(logY: np.ndarray, w: complex, mu: float, a: float) -> np.ndarray:
    """Large-Y form of the curly bracket: the residues just left of the line."""
    return _residue_sum(logY, w, mu, a - 6.0, a)


@functools.lru_cache(maxsize=8)
def _dual_coefficients(spec: EulerProductSpec, M: int) -> np.ndarray:
    """d(m) = sum_{k | m} conj(mu_F(k)) k, so that sum_{nk = m} conj mu_F(k)/(k n^2) = d(m)/m^2."""
    muF = coefficient_table(spec, M).muF[:M + 1]
    n = np.arange(M + 1, dtype=float)
    return dirichlet_convolve(np.conj(muF) * n, np.ones(M + 1), M)[1:]


def _line_series_parts(spec: EulerProductSpec, z: complex, phase: PhaseTag, M: int, a: float):
    mu = _fe(spec).mu_shift
    d = _dual_coefficients(spec, M)
    m = np.arange(1, M + 1, dtype=float)
    logY = _log_scale(spec, 1, m)
    w = complex(z) + 1j * phase.angle
    br = _block(logY, w, mu) / TWO_PI_I - _residue_sum(logY, w, mu, a, math.inf)
    terms = d / m**2 * br
    # the mean of d(m) is 1/conj F(0) (pole of zeta(s) in sum d(m) m^-s = zeta(s)/conj F(s-1))
    F0 = complex(F_eval(spec, 0.0))
    lead = max(s for s in (_pole_location(k_, j, mu) for k_, j in poles_between(mu, a - 6, a)))
    logQ2 = math.log(2 * math.pi * _fe(spec).Q ** 2)

    def tail_from(Mc: int) -> complex:
        if abs(F0) < 1e-12:
            return 0j
        f = lambda u: np.exp(-u) * _asymptotic_bracket(logQ2 + u, w, mu, a)  # noqa: E731
        return np.conj(1 / F0) * _density_tail(math.log(Mc + 0.5), 1 - lead, f)

    return terms, tail_from


def line_series(spec: EulerProductSpec, z: complex, phase: PhaseTag, cut: SeriesCut = DEFAULT_CUT,
                a: float = DEFAULT_CONTOUR.a, tol: float | None = None) -> WhittakerSeries:
    """L(phi, z) = 2 pi i sum_{k,n} conj mu_F(k)/(k n^2) {block - residues right of a}.

    Terms are grouped by m = nk in ascending order; the remainder past the cut is
    closed with the mean value of the grouped coefficients.
    """
    M = cut.M
    terms, tail_from = _line_series_parts(spec, z, phase, M, a)
    full = math.fsum(terms.real) + 1j * math.fsum(terms.imag) + tail_from(M)
    half = terms[:M // 2]
    coarse = math.fsum(half.real) + 1j * math.fsum(half.imag) + tail_from(M // 2)
    est = 10 * 2 * math.pi * abs(full - coarse)
    if tol is not None and est > tol:
        raise TruncationError(f"series tail estimate {est:.3g} above {tol:.3g}; raise the cut", est)
    return WhittakerSeries(TWO_PI_I * full, est, M)


def kappa(spec: EulerProductSpec, phase: PhaseTag) -> complex:
    """Coefficient of the phase in f1 = sum_phi kappa(phi) int_a^{a+i inf} K(s) e^{(z+i phi)s} ds."""
    fe = _fe(spec)
    base = np.conj(fe.omega) / ((2 * math.pi) ** 3 * fe.Q * 1j)
    if phase.value > 0:
        return complex(base * np.exp(-1j * math.pi * fe.mu_shift))
    return complex(-base * np.exp(1j * math.pi * fe.mu_shift))


def I1_series(spec, z, cut: SeriesCut = DEFAULT_CUT, a: float = DEFAULT_CONTOUR.a) -> WhittakerSeries:
    """Full-line integral with phase -3 pi/2, without its kappa coefficient."""
    return line_series(spec, z, PhaseTag.MINUS_3HALF, cut, a)


def _scaled(spec, z, phase, cut, a) -> WhittakerSeries:
    s = line_series(spec, z, phase, cut, a)
    k = kappa(spec, phase)
    return WhittakerSeries(k * s.value, abs(k) * s.tail_estimate, s.cut)


def I1_minus_series(spec, z, cut: SeriesCut = DEFAULT_CUT, a: float = DEFAULT_CONTOUR.a) -> WhittakerSeries:
    """kappa(3 pi/2) times the full-line integral with phase +3 pi/2."""
    return _scaled(spec, z, PhaseTag.PLUS_3HALF, cut, a)


def A1_series(spec, z, cut: SeriesCut = DEFAULT_CUT, a: float = DEFAULT_CONTOUR.a) -> WhittakerSeries:
    return _scaled(spec, z, PhaseTag.MINUS_HALF, cut, a)


def A2_series(spec, z, cut: SeriesCut = DEFAULT_CUT, a: float = DEFAULT_CONTOUR.a) -> WhittakerSeries:
    return _scaled(spec, z, PhaseTag.PLUS_HALF, cut, a)


# --- the kernel K on the line and the half-line pieces -------------------------------------------

@functools.lru_cache(maxsize=16)
def _line_K(spec: EulerProductSpec, a: float, H: float, width: float = 0.5, order: int = 16):
    fe = _fe(spec)
    mu = fe.mu_shift
    t, w = panel_nodes(0.0, H, width, order)
    s = a + 1j * t
    Fr = np.conj(np.asarray(F_eval(spec, 1 - np.conj(s))))
    logK = (s * math.log(2 * math.pi * fe.Q**2) + loggamma_cx(s + mu) + loggamma_cx(s - mu)
            + loggamma_cx(2 - s))
    K = np.exp(logK) * np.asarray(zeta_cx(2 - s)) / Fr
    return t, w, K


def _K_exponent(spec, a: float) -> float:
    return a + 0.5  # three gamma factors: (a - 1/2) twice plus (3/2 - a)


def half_line(spec: EulerProductSpec, z: complex, phase: PhaseTag, upper: bool,
              a: float = DEFAULT_CONTOUR.a) -> QuadValue:
    """int_a^{a+i inf} (upper) or int_{a-i inf}^a of K(s) e^{(z + i phi) s} ds."""
    w = complex(z) + 1j * phase.angle
    rate = 1.5 * math.pi + (w.imag if upper else -w.imag)
    H = _quantize(_cut_height(rate, _K_exponent(spec, a)))
    t, wt, K = _line_K(spec, a, H)
    if upper:
        terms = wt * K * np.exp(w * (a + 1j * t))
    else:
        if not spec.real_coefficients:
            raise UnsupportedSpecError("the lower line is evaluated by conjugation")
        terms = wt * np.conj(K) * np.exp(w * (a - 1j * t))
    return QuadValue(1j * complex(np.sum(terms)), 1e-14 * float(np.sum(np.abs(terms))), H)


def f1_from_kernel(spec: EulerProductSpec, z: complex, a: float = DEFAULT_CONTOUR.a) -> complex:
    """f1 as the four kernel half-lines, valid where every one converges (Im z > 0)."""
    return sum(kappa(spec, p) * half_line(spec, z, p, True, a).value for p in ALL_PHASES)


def f1_continuation(spec: EulerProductSpec, z: complex, cut: SeriesCut = DEFAULT_CUT,
                    a: float = DEFAULT_CONTOUR.a) -> complex:
    """f1 continued to Im z > -pi: the -3 pi/2 half-line is replaced by its full line minus the lower half."""
    z = complex(z)
    if not z.imag > -math.pi:
        raise DomainError("the continuation covers Im z > -pi")
    total = 0j
    for p in (PhaseTag.PLUS_3HALF, PhaseTag.MINUS_HALF, PhaseTag.PLUS_HALF):
        total += kappa(spec, p) * half_line(spec, z, p, True, a).value
    p = PhaseTag.MINUS_3HALF
    total += kappa(spec, p) * (line_series(spec, z, p, cut, a).value - half_line(spec, z, p, False, a).value)
    return total


def f1_minus_continuation(spec: EulerProductSpec, z: complex, cut: SeriesCut = DEFAULT_CUT,
                          a: float = DEFAULT_CONTOUR.a) -> complex:
    """f1 mirror continued to Im z < pi."""
    z = complex(z)
    if not z.imag < math.pi:
        raise DomainError("the continuation covers Im z < pi")
    total = 0j
    for p in (PhaseTag.MINUS_HALF, PhaseTag.PLUS_HALF, PhaseTag.MINUS_3HALF):
        total += kappa(spec, p) * half_line(spec, z, p, False, a).value
    p = PhaseTag.PLUS_3HALF
    total += kappa(spec, p) * (line_series(spec, z, p, cut, a).value - half_line(spec, z, p, True, a).value)
    return total


def f1_pair_series(spec: EulerProductSpec, z: complex, cut: SeriesCut = DEFAULT_CUT,
                   a: float = DEFAULT_CONTOUR.a) -> WhittakerSeries:
    """f1 + f1 mirror as the four full-line series; every half-line cancels."""
    parts = [kappa(spec, p) * line_series(spec, z, p, cut, a).value for p in ALL_PHASES]
    tails = [abs(kappa(spec, p)) * line_series(spec, z, p, cut, a).tail_estimate for p in ALL_PHASES]
    return WhittakerSeries(sum(parts), sum(tails), cut.M)


def B_of_F(spec: EulerProductSpec, z: complex, cut: SeriesCut = DEFAULT_CUT,
           a: float = DEFAULT_CONTOUR.a) -> complex:
    """(f1 + f1 mirror)/(2 pi i) - e^{2z}/F(2), an entire function of z."""
    z = complex(z)
    if not abs(z.imag) < math.pi:
        raise DomainError("B is assembled on |Im z| < pi")
    pair = f1_pair_series(spec, z, cut, a).value
    return pair / TWO_PI_I - np.exp(2 * z) / complex(F_eval(spec, 2.0))


@functools.lru_cache(maxsize=4)
def _zeta_dual(M: int) -> np.ndarray:
    return _dual_coefficients(zeta_spec(), M).real


def B_zeta_explicit(z: complex, M: int = 20000) -> complex:
    """-(6/pi^2) e^{2z} + (1/2 pi^2) sum_m d(m)/m^2 [1/(u-1)^2 + 2/(u-1) + 1/(u+1)^2 - 2/(u+1)], u = m e^z."""
    z = complex(z)
    ez = np.exp(z)
    m = np.arange(1, M + 1, dtype=float)
    u = m * ez
    if np.min(np.abs(u - 1)) < 1e-6 or np.min(np.abs(u + 1)) < 1e-6:
        raise PoleError("z lies on a pole -log(nk)")
    br = 1 / (u - 1) ** 2 + 2 / (u - 1) + 1 / (u + 1) ** 2 - 2 / (u + 1)
    terms = _zeta_dual(M) / m**2 * br
    s = math.fsum(terms.real) + 1j * math.fsum(terms.imag)
    return complex(-6 / math.pi**2 * np.exp(2 * z) + s / (2 * math.pi**2))


def B_zeta_tail_bound(z: complex, M: int) -> float:
    """|d(m)| <= m and the bracket is at most 7/|u|^2 once |u| >= 10."""
    return 7 / (2 * math.pi**2) * abs(np.exp(-2 * complex(z))) / (2 * M**2)


def fe_residual(spec: EulerProductSpec, zeros: ZeroTable, z: complex, cut: SeriesCut = DEFAULT_CUT,
                T: float | None = None, contour: ContourSpec | None = None) -> IdentityResidual:
    """Continued f at conj z against B(conj z) - f_minus(conj z), for 0 < Im z < pi.

    The left side is (f1 + f2 + f3)/(2 pi i) with f1 continued below the real axis
    by the line series; the right side uses the mirror zero sum directly. No zero
    sum appears on the left, so the check ties the zeros to the series end to end.
    """
    z = complex(z)
    if not 0 < z.imag < math.pi:
        raise DomainError("need 0 < Im z < pi")
    _fe(spec)
    c = contour or contour_for(spec, zeros)
    validate_contour(spec, c)
    zb = z.conjugate()
    f1 = f1_continuation(spec, zb, cut, c.a)
    f2 = f2_integral(spec, zb, c)
    f3 = f3_series(spec, zb, c.b)
    lhs = (f1 + f2.value + f3.value) / TWO_PI_I
    fm = f_minus_zero_sum(spec, zeros, zb, T)
    rhs = B_of_F(spec, zb, cut, c.a) - fm.value
    return IdentityResidual(z=zb, lhs=lhs, rhs=rhs, zero_count=fm.count, quad_height=fm.height,
                            series_cut=cut.M, error_budget=fm.tail + f2.error + f3.error)
