"""Complex gamma and digamma, Kummer and Tricomi functions, Whittaker W.

W_{k,mu} has three independent evaluators: the confluent series, a Barnes
contour integral, and the leading small-z behaviour. Evaluators accept
numpy arrays for the argument; parameters are scalars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchError, ContourError, DomainError, PoleError

EULER_GAMMA = 0.57721566490153286061

_LANCZOS_G = 7.0
_LANCZOS = np.array([
    0.99999999999980993, 676.5203681218851, -1259.1392167224028,
    771.32342877765313, -176.61502916214059, 12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)

# B_{2k} / (2k) for the digamma asymptotic series
_BERN_OVER_2K = np.array([
    1 / 6 / 2, -1 / 30 / 4, 1 / 42 / 6, -1 / 30 / 8, 5 / 66 / 10,
    -691 / 2730 / 12, 7 / 6 / 14, -3617 / 510 / 16,
])


def _as_cx(z) -> np.ndarray:
    return np.asarray(z, dtype=complex)


def _out(arr: np.ndarray, like):
    return complex(arr) if np.ndim(like) == 0 else arr


def log_sin_pi(z) -> np.ndarray:
    """A logarithm of sin(pi z) that stays accurate near integers and for large |Im z|."""
    z = _as_cx(z)
    n = np.round(z.real)
    zr = z - n  # sin(pi z) = (-1)^n sin(pi zr)
    upper = zr.imag >= 0
    zu = np.where(upper, zr, -zr)
    val = -1j * np.pi * zu + np.log(np.expm1(2j * np.pi * zu) / 2j)
    return np.where(upper, val, val + 1j * np.pi) + 1j * np.pi * n


def _loggamma_right(z: np.ndarray) -> np.ndarray:
    z = z - 1
    x = np.full(z.shape, _LANCZOS[0], dtype=complex)
    for i in range(1, len(_LANCZOS)):
        x = x + _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(x)


def loggamma_cx(z) -> np.ndarray:
    """A logarithm of Gamma(z) (exp of it is Gamma; the branch is not principal)."""
    zz = _as_cx(z)
    left = zz.real < 0.5
    out = np.empty(zz.shape, dtype=complex)
    if np.any(~left):
        out[~left] = _loggamma_right(zz[~left])
    if np.any(left):
        zl = zz[left]
        out[left] = math.log(math.pi) - log_sin_pi(zl) - _loggamma_right(1 - zl)
    return _out(out, z)


def _at_pole(z: np.ndarray) -> np.ndarray:
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


def gamma_cx(z):
    zz = _as_cx(z)
    if np.any(_at_pole(zz)):
        raise PoleError("gamma has poles at nonpositive integers")
    return _out(np.exp(loggamma_cx(zz)), z)


def rgamma_cx(z):
    """1/Gamma(z), entire; exactly zero at the poles of Gamma."""
    zz = _as_cx(z)
    pole = _at_pole(zz)
    safe = np.where(pole, 1.0, zz)
    return _out(np.where(pole, 0.0, np.exp(-loggamma_cx(safe))), z)


def _cot_pi(z: np.ndarray) -> np.ndarray:
    zr = z - np.round(z.real)
    upper = zr.imag >= 0
    zu = np.where(upper, zr, -zr)
    w1 = np.expm1(2j * np.pi * zu)
    c = 1j * (w1 + 2) / w1
    return np.where(upper, c, -c)


def _digamma_right(z: np.ndarray) -> np.ndarray:
    acc = np.zeros(z.shape, dtype=complex)
    w = z.copy()
    small = np.abs(w) < 12
    while np.any(small):
        acc[small] -= 1 / w[small]
        w[small] += 1
        small = np.abs(w) < 12
    w2 = 1 / (w * w)
    series = np.zeros(z.shape, dtype=complex)
    for c in _BERN_OVER_2K[::-1]:
        series = (series + c) * w2
    return acc + np.log(w) - 0.5 / w - series


def digamma_cx(z):
    zz = _as_cx(z)
    if np.any(_at_pole(zz)):
        raise PoleError("digamma has poles at nonpositive integers")
    left = zz.real < 0.5
    out = np.empty(zz.shape, dtype=complex)
    if np.any(~left):
        out[~left] = _digamma_right(zz[~left])
    if np.any(left):
        zl = zz[left]
        out[left] = _digamma_right(1 - zl) - np.pi * _cot_pi(zl)
    return _out(out, z)


# --- confluent hypergeometric functions --------------------------------------

_SERIES_RTOL = 1e-18
_SERIES_MIN = 10
_SERIES_MAX = 4000


def _is_nonpos_int(x: complex) -> bool:
    x = complex(x)
    return x.imag == 0 and x.real <= 0 and x.real == round(x.real)


def _is_int(x: complex) -> bool:
    x = complex(x)
    return x.imag == 0 and x.real == round(x.real)


def kummer_phi(alpha: complex, gamma: complex, z):
    """Phi(alpha, gamma; z) = sum (alpha)_n / (gamma)_n z^n / n!."""
    if _is_nonpos_int(gamma):
        raise DomainError("Kummer Phi needs gamma not in {0, -1, -2, ...}")
    zz = _as_cx(z)
    term = np.ones(zz.shape, dtype=complex)
    total = term.copy()
    for n in range(_SERIES_MAX):
        term = term * ((alpha + n) / (gamma + n)) * zz / (n + 1)
        total = total + term
        if n + 1 >= _SERIES_MIN and np.all(np.abs(term) <= _SERIES_RTOL * np.abs(total)):
            break
    else:
        raise DomainError("Kummer series did not converge; |z| too large")
    return _out(total, z)


def _ratio_gamma(num: complex, den: complex) -> complex:
    """Gamma(num) / Gamma(den), zero when den sits on a pole."""
    if _is_nonpos_int(den):
        return 0j
    if _is_nonpos_int(num):
        raise PoleError("gamma ratio with numerator on a pole")
    return complex(np.exp(loggamma_cx(num) - loggamma_cx(den)))


def _tricomi_generic(a: complex, b: complex, z: np.ndarray, logz: np.ndarray) -> np.ndarray:
    c1 = _ratio_gamma(1 - b, 1 + a - b)
    c2 = _ratio_gamma(b - 1, a)
    out = np.zeros(z.shape, dtype=complex)
    if c1 != 0:
        out = out + c1 * kummer_phi(a, b, z)
    if c2 != 0:
        out = out + c2 * np.exp((1 - b) * logz) * kummer_phi(1 + a - b, 2 - b, z)
    return out


def _tricomi_integer_b(a: complex, n: int, z: np.ndarray, logz: np.ndarray) -> np.ndarray:
    """Psi(a, n + 1; z) for integer n >= 0 from the logarithmic limit series."""
    if _is_nonpos_int(a):
        m = int(round(-complex(a).real))
        # terminating case: (-1)^m (b)_m Phi(-m, b; z)
        poch = math.prod(n + 1 + j for j in range(m))
        return (-1) ** m * poch * np.asarray(kummer_phi(a, n + 1, z), dtype=complex)
    out = np.zeros(z.shape, dtype=complex)
    ra = complex(rgamma_cx(a))
    for kk in range(1, n + 1):
        poch = np.prod([1 - a + kk + j for j in range(n - kk)]) if n > kk else 1.0
        out = out + ra * math.factorial(kk - 1) * poch / math.factorial(n - kk) * np.exp(-kk * logz)
    lead = (-1) ** (n + 1) / math.factorial(n) * complex(rgamma_cx(a - n))
    if lead == 0:
        return out
    coef = 1.0 + 0j  # (a)_k / ((n+1)_k k!)
    psi_a = complex(digamma_cx(a))
    psi_1 = -EULER_GAMMA
    psi_n = complex(digamma_cx(n + 1))
    zk = np.ones(z.shape, dtype=complex)
    total = np.zeros(z.shape, dtype=complex)
    for k in range(_SERIES_MAX):
        term = coef * zk * (logz + psi_a - psi_1 - psi_n)
        total = total + term
        if k >= _SERIES_MIN and np.all(np.abs(term) <= _SERIES_RTOL * np.maximum(np.abs(total), 1e-300)):
            break
        coef *= (a + k) / ((n + 1 + k) * (k + 1))
        zk = zk * z
        psi_a += 1 / (a + k)
        psi_1 += 1 / (k + 1)
        psi_n += 1 / (n + 1 + k)
    else:
        raise DomainError("logarithmic Tricomi series did not converge")
    return out + lead * total


INTEGER_GAMMA_STEP = 1e-3


def _tricomi_perturbed(a: complex, b: complex, z: np.ndarray, logz: np.ndarray) -> np.ndarray:
    """Integer b reached by symmetric perturbation with one Richardson level."""
    h = INTEGER_GAMMA_STEP

    def sym(eps):
        return 0.5 * (_tricomi_generic(a, b + eps, z, logz) + _tricomi_generic(a, b - eps, z, logz))

    return (4 * sym(h) - sym(2 * h)) / 3


NEAR_INTEGER_BAND = 0.05
_CAUCHY_RADIUS, _CAUCHY_NODES = 0.25, 32


def _tricomi_cauchy(a: complex, b: complex, n: int, z: np.ndarray, logz: np.ndarray) -> np.ndarray:
    """Psi near integer b by the Cauchy integral over |beta - n| = 1/4.

    Psi is entire in b, and on that circle the connection formula is well conditioned,
    whereas at b itself its two terms cancel to about eps / |b - n|.
    """
    e = np.exp(2j * math.pi * (np.arange(_CAUCHY_NODES) + 0.5) / _CAUCHY_NODES)
    beta = n + _CAUCHY_RADIUS * e
    total = np.zeros(z.shape, dtype=complex)
    for bj, ej in zip(beta, e):
        total = total + _tricomi_generic(a, complex(bj), z, logz) * (_CAUCHY_RADIUS * ej / (bj - b))
    return total / _CAUCHY_NODES


def _tricomi_log(a: complex, b: complex, logz, integer_mode: str = "exact") -> np.ndarray:
    logz = _as_cx(logz)
    z = np.exp(logz)
    if not _is_int(b):
        n = int(round(complex(b).real))
        if abs(complex(b) - n) < NEAR_INTEGER_BAND:
            return _tricomi_cauchy(a, b, n, z, logz)
        return _tricomi_generic(a, b, z, logz)
    if integer_mode == "perturb":
        return _tricomi_perturbed(a, b, z, logz)
    n = int(round(complex(b).real))
    if n >= 1:
        return _tricomi_integer_b(a, n - 1, z, logz)
    # Psi(a, b; z) = z^(1-b) Psi(a - b + 1, 2 - b; z)
    return np.exp((1 - n) * logz) * _tricomi_integer_b(a - n + 1, 1 - n, z, logz)


def _principal_log(z) -> np.ndarray:
    zz = _as_cx(z)
    if np.any((zz.imag == 0) & (zz.real <= 0)):
        raise BranchError("argument on the cut (-inf, 0]")
    return np.log(zz)


def tricomi_psi(alpha: complex, gamma: complex, z, integer_mode: str = "exact"):
    """Psi(alpha, gamma; z) on the principal branch.

    Integer gamma uses the logarithmic limit series ("exact") or a
    perturbation gamma +- h with Richardson extrapolation ("perturb").
    """
    return _out(_tricomi_log(alpha, gamma, _principal_log(z), integer_mode), z)


@dataclass(frozen=True)
class WhittakerParams:
    k: complex
    mu: complex
    z: complex


def whittaker_W_log(k: complex, mu: complex, logz):
    """W_{k,mu} continued along a prescribed logarithm of its argument.

    Any branch is reached by passing the matching log z; the principal
    value corresponds to Im(log z) in (-pi, pi).
    """
    lz = _as_cx(logz)
    z = np.exp(lz)
    val = np.exp((mu + 0.5) * lz - z / 2) * _tricomi_log(0.5 - k + mu, 2 * mu + 1, lz)
    return _out(val, logz)


def whittaker_W(params: WhittakerParams) -> complex:
    lz = _principal_log(params.z)
    return complex(whittaker_W_log(params.k, params.mu, complex(lz)))


# --- Barnes integral -----------------------------------------------------------

@dataclass(frozen=True)
class BarnesQuadrature:
    c: float | None = None  # None selects the line automatically
    height_cut: float | None = None
    step: float = 0.05


@dataclass(frozen=True)
class BarnesResult:
    value: complex
    error_estimate: float
    c: float
    height: float
    corrected_poles: tuple


def _barnes_poles(k: complex, mu: complex, span: float = 8.0):
    """Left family (Gamma(s)) and right family pole positions near the axis."""
    left = [complex(-m) for m in range(int(span) + 1)]
    right = []
    for sgn in (-1, 1):
        base = 0.5 - k + sgn * mu
        right += [(complex(base + m), sgn, m) for m in range(int(span) + 1)]
    return left, right


def _choose_line(k, mu, double_right: bool) -> float:
    left, right = _barnes_poles(k, mu)
    all_re = [p.real for p in left] + [p[0].real for p in right]
    lo, hi = -2.0, 3.0
    grid = np.linspace(lo, hi, 5001)
    best, best_d = None, -1.0
    min_right = min(p[0].real for p in right)
    for c in grid:
        if double_right and c >= min_right:
            continue
        d = min(abs(c - r) for r in all_re)
        if d > best_d + 1e-12:
            best, best_d = float(c), d
    return best


def _barnes_integrand(s, k, mu, logz, log_den):
    return np.exp(
        loggamma_cx(s) + loggamma_cx(-s - k - mu + 0.5) + loggamma_cx(-s - k + mu + 0.5)
        - log_den + s * logz
    )


def whittaker_W_barnes(params: WhittakerParams, quadrature: BarnesQuadrature = BarnesQuadrature(),
                       logz: complex | None = None) -> BarnesResult:
    """Trapezoidal evaluation of the Barnes integral for W_{k,mu}(z).

    Poles that end up on the wrong side of the vertical line are accounted
    for by their residues instead of indenting the path.
    """
    k, mu = complex(params.k), complex(params.mu)
    for v in (k + mu + 0.5, k - mu + 0.5):
        if _is_int(v) and v.real >= 0:
            raise ContourError("k +- mu + 1/2 is a nonnegative integer")
    lz = complex(np.log(complex(params.z))) if logz is None else complex(logz)
    if abs(lz.imag) >= 1.5 * math.pi:
        raise BranchError("Barnes representation needs |arg z| < 3 pi / 2")
    double_right = abs(mu) == 0
    c = quadrature.c if quadrature.c is not None else _choose_line(k, mu, double_right)
    left, right = _barnes_poles(k, mu)
    near = min([abs(c - p.real) for p in left] + [abs(c - p[0].real) for p in right])
    if near < 1e-3:
        raise ContourError(f"line Re s = {c} passes through a pole")

    log_den = loggamma_cx(-k - mu + 0.5) + loggamma_cx(-k + mu + 0.5)
    # |integrand| ~ exp(-(3 pi/2 - |arg z|) |t|) |t|^p
    rate = 1.5 * math.pi - abs(lz.imag)
    if quadrature.height_cut is not None:
        T = quadrature.height_cut
    else:
        T = (40.0 + 3 * math.log1p(abs(k) + abs(mu) + abs(c))) / rate
    h = quadrature.step

    def trap(step):
        n = int(math.ceil(T / step))
        t = np.arange(-n, n + 1) * step
        vals = _barnes_integrand(c + 1j * t, k, mu, lz, log_den)
        return np.sum(vals) * step / (2 * math.pi)  # ds = i dt cancels the i of 2 pi i

    integral = trap(h)
    coarse = trap(2 * h)

    corrections = 0j
    fixed = []
    for p in left:
        if p.real > c:
            m = int(round(-p.real))
            res = ((-1) ** m / math.factorial(m)) * np.exp(
                loggamma_cx(-p - k - mu + 0.5) + loggamma_cx(-p - k + mu + 0.5) - log_den + p * lz)
            corrections += res  # contour must pass right of it
            fixed.append(p)
    for p, sgn, m in right:
        if p.real < c:
            if double_right:
                raise ContourError("double pole on the wrong side of the line")
            other = -p - k - sgn * mu + 0.5  # argument of the Gamma factor regular here
            res = -((-1) ** m / math.factorial(m)) * np.exp(
                loggamma_cx(p) + loggamma_cx(other) - log_den + p * lz)
            corrections -= res
            fixed.append(p)
    pref = np.exp(-0.5 * np.exp(lz) + k * lz)
    value = pref * (integral + corrections)
    err = abs(pref) * abs(integral - coarse)
    return BarnesResult(value=complex(value), error_estimate=float(err), c=c, height=T,
                        corrected_poles=tuple(fixed))


def barnes_integrand_bound(k: float, mu: float, z: complex, c: float, T: float) -> float:
    """Stirling bound for |integrand(c + iT)|, |T| >= 10, real k and mu.

    Each |Gamma(sigma + it)| <= 2 sqrt(2 pi) |t|^(sigma - 1/2) e^(-pi |t| / 2) there.
    """
    T = abs(T)
    expo = -c - 2 * k - 0.5
    den = abs(complex(gamma_cx(-k - mu + 0.5) * gamma_cx(-k + mu + 0.5)))
    return (8 * (2 * math.pi) ** 1.5 * T**expo * abs(z) ** c
            * math.exp(-(1.5 * math.pi - abs(np.angle(z))) * T) / den)


# --- small-z behaviour -------------------------------------------------------

@dataclass(frozen=True)
class SmallZAsymptotic:
    value: complex
    case: str
    remainder_exponent: float  # |W - value| = O(|z|^e |log z|^log_power)
    log_power: int


def asymptotic_small_z(params: WhittakerParams) -> SmallZAsymptotic:
    """Leading small-z terms of W_{k,mu}(z) by case on mu."""
    k, mu, z = complex(params.k), complex(params.mu), complex(params.z)
    if abs(z) > 0.1:
        raise DomainError("small-z expansion requires |z| <= 0.1")
    lz = np.log(z)
    r = mu.real
    if mu == 0:
        val = -np.exp(0.5 * lz) * rgamma_cx(0.5 - k) * (lz + digamma_cx(0.5 - k) + 2 * EULER_GAMMA)
        return SmallZAsymptotic(complex(val), "mu=0", 1.5, 1)
    if mu == 0.5:
        return SmallZAsymptotic(complex(rgamma_cx(1 - k)), "mu=1/2", 1.0, 1)
    lead = gamma_cx(2 * mu) * rgamma_cx(0.5 + mu - k) * np.exp((0.5 - mu) * lz)
    if r >= 0.5:
        return SmallZAsymptotic(complex(lead), "Re mu>=1/2", 1.5 - r, 0)
    if r > 0:
        return SmallZAsymptotic(complex(lead), "0<Re mu<1/2", r + 0.5, 0)
    if r == 0:
        other = gamma_cx(-2 * mu) * rgamma_cx(0.5 - mu - k) * np.exp((mu + 0.5) * lz)
        return SmallZAsymptotic(complex(lead + other), "Re mu=0", r + 1.5, 0)
    raise DomainError("small-z expansion implemented for Re mu >= 0")


# --- cross-checks between the routes ---------------------------------------------

ROUTE_K = (-1.5, -0.75, 0.1)
ROUTE_MU = (0.0, 0.3, 0.5)
ROUTE_Z = (0.3, 1 + 1j, 2.5 * np.exp(-2j))


def route_grid() -> list[WhittakerParams]:
    """3 x 3 x 3 parameter grid clear of the Barnes exclusions."""
    return [WhittakerParams(k, mu, z) for k in ROUTE_K for mu in ROUTE_MU for z in ROUTE_Z]


@dataclass(frozen=True)
class RouteAgreement:
    params: WhittakerParams
    series: complex
    barnes: complex
    barnes_error: float

    @property
    def difference(self) -> float:
        return abs(self.series - self.barnes)


def route_agreement(params: WhittakerParams) -> RouteAgreement:
    b = whittaker_W_barnes(params)
    return RouteAgreement(params, whittaker_W(params), b.value, b.error_estimate)


def kummer_ode_residual(alpha: complex, gamma: complex, z: complex, h: float = 1e-2) -> float:
    """|z u'' + (gamma - z) u' - alpha u| for u = Phi, derivatives by 4th-order central differences."""
    z = complex(z)
    pts = z + h * np.arange(-2, 3)
    u = _as_cx(kummer_phi(alpha, gamma, pts))
    d1 = (u[0] - 8 * u[1] + 8 * u[3] - u[4]) / (12 * h)
    d2 = (-u[0] + 16 * u[1] - 30 * u[2] + 16 * u[3] - u[4]) / (12 * h * h)
    return float(abs(z * d2 + (gamma - z) * d1 - alpha * u[2]))


SLOPE_RADII = (1e-2, 1e-3, 1e-4)


@dataclass(frozen=True)
class SlopeCheck:
    case: str
    stated: float
    fitted: float

    @property
    def passed(self) -> bool:
        return self.fitted >= self.stated - 0.1


def asymptotic_slope(k: complex, mu: complex, direction: complex = np.exp(0.5j)) -> SlopeCheck:
    """Empirical exponent of |W - leading terms| over |z| in SLOPE_RADII.

    Remainders carrying a log factor are divided by |log z| first.
    """
    errs, rs = [], np.array(SLOPE_RADII)
    case, stated = "", 0.0
    for r in rs:
        z = complex(r * direction)
        a = asymptotic_small_z(WhittakerParams(k, mu, z))
        w = whittaker_W(WhittakerParams(k, mu, z))
        e = abs(w - a.value)
        if a.log_power:
            e /= abs(np.log(z)) ** a.log_power
        errs.append(e)
        case, stated = a.case, a.remainder_exponent
    fitted = float(np.polyfit(np.log(rs), np.log(errs), 1)[0])
    return SlopeCheck(case, stated, fitted)


ASYMPTOTIC_CASES = (0.7, 0.5, 0.3, 0.25j, 0.0)
