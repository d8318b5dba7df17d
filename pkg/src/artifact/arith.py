"""Sieved arithmetic functions, real characters and polynomial Euler products.

Every coefficient sequence attached to an Euler product
F(s) = prod_p prod_j (1 - alpha_j(p) p^-s)^-1 is filled from its values at
prime powers by a multiplicative recursion over the smallest-prime-factor
table. Values are stored as complex128 throughout.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import CapacityError, DomainError, TruncationError

DEFAULT_SIEVE_CAP = 20_000_000
# a boolean prime sieve is ~13x lighter than the full tables
DEFAULT_PRIME_CAP = 250_000_000


@dataclass(frozen=True)
class SieveTables:
    limit: int
    mobius: np.ndarray  # int8, index 0 unused
    totient: np.ndarray  # int64
    spf: np.ndarray  # int32, spf[1] = 1

    def primes(self) -> np.ndarray:
        idx = np.arange(self.limit + 1)
        return idx[(self.spf == idx) & (idx >= 2)]


def _spf_table(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int32)
    spf[1] = 1
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    zero = spf == 0
    zero[0] = False
    spf[zero] = np.nonzero(zero)[0]
    return spf


def _doubling_blocks(limit: int):
    """Yield index ranges [lo, hi) such that n // spf[n] < lo for n in range."""
    lo = 2
    while lo <= limit:
        hi = min(2 * lo, limit + 1)
        yield lo, hi
        lo = hi


def sieve(limit: int, cap: int = DEFAULT_SIEVE_CAP) -> SieveTables:
    """Mobius, Euler totient and smallest prime factor for 1..limit."""
    if limit < 1:
        raise DomainError("sieve limit must be >= 1")
    if limit > cap:
        raise CapacityError(f"sieve limit {limit} exceeds cap {cap}")
    spf = _spf_table(limit)
    mob = np.zeros(limit + 1, dtype=np.int8)
    tot = np.zeros(limit + 1, dtype=np.int64)
    mob[1] = 1
    tot[1] = 1
    for lo, hi in _doubling_blocks(limit):
        n = np.arange(lo, hi)
        p = spf[lo:hi].astype(np.int64)
        m = n // p
        repeated = spf[m] == p
        mob[lo:hi] = np.where(repeated, 0, -mob[m])
        tot[lo:hi] = np.where(repeated, tot[m] * p, tot[m] * (p - 1))
    return SieveTables(limit=limit, mobius=mob, totient=tot, spf=spf)


def primes_up_to(limit: int, cap: int = DEFAULT_PRIME_CAP) -> np.ndarray:
    if limit > cap:
        raise CapacityError(f"prime limit {limit} exceeds cap {cap}")
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if is_p[i]:
            is_p[i * i :: i] = False
    return np.nonzero(is_p)[0]


def factorize(n: int) -> list[tuple[int, int]]:
    """Trial-division factorization; fine for the scalar entry points."""
    if n < 1:
        raise DomainError("factorize needs n >= 1")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == [(n, 1)]


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n)."""
    if n == 0:
        raise DomainError("kronecker symbol undefined for n = 0")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 == 1 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a|n) for odd n > 0
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class RealCharacter:
    """chi(n) = (D|n) for a non-square discriminant D."""

    D: int

    def __post_init__(self):
        if self.D % 4 not in (0, 1):
            raise DomainError(f"{self.D} is not a discriminant (D = 0, 1 mod 4)")
        if self.D >= 0 and math.isqrt(self.D) ** 2 == self.D:
            raise DomainError("square discriminant gives a principal character")
        if abs(self.D) <= 2:
            raise DomainError("modulus must exceed 2")

    @property
    def modulus(self) -> int:
        return abs(self.D)

    def __call__(self, n: int) -> int:
        return kronecker(self.D, n)

    def period_table(self) -> np.ndarray:
        q = self.modulus
        return np.array([kronecker(self.D, r) if r else 0 for r in range(q)], dtype=np.int64)

    def values(self, idx: np.ndarray) -> np.ndarray:
        return self.period_table()[np.asarray(idx) % self.modulus]


@dataclass(frozen=True)
class FEData:
    """Single-gamma-factor functional equation data (Q, omega, mu)."""

    Q: float
    omega: complex = 1.0
    mu_shift: float = 0.0

    def __post_init__(self):
        if not self.Q > 0:
            raise DomainError("Q must be positive")
        if abs(abs(self.omega) - 1.0) > 1e-12:
            raise DomainError("|omega| must be 1")
        if not 0.0 <= self.mu_shift < 1.0:
            raise DomainError("mu_shift must lie in [0, 1)")


@dataclass(frozen=True)
class EulerProductSpec:
    """A polynomial Euler product of degree d.

    ``factors`` lists the primitive pieces the product is built from
    (("zeta",) or ("L", D)), which the analytic evaluators use; a spec with
    no factors only supports the arithmetic side.
    """

    name: str
    degree: int
    local_roots: Callable[[int], Sequence[complex]]
    fe_data: FEData | None = None
    real_coefficients: bool = True
    factors: tuple = ()
    roots_vec: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)
    sample_limit: int = field(default=1000, compare=False)

    def __post_init__(self):
        if self.degree < 1:
            raise DomainError("degree must be positive")
        ps = primes_up_to(self.sample_limit)
        R = self.roots_at(ps)
        if np.any(np.abs(R) > 1 + 1e-12):
            raise DomainError(f"{self.name}: local roots must satisfy |alpha_j(p)| <= 1")
        if not np.any(np.abs(np.prod(R, axis=1)) > 0):
            raise DomainError(f"{self.name}: no prime with nonvanishing root product")

    def roots(self, p: int) -> np.ndarray:
        r = np.asarray(self.local_roots(int(p)), dtype=complex)
        if r.shape != (self.degree,):
            raise DomainError(f"{self.name}: expected {self.degree} roots at p={p}")
        return r

    def roots_at(self, primes: np.ndarray) -> np.ndarray:
        """Roots at many primes as an array of shape (len(primes), d)."""
        primes = np.asarray(primes, dtype=np.int64)
        if self.roots_vec is not None:
            return np.asarray(self.roots_vec(primes), dtype=complex).reshape(len(primes), self.degree)
        out = np.empty((len(primes), self.degree), dtype=complex)
        for i, p in enumerate(primes):
            out[i] = self.roots(int(p))
        return out


@functools.lru_cache(maxsize=None)
def zeta_spec() -> EulerProductSpec:
    return EulerProductSpec(
        name="zeta", degree=1, local_roots=lambda p: [1.0],
        factors=(("zeta",),),
        roots_vec=lambda ps: np.ones((len(ps), 1)),
    )


@functools.lru_cache(maxsize=None)
def dirichlet_spec(chi: RealCharacter, fe: FEData | None = None) -> EulerProductSpec:
    table = chi.period_table()
    return EulerProductSpec(
        name=f"L_chi{chi.D}", degree=1, local_roots=lambda p: [float(chi(p))],
        fe_data=fe, factors=(("L", chi.D),),
        roots_vec=lambda ps: table[ps % chi.modulus].astype(float)[:, None],
    )


@functools.lru_cache(maxsize=None)
def gaussian_dedekind_spec(Q: float) -> EulerProductSpec:
    """zeta_{Q(i)} = zeta * L(., chi_-4); Q is supplied by configuration."""
    chi = RealCharacter(-4)
    table = chi.period_table()
    return EulerProductSpec(
        name="zeta_Qi", degree=2, local_roots=lambda p: [1.0, float(chi(p))],
        fe_data=FEData(Q=Q, omega=1.0, mu_shift=0.0),
        factors=(("zeta",), ("L", -4)),
        roots_vec=lambda ps: np.stack([np.ones(len(ps)), table[ps % 4].astype(float)], axis=1),
    )


# --- local data at one prime ------------------------------------------------

def _signed_elementary(roots: np.ndarray) -> np.ndarray:
    """c_k = (-1)^k e_k(roots), k = 0..d."""
    c = np.ones(1, dtype=complex)
    for r in roots:
        c = np.append(c, 0) - np.append(0, c) * r
    return c


def _complete_homogeneous(roots: np.ndarray, kmax: int) -> np.ndarray:
    c = _signed_elementary(roots)
    h = np.zeros(kmax + 1, dtype=complex)
    h[0] = 1
    for k in range(1, kmax + 1):
        s = 0j
        for i in range(1, min(k, len(roots)) + 1):
            s -= c[i] * h[k - i]
        h[k] = s
    return h


def gamma_p(spec: EulerProductSpec, p: int) -> complex:
    """p (1 - 1/F_p(1)) = p (1 - prod_j (1 - alpha_j/p))."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    r = spec.roots(p)
    return complex(p * (1 - np.prod(1 - r / p)))


def alpha_coeff(spec: EulerProductSpec, n: int) -> complex:
    out = 1 + 0j
    for p, k in factorize(n):
        if k > 1:
            return 0j
        out *= -gamma_p(spec, p)
    return out


def assoc_totient(spec: EulerProductSpec, n: int) -> complex:
    """n prod_{p|n} F_p(1)^{-1}."""
    out = complex(n)
    for p, _ in factorize(n):
        out *= complex(np.prod(1 - spec.roots(p) / p))
    return out


def mu_F_coeff(spec: EulerProductSpec, n: int) -> complex:
    out = 1 + 0j
    for p, k in factorize(n):
        if k > spec.degree:
            return 0j
        out *= _signed_elementary(spec.roots(p))[k]
    return out


def aF_coeff(spec: EulerProductSpec, n: int) -> complex:
    out = 1 + 0j
    for p, k in factorize(n):
        out *= _complete_homogeneous(spec.roots(p), k)[k]
    return out


def g_coeff(spec: EulerProductSpec, n: int) -> complex:
    """(mu_F * Id)(n)."""
    out = 1 + 0j
    for p, k in factorize(n):
        c = _signed_elementary(spec.roots(p))
        out *= sum(c[i] * p ** (k - i) for i in range(min(k, spec.degree) + 1))
    return out


# --- the mean-value constant -------------------------------------------------

@dataclass(frozen=True)
class ConstantEstimate:
    value: complex
    bound: float
    prime_limit: int

    @property
    def real(self) -> float:
        return self.value.real


def log_tail_bound(degree: int, P: int) -> float:
    """Bound on |sum_{p>P} log(1 - gamma(p)/p^2)|.

    Uses |gamma(p)| <= d (1 + 1/p)^(d-1) and sum_{n>P} n^-2 < 1/P.
    """
    g = degree * (1 + 1 / P) ** (degree - 1)
    eps = g / P**2
    if eps >= 1:
        return math.inf
    return g / (P * (1 - eps))


def C_of_F(spec: EulerProductSpec, P: int, tol: float | None = None) -> ConstantEstimate:
    """Truncated product (1/2) prod_{p<=P} (1 - gamma(p)/p^2) with a rigorous bound."""
    if P < 2:
        raise DomainError("prime limit must be >= 2")
    ps = primes_up_to(P)
    R = spec.roots_at(ps)
    pf = ps.astype(float)
    gam = pf * (1 - np.prod(1 - R / pf[:, None], axis=1))
    w = gam / pf**2
    if spec.real_coefficients:
        logs = np.log1p(-w.real)
        value = 0.5 * complex(math.exp(math.fsum(logs)))
    else:
        logs = np.log1p(-w)
        value = 0.5 * complex(np.exp(math.fsum(logs.real) + 1j * math.fsum(logs.imag)))
    lb = log_tail_bound(spec.degree, P)
    bound = abs(value) * math.expm1(lb) if math.isfinite(lb) else math.inf
    if tol is not None and bound > tol:
        raise TruncationError(f"C(F) truncated at P={P} misses tolerance {tol:g}", bound)
    return ConstantEstimate(value=value, bound=bound, prime_limit=P)


# --- coefficient tables ------------------------------------------------------

@dataclass(frozen=True)
class CoefficientTable:
    spec: EulerProductSpec
    limit: int
    alpha: np.ndarray
    muF: np.ndarray
    aF: np.ndarray
    gcoef: np.ndarray
    assoc_totient: np.ndarray


def _prime_power_part(spf: np.ndarray, limit: int) -> np.ndarray:
    pk = np.ones(limit + 1, dtype=np.int64)
    for lo, hi in _doubling_blocks(limit):
        n = np.arange(lo, hi)
        p = spf[lo:hi].astype(np.int64)
        m = n // p
        pk[lo:hi] = np.where(spf[m] == p, pk[m] * p, p)
    return pk


def build_coefficients(spec: EulerProductSpec, limit: int, cap: int = DEFAULT_SIEVE_CAP) -> CoefficientTable:
    """Fill alpha, mu_F, a_F, g and phi(., F) for 1..limit."""
    st = sieve(limit, cap)
    spf = st.spf
    pk = _prime_power_part(spf, limit)
    names = ("alpha", "muF", "aF", "gcoef", "assoc_totient")
    tabs = {k: np.zeros(limit + 1, dtype=complex) for k in names}
    for t in tabs.values():
        t[1] = 1

    ps = st.primes()
    R = spec.roots_at(ps)
    pf = ps.astype(float)
    local = np.prod(1 - R / pf[:, None], axis=1)  # 1/F_p(1)
    e1 = -R.sum(axis=1)  # c_1
    tabs["alpha"][ps] = -pf * (1 - local)
    tabs["muF"][ps] = e1
    tabs["aF"][ps] = -e1
    tabs["gcoef"][ps] = pf + e1
    tabs["assoc_totient"][ps] = pf * local

    # higher prime powers only occur for p <= sqrt(limit)
    for i in range(len(ps)):
        p = int(ps[i])
        if p * p > limit:
            break
        kmax = int(math.log(limit) / math.log(p)) + 1
        while p**kmax > limit:
            kmax -= 1
        c = _signed_elementary(R[i])
        h = _complete_homogeneous(R[i], kmax)
        for k in range(2, kmax + 1):
            q = p**k
            tabs["muF"][q] = c[k] if k <= spec.degree else 0
            tabs["aF"][q] = h[k]
            tabs["gcoef"][q] = sum(c[j] * p ** (k - j) for j in range(min(k, spec.degree) + 1))
            tabs["assoc_totient"][q] = q * local[i]

    for lo, hi in _doubling_blocks(limit):
        n = np.arange(lo, hi)
        q = pk[lo:hi]
        comp = q != n
        n, q = n[comp], q[comp]
        m = n // q
        for t in tabs.values():
            t[n] = t[q] * t[m]
    return CoefficientTable(spec=spec, limit=limit, **tabs)


_TABLE_CACHE: list[CoefficientTable] = []
_CACHE_SIZE = 6


def coefficient_table(spec: EulerProductSpec, limit: int) -> CoefficientTable:
    """Cached table covering at least ``limit``."""
    for t in _TABLE_CACHE:
        if t.spec == spec and t.limit >= limit:
            return t
    t = build_coefficients(spec, max(limit, 16))
    _TABLE_CACHE.insert(0, t)
    del _TABLE_CACHE[_CACHE_SIZE:]
    return t


def dirichlet_convolve(f: np.ndarray, g: np.ndarray, limit: int) -> np.ndarray:
    """(f * g)(n) for n <= limit by direct divisor enumeration."""
    out = np.zeros(limit + 1, dtype=np.result_type(f, g))
    for d in range(1, limit + 1):
        m = np.arange(1, limit // d + 1)
        out[d * m] += f[d] * g[m]
    return out
