"""Riemann zeta, Dirichlet L-functions and products of them; zero tables."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from .arith import EulerProductSpec, RealCharacter
from .errors import DomainError, PoleError, UnsupportedSpecError, ZeroFileError
from .special import digamma_cx, log_sin_pi, loggamma_cx

_BERNOULLI = [Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
              Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510),
              Fraction(43867, 798), Fraction(-174611, 330), Fraction(854513, 138),
              Fraction(-236364091, 2730), Fraction(8553103, 6),
              Fraction(-23749461029, 870), Fraction(8615841276005, 14322)]
# B_{2j} / (2j)!
_EM_COEF = np.array([float(b / math.factorial(2 * j + 2)) for j, b in enumerate(_BERNOULLI)])


@dataclass(frozen=True)
class EvalConfig:
    M: int = 20  # minimum number of directly summed terms
    B: int = 30  # Bernoulli order of the correction
    h: float = 1e-5  # derivative step

    def __post_init__(self):
        if self.M < 10:
            raise DomainError("Euler-Maclaurin needs M >= 10")
        if self.B % 2 or not 2 <= self.B <= 30:
            raise DomainError("Bernoulli order must be even and within [2, 30]")
        if not self.h > 0:
            raise DomainError("derivative step must be positive")


DEFAULT_EVAL = EvalConfig()
_BLOCK = 2048


def _as_cx(s) -> np.ndarray:
    return np.atleast_1d(np.asarray(s, dtype=complex))


def _ret(val: np.ndarray, like):
    return complex(val[0]) if np.ndim(like) == 0 else val.reshape(np.shape(like))


def _hurwitz_block(s: np.ndarray, a: float, cfg: EvalConfig) -> np.ndarray:
    N = max(cfg.M, int(0.5 * np.max(np.abs(s))) + 30)
    logn = np.log(np.arange(N) + a)
    direct = np.exp(-np.outer(s, logn)).sum(axis=1)
    w = N + a
    lw = math.log(w)
    tail = np.exp((1 - s) * lw) / (s - 1) + 0.5 * np.exp(-s * lw)
    poch = s.copy()  # (s)_{2j-1}
    for j in range(cfg.B // 2):
        tail = tail + _EM_COEF[j] * poch * np.exp(-(s + 2 * j + 1) * lw)
        poch = poch * (s + 2 * j + 1) * (s + 2 * j + 2)
    return direct + tail


def hurwitz_zeta(s, a: float, cfg: EvalConfig = DEFAULT_EVAL):
    """zeta(s, a) for 0 < a <= 1 by Euler-Maclaurin summation."""
    if not 0 < a <= 1:
        raise DomainError("Hurwitz parameter must lie in (0, 1]")
    ss = _as_cx(s)
    if np.any(ss == 1):
        raise PoleError("Hurwitz zeta has a pole at s = 1")
    out = np.empty(ss.shape, dtype=complex)
    flat = ss.ravel()
    res = out.ravel()
    for i in range(0, flat.size, _BLOCK):
        res[i:i + _BLOCK] = _hurwitz_block(flat[i:i + _BLOCK], a, cfg)
    return _ret(res, s)


_LOG2 = math.log(2.0)
_LOGPI = math.log(math.pi)


def zeta_cx(s, cfg: EvalConfig = DEFAULT_EVAL):
    """Riemann zeta; the functional equation serves Re s < -1."""
    ss = _as_cx(s).ravel()
    if np.any(ss == 1):
        raise PoleError("zeta has a pole at s = 1")
    out = np.empty(ss.shape, dtype=complex)
    left = ss.real < -1
    if np.any(~left):
        out[~left] = hurwitz_zeta(ss[~left], 1.0, cfg)
    if np.any(left):
        sl = ss[left]
        at_trivial = (sl.imag == 0) & (sl.real % 2 == 0)
        logf = sl * _LOG2 + (sl - 1) * _LOGPI + log_sin_pi(np.where(at_trivial, 0.5, sl / 2)) \
            + loggamma_cx(1 - sl)
        val = np.exp(logf) * hurwitz_zeta(1 - sl, 1.0, cfg)
        out[left] = np.where(at_trivial, 0.0, val)
    return _ret(out, s)


def dirichlet_L(s, chi: RealCharacter, cfg: EvalConfig = DEFAULT_EVAL):
    """L(s, chi) = q^-s sum_a chi(a) zeta(s, a/q); reflected for Re s < -1."""
    ss = _as_cx(s).ravel()
    q = chi.modulus
    out = np.empty(ss.shape, dtype=complex)
    left = ss.real < -1

    def direct(x):
        acc = np.zeros(x.shape, dtype=complex)
        one = x == 1
        y = np.where(one, 2.0, x)  # the Hurwitz poles cancel at s = 1; that point is filled below
        for r in range(1, q):
            c = chi(r)
            if c:
                acc = acc + c * hurwitz_zeta(y, r / q, cfg)
        val = np.exp(-y * math.log(q)) * acc
        if np.any(one):
            val[one] = -math.fsum(chi(r) * digamma_cx(r / q).real for r in range(1, q)) / q
        return val

    if np.any(~left):
        out[~left] = direct(ss[~left])
    if np.any(left):
        # primitive real character: root number 1
        par = 0 if chi(q - 1) == 1 else 1
        sl = ss[left]
        logf = (0.5 - sl) * math.log(q / math.pi) + loggamma_cx((1 - sl + par) / 2) \
            - loggamma_cx((sl + par) / 2)
        out[left] = np.exp(logf) * direct(1 - sl)
    return _ret(out, s)


def F_eval(spec: EulerProductSpec, s, cfg: EvalConfig = DEFAULT_EVAL):
    """Product of the primitive factors making up the spec."""
    if not spec.factors:
        raise UnsupportedSpecError(f"{spec.name} has no analytic factorization")
    val = np.ones(_as_cx(s).shape, dtype=complex)
    for fac in spec.factors:
        if fac[0] == "zeta":
            val = val * _as_cx(zeta_cx(s, cfg))
        elif fac[0] == "L":
            val = val * _as_cx(dirichlet_L(s, RealCharacter(fac[1]), cfg))
        else:
            raise UnsupportedSpecError(f"unknown factor {fac!r}")
    return _ret(val.ravel(), s)


def F_prime_at(spec: EulerProductSpec, rho, cfg: EvalConfig = DEFAULT_EVAL,
               neighbours: np.ndarray | None = None):
    """Derivative by central differences at steps h and h/2, one Richardson level."""
    r = _as_cx(rho).ravel()
    if neighbours is not None:
        for x in r:
            d = np.abs(np.asarray(neighbours) - x.imag)
            d = d[d > 0]
            if d.size and d.min() < 1e-6:
                warnings.warn(f"zero near {x} is within 1e-6 of another ordinate; derivative unreliable")
    h = cfg.h
    pts = np.concatenate([r + h, r - h, r + h / 2, r - h / 2])
    v = _as_cx(F_eval(spec, pts, cfg)).reshape(4, -1)
    d1 = (v[0] - v[1]) / (2 * h)
    d2 = (v[2] - v[3]) / h
    return _ret((4 * d2 - d1) / 3, rho)


# --- zero tables ---------------------------------------------------------------

@dataclass(frozen=True)
class ZeroTable:
    ordinates: np.ndarray
    label: str

    @property
    def count(self) -> int:
        return len(self.ordinates)

    def __post_init__(self):
        o = self.ordinates
        if o.size and (np.any(o <= 0) or np.any(np.diff(o) <= 0)):
            raise ZeroFileError("ordinates must be positive and strictly increasing")
        if self.label == "zeta" and o.size and not 14.1347 <= o[0] <= 14.1348:
            raise ZeroFileError("first zeta ordinate outside [14.1347, 14.1348]; wrong file?")

    def up_to(self, T: float) -> np.ndarray:
        return self.ordinates[self.ordinates < T]


def parse_zeros(text: str, label: str | None = None) -> ZeroTable:
    vals = []
    found_label = None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.lower().startswith("label:"):
                found_label = body.split(":", 1)[1].strip()
            continue
        try:
            v = float(line)
        except ValueError:
            raise ZeroFileError(f"cannot parse {line!r} as an ordinate", no) from None
        if not math.isfinite(v):
            raise ZeroFileError("non-finite ordinate", no)
        if vals and v <= vals[-1]:
            raise ZeroFileError("ordinates not strictly increasing", no)
        vals.append(v)
    return ZeroTable(np.array(vals, dtype=float), label or found_label or "unlabelled")


def load_zeros(path, label: str | None = None) -> ZeroTable:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ZeroFileError(f"cannot read {path}: {exc}") from exc
    return parse_zeros(text, label)


PACKAGED_ZEROS = {"zeta": "zeta_zeros.txt", "L_chi-4": "chi_m4_zeros.txt"}


def packaged_zeros(label: str) -> ZeroTable:
    name = PACKAGED_ZEROS[label]
    text = resources.files("artifact").joinpath("data").joinpath(name).read_text()
    return parse_zeros(text, label)


def merge_zero_tables(tables: list[ZeroTable], label: str) -> ZeroTable:
    o = np.sort(np.concatenate([t.ordinates for t in tables]))
    if np.any(np.diff(o) < 1e-6):
        raise ZeroFileError("merged tables contain a repeated ordinate (multiple zero)")
    return ZeroTable(o, label)


def zeros_for_spec(spec: EulerProductSpec, tables: dict[str, ZeroTable] | None = None) -> ZeroTable:
    """Zero table of a product spec: the union of its factors' tables."""
    tables = tables or {}
    parts = []
    for fac in spec.factors:
        key = "zeta" if fac[0] == "zeta" else f"L_chi{fac[1]}"
        parts.append(tables[key] if key in tables else packaged_zeros(key))
    if len(parts) == 1:
        return parts[0]
    # a shared coverage height keeps the union honest
    top = min(p.ordinates[-1] for p in parts)
    return merge_zero_tables([ZeroTable(p.ordinates[p.ordinates <= top], p.label) for p in parts], spec.name)


GROUPING_DELTA = 1.0


def grouping_heights(table: ZeroTable, T: float) -> list[float]:
    """Midpoints between consecutive ordinates below T, then one height above the last."""
    used = table.up_to(T)
    if used.size == 0:
        return []
    mids = list((used[:-1] + used[1:]) / 2)
    last = used[-1] + GROUPING_DELTA
    nxt = table.ordinates[table.ordinates > used[-1]]
    if nxt.size:
        last = min(last, (used[-1] + nxt[0]) / 2)
    return [float(m) for m in mids] + [float(last)]


def check_grouping_height(table: ZeroTable, T: float, min_gap: float = 1e-3) -> None:
    o = table.ordinates
    if not T > 0:
        raise DomainError("grouping height must be positive")
    if o.size and np.min(np.abs(o - T)) < min_gap:
        raise DomainError(f"height {T} is too close to a zero ordinate")
    if o.size and T > o[-1] + GROUPING_DELTA:
        raise DomainError(f"height {T} exceeds the coverage of table {table.label!r}")
