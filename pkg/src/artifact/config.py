"""Run configuration: INI-style key=value files with [section] headers.

Booleans are ``true``/``false``; complex numbers are written ``a+bi``; lists are
comma separated. Every validation failure names its field as ``section.key``.
"""

from __future__ import annotations

import configparser
import math
import os
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .arith import RealCharacter, EulerProductSpec, FEData, dirichlet_spec, gaussian_dedekind_spec, zeta_spec
from .errors import ArtifactError, ConfigError
from .lfunc import ZeroTable, load_zeros, zeros_for_spec
from .remainder import TruncationPolicy
from .zerosums import SeriesCut

CONFIG_DIR_ENV = "ARTIFACT_CONFIG_DIR"
DEFAULT_CONFIG_NAME = "default.ini"
SPEC_NAMES = ("zeta", "character", "dirichlet", "gaussian")
_IMAG_UNIT = re.compile(r"(^|[+-])j$")


def parse_complex(text: str) -> complex:
    s = text.strip().replace(" ", "")
    if s.endswith("i"):
        s = _IMAG_UNIT.sub(r"\g<1>1j", s[:-1] + "j")
    return complex(s)


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.17g}{'+' if z.imag >= 0 else '-'}{abs(z.imag):.17g}i"


class Section:
    """Typed read access to one section; errors carry the field path."""

    def __init__(self, parser: configparser.ConfigParser, name: str):
        self.name = name
        self._raw = parser[name] if parser.has_section(name) else {}

    def __contains__(self, key: str) -> bool:
        return key in self._raw

    def _get(self, key, default, convert, kind):
        if key not in self._raw:
            if default is ConfigError:
                raise ConfigError(f"{self.name}.{key}: required field missing")
            return default
        raw = self._raw[key]
        try:
            return convert(raw)
        except (ValueError, TypeError, ArtifactError) as exc:
            raise ConfigError(f"{self.name}.{key}: expected {kind}, got {raw!r} ({exc})") from None

    def str(self, key, default=ConfigError) -> str:
        return self._get(key, default, lambda v: v.strip(), "a string")

    def int(self, key, default=ConfigError) -> int:
        return self._get(key, default, lambda v: int(v.strip()), "an integer")

    def float(self, key, default=ConfigError) -> float:
        return self._get(key, default, _finite, "a finite number")

    def complex(self, key, default=ConfigError) -> complex:
        return self._get(key, default, parse_complex, "a complex number a+bi")

    def bool(self, key, default=ConfigError) -> bool:
        return self._get(key, default, _boolean, "true or false")

    def floats(self, key, default=ConfigError) -> list[float]:
        return self._get(key, default, lambda v: [_finite(t) for t in _items(v)], "a list of numbers")

    def complexes(self, key, default=ConfigError) -> list[complex]:
        return self._get(key, default, lambda v: [parse_complex(t) for t in _items(v)], "a list of a+bi values")

    def ints(self, key, default=ConfigError) -> list[int]:
        return self._get(key, default, lambda v: [int(t) for t in _items(v)], "a list of integers")

    def positive(self, key, default=ConfigError) -> float:
        v = self.float(key, default)
        if v is not None and not v > 0:
            raise ConfigError(f"{self.name}.{key}: must be positive")
        return v


def _items(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _finite(text: str) -> float:
    v = float(text.strip())
    if not math.isfinite(v):
        raise ValueError("not finite")
    return v


def _boolean(text: str) -> bool:
    t = text.strip().lower()
    if t not in ("true", "false"):
        raise ValueError("booleans are spelled true or false")
    return t == "true"


@dataclass
class RunConfig:
    source: str
    spec_name: str
    target: object  # EulerProductSpec or RealCharacter
    policy: TruncationPolicy
    grid: np.ndarray
    series_cut: SeriesCut
    contour_a: float | None
    contour_b: float | None
    zero_paths: dict[str, Path] = field(default_factory=dict)
    output_format: str = "csv"
    parser: configparser.ConfigParser | None = None

    def section(self, name: str) -> Section:
        return Section(self.parser, name)

    @property
    def spec(self) -> EulerProductSpec:
        if isinstance(self.target, RealCharacter):
            return dirichlet_spec(self.target)
        return self.target

    def zeros(self) -> ZeroTable:
        tables = {key: load_zeros(path, key) for key, path in self.zero_paths.items()}
        return zeros_for_spec(self.spec, tables)


def _build_target(sec: Section):
    name = sec.str("name", "zeta")
    if name not in SPEC_NAMES:
        raise ConfigError(f"spec.name: expected one of {', '.join(SPEC_NAMES)}, got {name!r}")
    if name == "zeta":
        return name, zeta_spec()
    if name == "gaussian":
        return name, gaussian_dedekind_spec(sec.positive("Q", 1 / math.pi))
    chi = sec._get("discriminant", ConfigError, lambda v: RealCharacter(int(v)), "a non-square discriminant")
    if name == "character":
        return name, chi
    fe = None
    if "Q" in sec:
        fe = sec._get("Q", None, lambda v: FEData(_finite(v), sec.complex("omega", 1.0),
                                                  sec.float("mu", 0.0)), "functional-equation data")
    return name, dirichlet_spec(chi, fe)


def _build_grid(sec: Section) -> np.ndarray:
    if "points" in sec:
        xs = np.array(sec.floats("points"), dtype=float)
    else:
        n = sec.int("count", 0)
        lo, hi = sec.float("lo", 1.0), sec.float("hi", 1e4)
        if not hi > lo:
            raise ConfigError("grid.hi: must exceed grid.lo")
        rng = np.random.default_rng(sec.int("seed", 0))
        xs = rng.uniform(lo, hi, n)
        k = sec.int("integers", 0)
        if k:
            if not 0 <= k <= n:
                raise ConfigError("grid.integers: must lie in [0, grid.count]")
            xs[:k] = rng.integers(math.ceil(lo), math.floor(hi) + 1, k)
    if xs.size == 0:
        raise ConfigError("grid: the x-grid is empty (give grid.points or grid.count > 0)")
    return xs


def _build_policy(sec: Section) -> TruncationPolicy:
    N, tol, mode = sec.int("N_terms", None), sec.positive("target_tol", 1e-9), sec.str("tail_mode", "exact-closure")
    try:
        return TruncationPolicy(N, tol, mode)
    except ArtifactError as exc:
        raise ConfigError(f"truncation: {exc}") from None


def _zero_paths(sec: Section, base: Path) -> dict[str, Path]:
    out = {}
    for key, label in (("zeta", "zeta"), ("chi_m4", "L_chi-4")):
        if key in sec:
            p = Path(sec.str(key))
            p = p if p.is_absolute() else base / p
            if not p.is_file():
                raise ConfigError(f"zeros.{key}: file {p} does not exist")
            out[label] = p
    return out


def parse_config(text: str, source: str = "<string>", base: Path | None = None) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str  # keys are case sensitive (Q, N_terms)
    try:
        parser.read_string(text, source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    sec = lambda n: Section(parser, n)
    name, target = _build_target(sec("spec"))
    cut = sec("contour").int("series_cut", SeriesCut().M)
    try:
        series_cut = SeriesCut(cut)
    except ArtifactError as exc:
        raise ConfigError(f"contour.series_cut: {exc}") from None
    fmt = sec("output").str("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"output.format: expected csv or json, got {fmt!r}")
    grid = _build_grid(sec("grid")) if parser.has_section("grid") else np.array([])
    return RunConfig(
        source=source, spec_name=name, target=target, policy=_build_policy(sec("truncation")),
        grid=grid, series_cut=series_cut,
        contour_a=sec("contour").float("a", None), contour_b=sec("contour").float("b", None),
        zero_paths=_zero_paths(sec("zeros"), base or Path.cwd()),
        output_format=fmt, parser=parser,
    )


def resolve_config_path(path: str | None) -> Path | None:
    """An explicit path wins; otherwise look in the config directory named by the environment."""
    if path is not None:
        p = Path(path)
        env = os.environ.get(CONFIG_DIR_ENV)
        if not p.exists() and not p.is_absolute() and env:
            return Path(env) / p
        return p
    env = os.environ.get(CONFIG_DIR_ENV)
    if env:
        return Path(env) / DEFAULT_CONFIG_NAME
    return None


def load_config(path: str | None = None) -> RunConfig:
    """Read a config file; with no path, fall back to the packaged default."""
    p = resolve_config_path(path)
    if p is None:
        text = resources.files("artifact").joinpath("data", DEFAULT_CONFIG_NAME).read_text()
        return parse_config(text, "<packaged default>")
    text = p.read_text()  # OSError propagates: the CLI maps it to an I/O failure
    return parse_config(text, str(p), p.parent)
