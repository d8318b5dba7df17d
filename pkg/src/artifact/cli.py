"""Command-line entry point: ``artifact <command> --config PATH [--out PATH] [--format csv|json] [--threads N]``.

Exit codes: 0 all residuals within tolerance, 2 tolerance miss, 3 validation
error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import special
from .arith import EulerProductSpec, RealCharacter
from .config import RunConfig, load_config
from .errors import ArtifactError, ConfigError, TruncationError
from .mellin import mellin_check, perron_kernel
from .remainder import decomposition_report, riesz_mean, volterra_residual
from .zerosums import (ContourSpec, contour_for, f1_continuation, f1_integral, fe_residual,
                       identity_residual_lower, identity_residual_upper)

EXIT_OK, EXIT_TOLERANCE, EXIT_VALIDATION, EXIT_IO = 0, 2, 3, 4


@dataclass
class Report:
    command: str
    columns: list[str]
    rows: list[list]
    tolerance: float

    @property
    def residuals(self) -> list[float]:
        i = self.columns.index("residual")
        return [r[i] for r in self.rows]

    @property
    def max_residual(self) -> float:
        res = self.residuals
        return max(res) if res else 0.0

    @property
    def passed(self) -> bool:
        return all(math.isfinite(r) and r <= self.tolerance for r in self.residuals)

    def summary(self) -> dict:
        return {"command": self.command, "n_points": len(self.rows), "max_residual": self.max_residual,
                "tolerance": self.tolerance, "passed": self.passed}


def _cx(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _ordered_map(fn, items, threads: int) -> list:
    # results come back in input order whatever the pool size, so output is thread-count independent
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _need_spec(cfg: RunConfig, command: str) -> EulerProductSpec:
    if isinstance(cfg.target, RealCharacter):
        raise ConfigError(f"spec.name: {command} needs an Euler product, not a bare character")
    return cfg.target


# --- commands ---------------------------------------------------------------------

def cmd_decompose(cfg: RunConfig, threads: int) -> Report:
    sec = cfg.section("decompose")
    tol = sec.positive("tolerance", 1e-6 if cfg.spec_name == "gaussian" else 1e-8)
    if cfg.grid.size == 0:
        raise ConfigError("grid: the x-grid is empty (give grid.points or grid.count > 0)")
    variant = sec.str("variant", None)

    def row(x):
        r = decomposition_report(cfg.target, float(x), variant, cfg.policy)
        return [r.x, r.E, r.f, r.g, r.E_AR, r.E_AN, r.residual, r.n_terms, r.variant]

    cols = ["x", "E", "f", "g", "E_AR", "E_AN", "residual", "n_terms", "variant"]
    return Report("decompose", cols, _ordered_map(row, cfg.grid, threads), tol)


def cmd_volterra(cfg: RunConfig, threads: int) -> Report:
    sec = cfg.section("volterra")
    xs = sec.floats("x", [0.5, 1.0, 25.5, 100.0])
    As = sec.complexes("A", [0.0, 1.0, -2.5 + 1j])
    pairs = [(x, A) for x in xs for A in As]

    def row(p):
        r = volterra_residual(cfg.target, *p)
        return [r.x, *_cx(r.A), *_cx(r.lhs), *_cx(r.rhs), r.residual]

    cols = ["x", "A_re", "A_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual"]
    return Report("volterra", cols, _ordered_map(row, pairs, threads), sec.positive("tolerance", 1e-9))


def cmd_riesz(cfg: RunConfig, threads: int) -> Report:
    spec = _need_spec(cfg, "riesz")
    sec = cfg.section("riesz")
    xs = sec.floats("x", None) or list(cfg.grid)
    if not xs:
        raise ConfigError("riesz.x: no evaluation points (give riesz.x or a grid)")
    pairs = [(k, x) for k in sec.ints("k", [1, 2]) for x in xs]

    def row(p):
        r = riesz_mean(spec, *p)
        return [r.x, r.k, r.way1, r.way2, r.difference]

    cols = ["x", "k", "direct", "piecewise", "residual"]
    return Report("riesz", cols, _ordered_map(row, pairs, threads), sec.positive("tolerance", 1e-9))


def cmd_whittaker(cfg: RunConfig, threads: int) -> Report:
    sec = cfg.section("whittaker")
    grid = special.route_grid()

    def route(p):
        r = special.route_agreement(p)
        return ["route", *_cx(p.k), *_cx(p.mu), *_cx(p.z), *_cx(r.series), *_cx(r.barnes), r.difference]

    rows = _ordered_map(route, grid, threads)
    n_ode = sec.int("ode_points", 10)
    rng = np.random.default_rng(sec.int("seed", 0))
    for _ in range(n_ode):
        a = complex(*rng.uniform(-1, 1, 2))
        g = complex(rng.uniform(0.2, 1.5), rng.uniform(-1, 1))
        z = complex(*rng.uniform(-1, 1, 2))
        phi = complex(special.kummer_phi(a, g, z))
        rows.append(["kummer-ode", *_cx(a), *_cx(g), *_cx(z), *_cx(phi), 0.0, 0.0,
                     special.kummer_ode_residual(a, g, z)])
    cols = ["check", "k_re", "k_im", "mu_re", "mu_im", "z_re", "z_im",
            "value_re", "value_im", "reference_re", "reference_im", "residual"]
    return Report("whittaker", cols, rows, sec.positive("tolerance", 1e-8))


def _contour(cfg: RunConfig, spec, zeros) -> ContourSpec:
    over = {k: v for k, v in (("a", cfg.contour_a), ("b", cfg.contour_b)) if v is not None}
    return contour_for(spec, zeros, **over)


def cmd_zero_identity(cfg: RunConfig, threads: int) -> Report:
    spec = _need_spec(cfg, "zero-identity")
    sec = cfg.section("zero_identity")
    zs = sec.complexes("z", [1 + 2j, 0.5 + 4j])
    mirror = sec.bool("mirror", True)
    T = sec.float("T", None)
    zeros = cfg.zeros()
    contour = _contour(cfg, spec, zeros)
    jobs = [(z, False) for z in zs] + ([(z.conjugate(), True) for z in zs] if mirror else [])

    def row(job):
        z, lower = job
        fn = identity_residual_lower if lower else identity_residual_upper
        r = fn(spec, zeros, z, contour, T)
        return [*_cx(r.z), "lower" if lower else "upper", *_cx(r.lhs), *_cx(r.rhs), r.residual,
                r.zero_count, r.quad_height, r.series_cut, contour.a, contour.b]

    cols = ["z_re", "z_im", "side", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual",
            "zero_count", "quad_height", "series_cut", "contour_a", "contour_b"]
    return Report("zero-identity", cols, _ordered_map(row, jobs, threads), sec.positive("tolerance", 2e-3))


def cmd_continuation(cfg: RunConfig, threads: int) -> Report:
    """Continued f1 against direct quadrature where both exist, else against the doubled cut."""
    spec = _need_spec(cfg, "continuation")
    sec = cfg.section("continuation")
    zs = sec.complexes("z", [0.3 + 0.8j, 0.5 + 1j, 1 + 0.5j])
    a = cfg.contour_a if cfg.contour_a is not None else ContourSpec().a
    cut = cfg.series_cut

    def row(z):
        cont = f1_continuation(spec, z, cut, a)
        doubled = f1_continuation(spec, z, cut.doubled(), a)
        if z.imag > 0:
            direct = f1_integral(spec, z, ContourSpec(a=a)).value
            res, ref = abs(cont - direct), "direct"
        else:
            direct, res, ref = complex("nan+nanj"), abs(cont - doubled), "doubled-cut"
        return [*_cx(z), *_cx(cont), *_cx(doubled), *_cx(direct), ref, res, cut.M, a]

    cols = ["z_re", "z_im", "continued_re", "continued_im", "doubled_re", "doubled_im",
            "direct_re", "direct_im", "reference", "residual", "series_cut", "contour_a"]
    return Report("continuation", cols, _ordered_map(row, zs, threads), sec.positive("tolerance", 1e-4))


def cmd_fe_check(cfg: RunConfig, threads: int) -> Report:
    spec = _need_spec(cfg, "fe-check")
    sec = cfg.section("fe_check")
    zs = sec.complexes("z", [0.5 + 2j])
    T = sec.float("T", None)
    zeros = cfg.zeros()

    def row(z):
        r = fe_residual(spec, zeros, z, cfg.series_cut, T)
        return [*_cx(r.z), *_cx(r.lhs), *_cx(r.rhs), r.residual, r.zero_count, r.quad_height, r.series_cut]

    cols = ["z_re", "z_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual",
            "zero_count", "quad_height", "series_cut"]
    return Report("fe-check", cols, _ordered_map(row, zs, threads), sec.positive("tolerance", 5e-3))


def cmd_mellin(cfg: RunConfig, threads: int) -> Report:
    spec = _need_spec(cfg, "mellin")
    sec = cfg.section("mellin")
    ss = sec.complexes("s", [3.0, 2.5 + 1j])
    X = sec.int("X_cut", 10**5)

    def row(s):
        r = mellin_check(spec, s, X)
        return [*_cx(r.s), *_cx(r.lhs), *_cx(r.rhs), r.relative_residual, r.X_cut, r.tail_bound]

    cols = ["s_re", "s_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "X_cut", "tail_bound"]
    return Report("mellin", cols, _ordered_map(row, ss, threads), sec.positive("tolerance", 1e-3))


def cmd_perron(cfg: RunConfig, threads: int) -> Report:
    sec = cfg.section("perron")
    As = sec.floats("a", [0.5, 1.0, 2.0])
    c = sec.positive("c", 1.0)
    T = sec.positive("T", 1000.0)

    def row(a):
        r = perron_kernel(a, c, T)
        return [a, c, T, r.value, r.limit, abs(r.value - r.limit), r.error_estimate]

    cols = ["a", "c", "T", "value", "limit", "residual", "error_estimate"]
    return Report("perron", cols, _ordered_map(row, As, threads), sec.positive("tolerance", 1e-3))


COMMANDS = {
    "decompose": cmd_decompose, "volterra": cmd_volterra, "riesz": cmd_riesz,
    "whittaker": cmd_whittaker, "zero-identity": cmd_zero_identity, "continuation": cmd_continuation,
    "fe-check": cmd_fe_check, "mellin": cmd_mellin, "perron": cmd_perron,
}


# --- serialization ----------------------------------------------------------------

def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    return v


def render_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(report.columns)
    for r in report.rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def render_summary(report: Report) -> str:
    return json.dumps({k: _json_value(v) for k, v in report.summary().items()}, indent=2) + "\n"


def render_json(report: Report) -> str:
    body = {
        "summary": {k: _json_value(v) for k, v in report.summary().items()},
        "columns": report.columns,
        "rows": [[_json_value(v) for v in r] for r in report.rows],
    }
    return json.dumps(body, indent=2) + "\n"


def write_report(report: Report, fmt: str, out: str | None) -> None:
    if fmt == "json":
        text = render_json(report)
        if out:
            Path(out).write_text(text)
        else:
            sys.stdout.write(text)
        return
    if out:
        Path(out).write_text(render_csv(report), newline="")
        Path(out).with_suffix(".summary.json").write_text(render_summary(report))
    else:
        sys.stdout.write(render_csv(report))
        sys.stderr.write(render_summary(report))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="artifact", description="Verification sweeps for error-term identities.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", help="INI config file (default: $ARTIFACT_CONFIG_DIR/default.ini or the packaged one)")
    p.add_argument("--out", help="output path; CSV output also writes <out>.summary.json")
    p.add_argument("--format", choices=("csv", "json"), help="overrides output.format")
    p.add_argument("--threads", type=int, default=1)
    return p


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        cfg = load_config(args.config)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except ArtifactError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        report = COMMANDS[args.command](cfg, args.threads)
    except TruncationError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except OSError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    except ArtifactError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        write_report(report, args.format or cfg.output_format, args.out)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if report.passed else EXIT_TOLERANCE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
