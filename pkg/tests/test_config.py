import math

import numpy as np
import pytest

from artifact.arith import EulerProductSpec, RealCharacter
from artifact.config import CONFIG_DIR_ENV, format_complex, load_config, parse_complex, parse_config
from artifact.errors import ConfigError


@pytest.mark.parametrize("text, want", [
    ("1+2i", 1 + 2j), ("-2.5+i", -2.5 + 1j), ("2i", 2j), ("0.5 - 4i", 0.5 - 4j), ("3", 3), ("-i", -1j),
])
def test_parse_complex(text, want):
    assert parse_complex(text) == want


def test_format_complex_round_trips():
    for z in (1 + 2j, -0.1 - 1e-300j, math.pi - 3j):
        assert parse_complex(format_complex(z)) == z


def test_targets():
    assert isinstance(parse_config("[spec]\nname = character\ndiscriminant = 5\n[grid]\npoints = 2").target, RealCharacter)
    cfg = parse_config("[spec]\nname = gaussian\n[grid]\npoints = 2")
    assert isinstance(cfg.target, EulerProductSpec) and cfg.spec is cfg.target
    assert isinstance(parse_config("[spec]\nname = character\ndiscriminant = -4").spec, EulerProductSpec)


def test_grid_forms():
    cfg = parse_config("[grid]\npoints = 1, 2.5, 10")
    assert list(cfg.grid) == [1.0, 2.5, 10.0]
    cfg = parse_config("[grid]\ncount = 50\nintegers = 5\nlo = 1\nhi = 100\nseed = 3")
    assert cfg.grid.size == 50 and np.all(cfg.grid[:5] == np.round(cfg.grid[:5]))
    assert np.array_equal(cfg.grid, parse_config("[grid]\ncount = 50\nintegers = 5\nlo = 1\nhi = 100\nseed = 3").grid)


@pytest.mark.parametrize("text, field", [
    ("[spec]\nname = nope", "spec.name"),
    ("[spec]\nname = character", "spec.discriminant"),
    ("[spec]\nname = character\ndiscriminant = 4", "spec.discriminant"),
    ("[grid]\ncount = 0", "grid"),
    ("[grid]\ncount = 5\nlo = 3\nhi = 1", "grid.hi"),
    ("[grid]\npoints = 1, x", "grid.points"),
    ("[output]\nformat = xml", "output.format"),
    ("[zeros]\nzeta = missing.txt", "zeros.zeta"),
    ("[truncation]\ntarget_tol = -1", "truncation.target_tol"),
    ("[spec\nname = zeta", "<string>"),
])
def test_errors_name_the_field(text, field):
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert str(exc.value).startswith(field)


def test_booleans_and_case_sensitive_keys():
    cfg = parse_config("[zero_identity]\nmirror = false\nT = 40\n[truncation]\nN_terms = 100")
    sec = cfg.section("zero_identity")
    assert sec.bool("mirror") is False and sec.float("T") == 40
    assert cfg.policy.N_terms == 100
    with pytest.raises(ConfigError, match="zero_identity.mirror"):
        parse_config("[zero_identity]\nmirror = yes").section("zero_identity").bool("mirror")


def test_zero_paths_resolve_against_config_dir(tmp_path):
    (tmp_path / "z.txt").write_text("# label: zeta\n14.134725141734693\n21.022039638771555\n")
    (tmp_path / "run.ini").write_text("[zeros]\nzeta = z.txt\n")
    cfg = load_config(str(tmp_path / "run.ini"))
    assert cfg.zero_paths["zeta"] == tmp_path / "z.txt"


def test_packaged_default(monkeypatch):
    monkeypatch.delenv(CONFIG_DIR_ENV, raising=False)
    cfg = load_config()
    assert cfg.spec_name == "zeta" and cfg.grid.size == 200
    assert cfg.source == "<packaged default>"


def test_env_directory_fallback(monkeypatch, tmp_path):
    (tmp_path / "default.ini").write_text("[grid]\npoints = 4\n")
    (tmp_path / "other.ini").write_text("[grid]\npoints = 5\n")
    monkeypatch.setenv(CONFIG_DIR_ENV, str(tmp_path))
    monkeypatch.chdir(tmp_path.parent)
    assert list(load_config().grid) == [4.0]
    assert list(load_config("other.ini").grid) == [5.0]


def test_missing_file_is_an_os_error(tmp_path, monkeypatch):
    monkeypatch.delenv(CONFIG_DIR_ENV, raising=False)
    with pytest.raises(OSError):
        load_config(str(tmp_path / "absent.ini"))
