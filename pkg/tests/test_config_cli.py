import csv
import json
import os

import numpy as np
import pytest

from npshell.cli import main
from npshell.config import parse_config, serialize_config
from npshell.errors import ConfigError

BASE_CONFIG = """
[geometry]
r1 = 1.0
r2 = 2.0
delta1 = 1.0
delta2 = 1.0
eps1 = 0.0
eps2 = 0.0
n = 96

[model]
omega_p = 9.06
gamma = 0.0
eps_m = 1.0

[output]
directory = out
prefix = run
n_report = 3
"""

SET1_CONFIG = """
[geometry]
r1 = 1.0
r2 = 2.0
delta1 = 1.0
delta2 = 1.0
eps1 = 0.01
eps2 = 0.01
n = 96
h1.cos = 4:0.5
h2.sin = 3:-1.0

[model]
omega_p = 9.06

[sweep]
variable = delta1
values = 1.0 0.5 0.25

[spectrum]
omega_min = 3.0
omega_max = 9.0
points = 120

[output]
prefix = set1
n_report = 2
"""


def write_config(tmp_path, text, name="cfg.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def read_csv(path):
    with open(path) as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [row for row in reader]
    return header, rows


def test_config_roundtrip():
    cfg = parse_config(SET1_CONFIG)
    assert cfg.h1_cos == ((4, 0.5),)
    assert cfg.h2_sin == ((3, -1.0),)
    assert cfg.sweep_values == (1.0, 0.5, 0.25)
    again = parse_config(serialize_config(cfg))
    assert again == cfg


def test_config_power_range():
    cfg = parse_config(BASE_CONFIG + "\n[sweep]\nvariable = delta1\n"
                       "m_start = 2\nm_end = -1\n")
    assert cfg.sweep_values == (4.0, 2.0, 1.0, 0.5)


def test_config_errors():
    with pytest.raises(ConfigError):
        parse_config("[geometry]\nr1 = banana\n")
    with pytest.raises(ConfigError):
        parse_config("[sweep]\nvariable = delta3\nvalues = 1\n")
    with pytest.raises(ConfigError):
        parse_config("[geometry]\nh1.cos = nonsense\n")


def test_cli_eigs(tmp_path):
    cfgfile = write_config(tmp_path, BASE_CONFIG)
    out = str(tmp_path / "out")
    assert main(["eigs", "--config", cfgfile, "--out", out]) == 0
    header, rows = read_csv(os.path.join(out, "run_eigs.csv"))
    assert header[:6] == ["n", "branch", "lambda", "lambda_tilde", "omega",
                          "omega_tilde"]
    assert "lambda_disk" in header
    first = rows[0]
    assert first[0] == "1" and first[1] == "+"
    assert abs(float(first[2]) - 0.25) < 1e-10
    assert abs(float(first[4]) - 4.53) < 1e-8
    # eps = 0: lambda == lambda_tilde
    for row in rows:
        assert abs(float(row[2]) - float(row[3])) < 1e-12


def test_cli_eigs_deterministic(tmp_path):
    cfgfile = write_config(tmp_path, BASE_CONFIG)
    outs = []
    for tag in ("a", "b"):
        out = str(tmp_path / tag)
        assert main(["eigs", "--config", cfgfile, "--out", out]) == 0
        with open(os.path.join(out, "run_eigs.csv"), "rb") as fh:
            outs.append(fh.read())
    assert outs[0] == outs[1]


def test_cli_sweep_monotone(tmp_path):
    cfgfile = write_config(tmp_path, SET1_CONFIG)
    out = str(tmp_path / "out")
    assert main(["sweep", "--config", cfgfile, "--out", out,
                 "--threads", "2"]) == 0
    header, rows = read_csv(os.path.join(out, "set1_sweep.csv"))
    assert header == ["sweep_value", "n", "omega_plus", "omega_tilde_plus",
                      "omega_minus", "omega_tilde_minus", "omega_reference"]
    n1 = [(float(r[0]), float(r[3]), float(r[5])) for r in rows
          if r[1] == "1"]
    n1.sort(reverse=True)   # decreasing delta1 = decreasing rho
    plus = [row[1] for row in n1]
    minus = [row[2] for row in n1]
    assert all(a > b for a, b in zip(plus, plus[1:]))
    assert all(a < b for a, b in zip(minus, minus[1:]))
    ref = 9.06 / np.sqrt(2.0)
    assert all(abs(float(r[6]) - ref) < 1e-12 for r in rows)


EPS_SWEEP_CONFIG = """
[geometry]
r1 = 1.0
r2 = 2.0
delta1 = 8.0
delta2 = 32.0
n = 96
h1.cos = 6:-1.0
h2.sin = 4:-1.0

[model]
omega_p = 9.06

[sweep]
variable = eps
values = 0.01 0.05

[output]
prefix = eps
n_report = 3
"""


def test_cli_eps_sweep_splitting_linear(tmp_path):
    # splitting |omega_tilde - omega| grows linearly in eps: the extremal
    # gap at eps = 0.05 is 5x (+-20%) the gap at eps = 0.01
    cfgfile = write_config(tmp_path, EPS_SWEEP_CONFIG)
    out = str(tmp_path / "out")
    assert main(["sweep", "--config", cfgfile, "--out", out]) == 0
    _, rows = read_csv(os.path.join(out, "eps_sweep.csv"))
    gaps = {}
    for r in rows:
        eps = float(r[0])
        gap = max(abs(float(r[3]) - float(r[2])),
                  abs(float(r[5]) - float(r[4])))
        gaps[eps] = max(gaps.get(eps, 0.0), gap)
    ratio = gaps[0.05] / gaps[0.01]
    assert 4.5 <= ratio <= 5.5


def test_cli_spectrum(tmp_path):
    cfg_text = SET1_CONFIG.replace("values = 1.0 0.5 0.25", "values = 1.0 0.5")
    cfgfile = write_config(tmp_path, cfg_text)
    out = str(tmp_path / "out")
    assert main(["spectrum", "--config", cfgfile, "--out", out]) == 0
    files = sorted(os.listdir(out))
    assert "set1_spectrum_1.csv" in files
    assert "set1_spectrum_0.5.csv" in files
    assert "set1_spectrum.gp" in files
    header, rows = read_csv(os.path.join(out, "set1_spectrum_1.csv"))
    assert header == ["omega", "intensity"]
    assert len(rows) == 120
    assert all(float(r[1]) >= 0.0 for r in rows)


def test_cli_validate_pass(tmp_path):
    cfgfile = write_config(tmp_path, BASE_CONFIG)
    out = str(tmp_path / "out")
    assert main(["validate", "--config", cfgfile, "--out", out]) == 0
    with open(os.path.join(out, "run_validate.json")) as fh:
        report = json.load(fh)
    assert report["passed"]
    names = {c["check"] for c in report["checks"]}
    assert {"disk_eigenvalue_oracle", "scale_invariance",
            "calderon_residual_base", "jump_relation",
            "radius_perturbation_oracle",
            "perturbation_convergence_slope"} <= names


def test_cli_validate_broken_separation(tmp_path):
    broken = BASE_CONFIG.replace("delta1 = 1.0", "delta1 = 4.0")
    cfgfile = write_config(tmp_path, broken)
    out = str(tmp_path / "out")
    assert main(["validate", "--config", cfgfile, "--out", out]) == 1
    with open(os.path.join(out, "run_validate.json")) as fh:
        report = json.load(fh)
    assert not report["passed"]
    assert "geometry-degenerate" in report["checks"][0]["diagnostic"]


def test_cli_eigs_degenerate_geometry_is_config_error(tmp_path):
    broken = BASE_CONFIG.replace("delta1 = 1.0", "delta1 = 4.0")
    cfgfile = write_config(tmp_path, broken)
    assert main(["eigs", "--config", cfgfile,
                 "--out", str(tmp_path / "o")]) == 2


def test_cli_bad_config_exit_code(tmp_path):
    cfgfile = write_config(tmp_path, "[geometry]\nr1 = -2\n")
    assert main(["eigs", "--config", cfgfile]) == 2
    assert main(["eigs", "--config", str(tmp_path / "missing.ini")]) == 2


def test_cli_sweep_requires_sweep_section(tmp_path):
    cfgfile = write_config(tmp_path, BASE_CONFIG)
    assert main(["sweep", "--config", cfgfile,
                 "--out", str(tmp_path / "o")]) == 2
