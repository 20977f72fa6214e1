import csv
import math
import time
from pathlib import Path

import pytest

import nucoherence as nc
from nucoherence import cli, sweep
from nucoherence.cli import main, parse_config, run_sweep, write_csv

RECIPES = sorted((Path(__file__).resolve().parent.parent / "recipes").glob("*.conf"))


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def test_empty_config_gives_defaults():
    cfg = parse_config("")
    assert cfg.params == nc.default_params()
    assert cfg.sweep.energy == nc.DEFAULT_ENERGY
    assert cfg.wave_packet == nc.WavePacketConfig()
    assert cfg.potentials == cli.DEFAULT_POTENTIALS
    assert cfg.sweep.axis.axis is nc.Axis.BASELINE
    assert cfg.sweep.flavor is nc.Flavor.E


def test_zero_angle_accepted():
    assert parse_config("theta12_deg = 0").params.theta12 == 0.0


def test_comments_and_repeated_potentials():
    cfg = parse_config("# header\npotential_eV = 1e-14  # first\n\npotential_eV = 0\nmode = pw\n")
    assert cfg.potentials == (1e-14, 0.0)
    assert cfg.sweep.mode is nc.Mode.PLANE_WAVE


def test_points_below_two_names_points():
    with pytest.raises(nc.ConfigError) as info:
        parse_config("scan = baseline\npoints = 1")
    assert info.value.key == "points"
    assert info.value.lineno == 2
    assert "points" in str(info.value)


@pytest.mark.parametrize(
    "text, lineno, fragment",
    [
        ("energy_eV = 1e10\ncolour = red\nshade = 2", 2, "colour (line 2), shade (line 3)"),
        ("energy_eV 1e10", 1, "key = value"),
        ("\n\nrho = ", 3, "key = value"),
        ("energy_eV = fast", 1, "not a number"),
        ("energy_eV = -1", 1, "out of range"),
        ("theta13_deg = 90", 1, "angle"),
        ("min = 5\nmax = 1", 2, "must exceed"),
        ("spacing = log\nmin = 0", 2, "log spacing"),
        ("flavor = sterile", 1, "flavor"),
        ("points = 2.5", 1, "integer"),
        ("potential_eV = -1e-14", 1, "potential_eV"),
    ],
)
def test_config_errors_carry_line_numbers(text, lineno, fragment):
    with pytest.raises(nc.ConfigError) as info:
        parse_config(text)
    assert info.value.lineno == lineno
    assert str(info.value).startswith(f"line {lineno}: ")
    assert fragment in str(info.value)


def test_overrides_win_over_text():
    cfg = parse_config("energy_eV = 1e10\npotential_eV = 1e-14", {"energy_eV": "2e10", "potential_eV": ["0", "1e-12"]})
    assert cfg.sweep.energy == 2e10
    assert cfg.potentials == (0.0, 1e-12)


def test_write_csv_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    write_csv(cli.Table(["a", "b"]), path)
    assert path.read_text() == "a,b\n"


def test_write_csv_one_row_and_infinity(tmp_path):
    path = tmp_path / "one.csv"
    write_csv(cli.Table(["V_eV", "L"], [[0.1, math.inf]]), path)
    lines = path.read_text().splitlines()
    assert len(lines) == 2
    assert lines[1] == "1.0000000000000001e-01,inf"
    assert float(lines[1].split(",")[0]) == 0.1


def test_linear_scan_matches_direct_calls():
    cfg = parse_config("scan = baseline\nmin = 1e9\nmax = 2e9\npoints = 2\nspacing = linear\npotential_eV = 0\nmode = wp")
    table = run_sweep(cfg)
    assert table.header == cli.PROB_COLUMNS
    assert len(table.rows) == 2
    for row, L in zip(table.rows, (1e9, 2e9)):
        assert row[:5] == [L, 0.0, nc.DEFAULT_ENERGY, "wp", "neutrino"]
        for b in range(3):
            want = nc.vacuum_probability(cfg.params, cfg.wave_packet, "e", b, L, nc.DEFAULT_ENERGY)
            assert row[5 + b] == pytest.approx(want, abs=1e-12)


def test_row_order_is_potential_then_axis():
    cfg = parse_config("points = 3\npotential_eV = 1e-14\npotential_eV = 0")
    table = run_sweep(cfg, "l1")
    assert table.header == cli.L1_COLUMNS
    assert [r[1] for r in table.rows] == [1e-14] * 3 + [0.0] * 3
    xs = [r[0] for r in table.rows[:3]]
    assert xs == sorted(xs)


def test_special_potentials_table():
    table = cli.report_special_potentials(parse_config(""))
    labels = [r[0] for r in table.rows]
    assert labels == ["resonance_theta12", "resonance_theta13", "zero_dv21", "zero_dv21", "zero_dv32"]
    assert table.rows[1][1] == pytest.approx(2.577e-14, rel=5e-3)
    assert all(abs(r[2]) < 1e-12 for r in table.rows[:2])


def test_lengths_table_emits_inf(tmp_path):
    v = nc.find_infinite_coherence_potentials(nc.default_params(), nc.DEFAULT_ENERGY)[-1][1]
    out = tmp_path / "lengths.csv"
    assert main(["lengths", "--potential", repr(v), "-o", str(out)]) == cli.EXIT_OK
    rows = read_csv(out)
    assert rows[0] == cli.LENGTH_COLUMNS
    assert [r[1] for r in rows[1:]] == ["21", "31", "32"]
    assert rows[3][3] == "inf"


def test_exit_codes(tmp_path, capsys):
    out = tmp_path / "x.csv"
    assert main(["prob-scan", "--points", "2", "-o", str(out)]) == cli.EXIT_OK
    assert len(read_csv(out)) == 1 + 2 * len(cli.DEFAULT_POTENTIALS)
    assert main(["prob-scan", "--points", "1"]) == cli.EXIT_CONFIG
    assert "points" in capsys.readouterr().err
    assert main(["prob-scan", "-c", str(tmp_path / "missing.conf")]) == cli.EXIT_CONFIG
    assert main(["prob-scan", "--points", "2", "-o", str(tmp_path / "no" / "dir.csv")]) == cli.EXIT_IO
    assert main(["special-potentials", "--energy", "1e6"]) == cli.EXIT_NUMERICAL
    assert "numerical error" in capsys.readouterr().err


def test_degenerate_error_names_axis_value(monkeypatch, capsys):
    monkeypatch.setattr(sweep, "DEGENERACY_FLOOR", 1e300)
    code = main(["l1-scan", "--scan", "potential", "--min", "1e-15", "--max", "1e-14", "--points", "3"])
    assert code == cli.EXIT_NUMERICAL
    err = capsys.readouterr().err
    assert "4E*E2m - (l1+l2)" in err
    # the first grid point, as produced by logspace
    assert "at axis value 1.0000000000000001e-15" in err


def test_stdout_output(capsys):
    assert main(["l1-scan", "--points", "2", "--potential", "0"]) == cli.EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(cli.L1_COLUMNS)
    assert len(lines) == 3


@pytest.mark.parametrize("recipe", RECIPES, ids=lambda p: p.stem)
def test_recipes_finish_quickly(recipe, tmp_path):
    command = "prob-scan" if "probability" in recipe.stem else "l1-scan"
    out = tmp_path / "out.csv"
    start = time.perf_counter()
    assert main([command, "-c", str(recipe), "-o", str(out)]) == cli.EXIT_OK
    assert time.perf_counter() - start < 10.0
    rows = read_csv(out)
    assert len(rows) > 1000
