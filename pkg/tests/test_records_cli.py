import io
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from subjacent import cli
from subjacent.cache import CACHE_ENV, EigenCache
from subjacent.criticality import scan_curve
from subjacent.eigensolver import solve_low_spectrum
from subjacent.entanglement import MixingSpec
from subjacent.lattice import ChainModel
from subjacent.records import (ConfigError, config_hash, format_value, parse_config,
                               provenance_line, read_columns, read_csv, write_csv)
from subjacent.scaling import CUBIC, fit


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def data_lines(text):
    return [ln for ln in text.splitlines() if not ln.startswith("#")]


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_formatting_round_trips(value):
    assert float(format_value(value)) == value
    assert float(format_value(np.float64(value))) == value


def test_format_special_values():
    assert format_value(float("nan")) == "nan"
    assert format_value(True) == "true"
    assert format_value(np.int64(7)) == "7"
    assert format_value(None) == ""


def test_provenance_line_and_hash():
    line = provenance_line({"n": 8, "p": 0.3}, seed=4)
    assert line.startswith("# subjacent 0.1.0 config=") and line.endswith("seed=4")
    assert config_hash({"n": 8, "p": 0.3}) == config_hash({"p": 0.3, "n": 8})
    assert config_hash({"n": 8}) != config_hash({"n": 10})


def test_csv_round_trip(tmp_path):
    path = tmp_path / "t.csv"
    write_csv(str(path), ("a", "b"), [(0.1, 1 / 3), (2.5e-17, float("nan"))], {"k": 1}, 3)
    header, rows = read_csv(str(path))
    assert header == ["a", "b"] and len(rows) == 2
    a, b = read_columns(str(path), "a", "b")
    assert a.tolist() == [0.1, 2.5e-17] and b[0] == 1 / 3 and math.isnan(b[1])
    with pytest.raises(KeyError):
        read_columns(str(path), "z")


def test_write_to_missing_directory(tmp_path):
    with pytest.raises(OSError):
        write_csv(str(tmp_path / "nope" / "x.csv"), ("a",), [])


def test_config_parsing():
    text = "# comment\nn = 10\nalpha-step = 0.01  # trailing\n\n"
    assert parse_config(text) == {"n": "10", "alpha_step": "0.01"}


@pytest.mark.parametrize("text,line,what", [
    ("n = 8\nbogus = 1\n", 2, "unknown"),
    ("n = 8\n\nn = 10\n", 3, "duplicate"),
    ("n 8\n", 1, "expected"),
    ("= 3\n", 1, "empty"),
])
def test_config_errors_carry_line_numbers(text, line, what):
    with pytest.raises(ConfigError, match=f"line {line}: {what}"):
        parse_config(text, known={"n", "p"})


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n = 10\np = 0.15\nalpha-min = 0.21\n")
    args = cli.parse_args(["scan", "--config", str(cfg), "--n", "6"])
    assert args.n == 6 and args.p == 0.15 and args.alpha_min == 0.21


def test_config_with_unknown_key_is_rejected(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n = 10\nrealizations = 5\n")
    with pytest.raises(SystemExit) as exc:
        cli.parse_args(["scan", "--config", str(cfg)])
    assert exc.value.code == 2
    assert "line 2" in capsys.readouterr().err


def test_p_and_kt_are_exclusive(tmp_path):
    with pytest.raises(SystemExit):
        cli.parse_args(["scan", "--p", "0.3", "--kt", "1.0"])
    cfg = tmp_path / "run.cfg"
    cfg.write_text("kt = 1.0\n")
    with pytest.raises(SystemExit):
        cli.parse_args(["scan", "--config", str(cfg), "--p", "0.3"])


def test_scan_matches_library(capsys):
    code, out, _ = run(["scan", "--n", "6", "--alphas", "0.2,0.25,0.3", "--p", "0.3"], capsys)
    assert code == 0
    assert out.splitlines()[0].startswith("# subjacent")
    header, rows = read_csv(io.StringIO(out))
    assert tuple(header) == cli.SCAN_HEADER
    curve = scan_curve(ChainModel.uniform(6, 0.25), MixingSpec.fixed_p(0.3), [0.2, 0.25, 0.3])
    assert [float(r[3]) for r in rows] == curve.values.tolist()
    assert all(r[5] == "p=0.3" for r in rows)


def test_empty_grid_gives_header_only(capsys):
    code, out, _ = run(["scan", "--alphas", ""], capsys)
    assert code == 0 and data_lines(out) == [",".join(cli.SCAN_HEADER)]


def test_scan_csv_round_trips_into_fit(tmp_path, capsys):
    scan = tmp_path / "scan.csv"
    report = tmp_path / "fit.csv"
    assert cli.main(["scan", "--n", "6", "--alpha-min", "0.1", "--alpha-max", "0.2",
                     "--alpha-step", "0.01", "--out", str(scan)]) == 0
    assert cli.main(["fit", "--model", "cubic", "--in", str(scan), "--out", str(report)]) == 0
    alphas, c = read_columns(str(scan), "alpha", "c")
    expected = fit(CUBIC, alphas, c)
    header, rows = read_csv(str(report))
    assert [float(r[2]) for r in rows] == expected.values.tolist()
    assert [float(r[3]) for r in rows] == expected.std_errors.tolist()


def test_fit_with_fixed_parameter(tmp_path, capsys):
    src = tmp_path / "pts.csv"
    n = np.arange(6.0, 18.0, 2.0)
    write_csv(str(src), ("N", "alpha_c"), zip(n, 0.3 - 0.5 * n**-1.8))
    code, out, _ = run(["fit", "--model", "beta", "--in", str(src), "--fix", "y_inf=0.3"],
                       capsys)
    assert code == 0
    _, rows = read_csv(io.StringIO(out))
    values = {r[1]: float(r[2]) for r in rows}
    assert values["y_inf"] == 0.3 and values["beta"] == pytest.approx(-1.8, abs=1e-6)
    code, _, err = run(["fit", "--model", "beta", "--in", str(src), "--fix", "zz=1"], capsys)
    assert code == 2 and "--fix" in err


def test_fit_usage_errors(capsys):
    code, _, err = run(["fit", "--model", "cubic"], capsys)
    assert code == 2 and "--in" in err
    code, _, err = run(["fit", "--model", "spline", "--in", "x.csv"], capsys)
    assert code == 2


def test_unknown_table_is_a_usage_error(capsys):
    code, _, err = run(["reproduce-table", "--id", "IX"], capsys)
    assert code == 2 and "unknown table" in err
    code, _, err = run(["reproduce-table"], capsys)
    assert code == 2


def test_reproduce_table_i_small(capsys):
    code, out, _ = run(["reproduce-table", "--id", "I", "--max-n", "10"], capsys)
    assert code == 0
    _, rows = read_csv(io.StringIO(out))
    assert [r[1] for r in rows] == ["N=8", "N=10"]
    assert all(r[6] == "pass" for r in rows)


def test_table_a_ii_isotropic_column_matches_table_i():
    rows = cli.reproduce_table("AII", max_n=10)
    iso = {r[1]: r[2] for r in rows if r[1].startswith("delta=1.0,")}
    table_i = {r[1]: r[2] for r in cli.reproduce_table("I", max_n=10)}
    assert iso["delta=1.0,N=8"] == table_i["N=8"]
    assert all(r[6] == "pass" for r in rows)


def test_transition_gap_refinement(capsys):
    code, out, _ = run(["transition", "--n", "8", "--alpha-min", "0.22", "--alpha-max",
                        "0.27", "--refine-tol", "1e-6"], capsys)
    assert code == 0
    header, rows = read_csv(io.StringIO(out))
    row = dict(zip(header, rows[0]))
    assert row["method"] == "gap-crossing"
    assert float(row["alpha_c"]) == pytest.approx(0.24630, abs=5e-5)
    assert float(row["delta_c"]) == pytest.approx(3.2e-2, rel=0.15)


def test_transition_without_jump_writes_marker_row(capsys):
    code, out, _ = run(["transition", "--n", "6", "--p", "0", "--alpha-min", "0.1",
                        "--alpha-max", "0.2", "--alpha-step", "0.01"], capsys)
    assert code == 0
    header, rows = read_csv(io.StringIO(out))
    row = dict(zip(header, rows[0]))
    assert row["method"] == "no-jump" and row["alpha_c"] == "nan"


def test_disordered_transition_needs_cubic(capsys):
    code, _, err = run(["transition", "--sigma", "0.1"], capsys)
    assert code == 2 and "cubic" in err


def test_phase_diagram_rows(capsys):
    code, out, _ = run(["phase-diagram", "--n", "6", "--alphas", "0.1,0.3", "--delta-min",
                        "0.5", "--delta-max", "1.5", "--delta-step", "0.5"], capsys)
    assert code == 0
    header, rows = read_csv(io.StringIO(out))
    assert tuple(header) == cli.PHASE_HEADER and len(rows) == 6
    assert [(r[0], r[1]) for r in rows[:2]] == [("0.5", "0.1"), ("0.5", "0.3")]


def test_disorder_scan_is_thread_independent(tmp_path):
    outs = []
    for threads in ("1", "8"):
        path = tmp_path / f"d{threads}.csv"
        assert cli.main(["disorder-scan", "--n", "6", "--sigma", "0.1", "--realizations",
                         "120", "--seed", "5", "--alphas", "0.22,0.26", "--threads", threads,
                         "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert b"seed=5" in outs[0]


def test_precision_flag(capsys):
    code, out, _ = run(["scan", "--n", "6", "--alphas", "0.25", "--precision", "6"], capsys)
    header, rows = read_csv(io.StringIO(out))
    assert rows[0][3] == f"{float(rows[0][3]):.6g}"


def test_missing_output_directory_exits_with_os_error(tmp_path, capsys):
    code, _, err = run(["scan", "--n", "6", "--alphas", "0.25", "--out",
                        str(tmp_path / "none" / "x.csv")], capsys)
    assert code == 1 and "does not exist" in err


def test_cache_hits_and_identical_results(tmp_path):
    cache = EigenCache(tmp_path)
    model = ChainModel.uniform(12, 0.24)
    first = solve_low_spectrum(model, cache=cache)
    assert cache.hits == 0 and cache.misses > 0
    misses = cache.misses
    second = solve_low_spectrum(model, cache=cache)
    assert cache.misses == misses and cache.hits == misses
    assert np.array_equal(first.energies, second.energies)
    # a different model does not reuse entries
    solve_low_spectrum(model.with_alpha(0.25), cache=cache)
    assert cache.misses == 2 * misses


def test_cache_from_environment(tmp_path, monkeypatch):
    monkeypatch.delenv(CACHE_ENV, raising=False)
    assert EigenCache.from_env() is None
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    assert EigenCache.from_env().directory.startswith(str(tmp_path))


def test_cli_uses_cache_dir(tmp_path, capsys):
    argv = ["scan", "--n", "6", "--alphas", "0.25", "--cache-dir", str(tmp_path)]
    _, first, _ = run(argv, capsys)
    assert list((tmp_path / "v1").glob("*.npz"))
    _, second, _ = run(argv, capsys)
    assert first == second


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "subjacent", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "0.1.0" in proc.stdout
