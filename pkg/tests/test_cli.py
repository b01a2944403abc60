import csv
import io
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hpm_ecoepi.cli import (
    COMPARE_COLUMNS,
    ConfigError,
    RunConfig,
    format_number,
    main,
    parse_config,
    run_compare,
    run_simulate,
)
from hpm_ecoepi.model import FIG1_PARAMS, FIG1_STATE, InvalidModel

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
FIG1_TEXT = (CONFIGS / "fig1.cfg").read_text()

# engine (N=2) vs RK4 max abs difference over [0, 10], measured once
COMPARE_BASELINE = 1.0646298973598922e-05


def _cfg(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def _read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def test_parse_paper_config():
    cfg = parse_config(FIG1_TEXT)
    assert cfg.params == FIG1_PARAMS
    assert cfg.ics == FIG1_STATE
    assert (cfg.order, cfg.t_end, cfg.step, cfg.output_grid) == (2, 10.0, 1e-3, 201)


def test_parse_empty_lists_missing():
    with pytest.raises(ConfigError) as info:
        parse_config("")
    for key in ("r", "K", "c1", "c2", "delta", "e", "d1", "d2", "S0", "I0", "P0"):
        assert key in str(info.value)


def test_parse_negative_rate():
    with pytest.raises(InvalidModel) as info:
        parse_config(FIG1_TEXT.replace("r = 0.1", "r = -0.1"))
    assert "r must be positive" in str(info.value)


def test_parse_unknown_key_line_number():
    with pytest.raises(ConfigError, match="line 2: unknown key 'zeta'"):
        parse_config("r = 0.1\nzeta = 3\n")


def test_parse_bad_line():
    with pytest.raises(ConfigError, match="line 1"):
        parse_config("r 0.1\n")


def test_parse_bad_number():
    # line 1 of the shipped config is a comment
    with pytest.raises(ConfigError, match="line 3: cannot parse 'abc'"):
        parse_config(FIG1_TEXT.replace("K = 0.3", "K = abc"))


def test_parse_run_keys_and_comments():
    cfg = parse_config(FIG1_TEXT + "order = 3  # deeper\nt_end = 4\nstep = 0.01\ngrid = 11\n")
    assert (cfg.order, cfg.t_end, cfg.step, cfg.output_grid) == (3, 4.0, 0.01, 11)


def test_run_config_bounds():
    with pytest.raises(ConfigError):
        RunConfig(FIG1_PARAMS, FIG1_STATE, step=20.0)


def test_compare_csv_and_summary():
    buf = io.StringIO()
    summary = run_compare(parse_config(FIG1_TEXT), buf)
    header, rows = _read_csv(buf.getvalue())
    assert tuple(header) == COMPARE_COLUMNS
    assert len(rows) == 201
    first = [float(x) for x in rows[0]]
    assert first[1] == first[4] == 0.01
    assert first[0] == 0.0
    assert summary.max_abs("engine-oracle") <= 1.5 * COMPARE_BASELINE
    assert abs(first[7] - (0.01 + summary.paper_defect[0])) <= 1e-15


def test_compare_decoupled_agree():
    text = FIG1_TEXT.replace("delta = 0.1", "delta = 0").replace("c1 = 0.1", "c1 = 0").replace(
        "c2 = 0.2", "c2 = 0").replace("K = 0.3", "K = inf")
    summary = run_compare(parse_config(text), io.StringIO())
    for pair in ("engine-oracle", "paper-oracle", "engine-paper"):
        assert summary.max_abs(pair) <= 1e-8


def test_compare_error_nonincreasing_in_order():
    base = parse_config(FIG1_TEXT + "t_end = 2\n")
    errs = []
    for N in range(4):
        cfg = RunConfig(base.params, base.ics, order=N, t_end=2.0)
        errs.append(run_compare(cfg, io.StringIO()).max_abs("engine-oracle"))
    assert all(b <= a for a, b in zip(errs, errs[1:]))


def test_compare_resonant_blank_paper_columns():
    cfg = parse_config((CONFIGS / "resonant.cfg").read_text() + "grid = 5\nt_end = 1\n")
    buf = io.StringIO()
    summary = run_compare(cfg, buf)
    _, rows = _read_csv(buf.getvalue())
    assert all(r[7:] == ["", "", ""] for r in rows)
    assert all(r[1] != "" and r[4] != "" for r in rows)
    assert any("printed series omitted" in w for w in summary.warnings)


def test_simulate_oracle_first_row():
    buf = io.StringIO()
    run_simulate(parse_config(FIG1_TEXT), "oracle", buf)
    header, rows = _read_csv(buf.getvalue())
    assert header == ["t", "S", "I", "P"]
    assert len(rows) == 201
    assert [float(x) for x in rows[0]] == [0.0, 0.01, 0.01, 0.01]


def test_simulate_engine_order0():
    cfg = RunConfig(FIG1_PARAMS, FIG1_STATE, order=0, output_grid=11)
    buf = io.StringIO()
    run_simulate(cfg, "engine", buf)
    _, rows = _read_csv(buf.getvalue())
    t = np.array([float(r[0]) for r in rows])
    np.testing.assert_allclose([float(r[1]) for r in rows], 0.01 * np.exp(0.1 * t), rtol=1e-15)
    np.testing.assert_allclose([float(r[3]) for r in rows], 0.01 * np.exp(-0.2 * t), rtol=1e-15)


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_number_round_trip(x):
    assert float(format_number(x)) == x


def test_main_audit_exit_codes(tmp_path, capsys):
    assert main(["audit", "--config", str(CONFIGS / "distinct_rates.cfg")]) == 2
    assert main(["audit", "--config", str(CONFIGS / "resonant.cfg")]) == 3
    assert main(["audit", "--config", str(CONFIGS / "fig1.cfg")]) == 2
    out = capsys.readouterr().out
    assert "coincidence warning" in out


def test_main_audit_records_file(tmp_path, capsys):
    out = tmp_path / "audit.jsonl"
    assert main(["audit", "--config", str(CONFIGS / "distinct_rates.cfg"), "--out", str(out)]) == 2
    assert len(out.read_text().splitlines()) == 23
    assert "MISMATCH" in capsys.readouterr().out


def test_main_compare_writes_csv_and_script(tmp_path, capsys):
    out = tmp_path / "fig1.csv"
    assert main(["compare", "--config", str(CONFIGS / "fig1.cfg"), "--out", str(out), "--grid", "21"]) == 0
    header, rows = _read_csv(out.read_text())
    assert len(rows) == 21 and tuple(header) == COMPARE_COLUMNS
    assert (tmp_path / "fig1.gp").exists()
    assert "t=0 defect of the printed series" in capsys.readouterr().out


def test_main_simulate_paper_resonant_no_output(tmp_path, capsys):
    out = tmp_path / "x.csv"
    assert main(["simulate", "--method", "paper", "--config", str(CONFIGS / "resonant.cfg"), "--out", str(out)]) == 3
    assert not out.exists()


def test_main_simulate_stdout(capsys):
    assert main(["simulate", "--method", "engine", "--config", str(CONFIGS / "fig1.cfg"), "--grid", "3"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "t,S,I,P"


def test_main_coeffs(capsys):
    assert main(["coeffs", "--config", str(CONFIGS / "fig1.cfg")]) == 0
    out = capsys.readouterr().out
    assert out.count("\n") == 24 and "A9" in out


def test_main_bad_config(tmp_path, capsys):
    assert main(["compare", "--config", _cfg(tmp_path, "r = 1\n")]) == 1
    assert "missing required keys" in capsys.readouterr().err


def test_main_usage_error_not_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["simulate"])
    assert info.value.code == 1


def test_main_override_flags(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["simulate", "--method", "oracle", "--config", str(CONFIGS / "fig1.cfg"),
                 "--t-end", "2", "--step", "0.01", "--grid", "5", "--out", str(out)]) == 0
    _, rows = _read_csv(out.read_text())
    assert [float(r[0]) for r in rows] == [0.0, 0.5, 1.0, 1.5, 2.0]
