import csv
import io
import json
import subprocess
import sys

import pytest

from etalab.cli import RunConfig, main, read_config_file
from etalab.errors import ParseError, PrecisionError
from etalab.report import Report
from reference_values import REFERENCE_ERRORS, REFERENCE_TAILS


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _rows(out):
    return list(csv.DictReader(io.StringIO(out)))


def test_eval_ln2(capsys):
    code, out, _ = _run(capsys, "eval", "--s", "1", "--digits", "20", "--format", "csv")
    assert code == 0
    assert _rows(out)[0]["re"] == "+0.69314718055994530941"


def test_eval_zeta_two(capsys):
    code, out, _ = _run(capsys, "eval", "--s", "2", "--digits", "20", "--format", "csv")
    rows = {r["label"]: r for r in _rows(out)}
    assert code == 0
    assert rows["zeta"]["re"] == "+1.64493406684822643647"
    assert rows["eta"]["re"] == "+0.82246703342411321823"


def test_eval_partial_sums_and_notes(capsys):
    code, out, _ = _run(capsys, "eval", "--s", "0.5", "--n", "10,100", "--digits", "10")
    assert code == 0
    assert "eta_n  10   +0.4507254427" in out
    assert "agree to full precision" in out


def test_eval_pole_is_a_note_not_an_error(capsys):
    code, out, _ = _run(capsys, "eval", "--s", "1")
    assert code == 0
    assert "pole" in out


@pytest.mark.parametrize("argv,code", [
    (["eval", "--s", "1+2"], 2),
    (["eval", "--s", "0.5", "--n", "1.5"], 2),
    (["eval", "--prec", "abc"], 2),
    (["eval", "--prec", "32"], 2),
    (["eval", "--s=-1+2i"], 3),
    (["eval", "--s", "1", "--digits", "60"], 4),
    (["zeros", "--range", "0:200"], 3),
    (["probe", "exchange", "--zero-bracket", "2:3", "--n", "1e2"], 5),
    (["probe", "uniform", "--sigma", "1.5"], 3),
])
def test_exit_codes(capsys, argv, code):
    got, out, err = _run(capsys, *argv)
    assert got == code
    assert out == ""
    assert err.startswith("error: ")


def test_parse_error_reports_column(capsys):
    _, _, err = _run(capsys, "eval", "--s", "0.5+2j")
    assert "column 6" in err


def test_precision_error_names_the_needed_bits():
    with pytest.raises(PrecisionError, match="--prec 226"):
        RunConfig(precision_bits=192, digits=60)


def test_digits_command_matches_reference_prefixes(capsys):
    code, out, _ = _run(capsys, "digits", "--format", "json")
    assert code == 0
    rep = Report.from_json(out)
    for row in rep.rows:
        pub = REFERENCE_TAILS[row.n]
        want = pub[:2] if row.label == "R" else pub[2:]
        assert row.values["re"][:26] == want[0][:26]
        assert row.values["im"][:26] == want[1][:26]


def test_table1_source_digits(capsys):
    code, out, _ = _run(capsys, "table1", "--source-digits", "28", "--format", "csv")
    assert code == 0
    rows = _rows(out)
    for r in rows[:-1]:
        assert (r["eps_r"], r["eps_i"]) == tuple(f"{float(x):.4e}" for x in REFERENCE_ERRORS[int(r["n"])])
    assert rows[-1]["label"] == "slope"


def test_zeros_empty_range(capsys):
    code, out, _ = _run(capsys, "zeros", "--range", "2:3")
    assert code == 0
    assert "no critical-line zeros" in out


def test_output_is_deterministic(capsys):
    argv = ("probe", "f-seq", "--n", "1e2:1e4", "--format", "json")
    _, first, _ = _run(capsys, *argv)
    _, second, _ = _run(capsys, *argv)
    assert first == second
    doc = json.loads(first)
    assert [r["n"] for r in doc["rows"]] == ["100", "1000", "10000"]


def test_formats_carry_identical_values(capsys):
    argv = ["probe", "uniform", "--n", "10,100", "--t-range", "0:20"]
    _, text, _ = _run(capsys, *argv)
    _, csv_out, _ = _run(capsys, *argv, "--format", "csv")
    _, json_out, _ = _run(capsys, *argv, "--format", "json")
    rep = Report.from_json(json_out)
    assert rep.to_csv() == csv_out
    assert rep.to_text() == text
    assert all(r.values["result"] == "PASS" for r in rep.rows)


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# eval at s = 2\ns = 2\ndigits = 12\nformat = csv\n")
    code, out, _ = _run(capsys, "eval", "--config", str(cfg))
    assert code == 0
    assert _rows(out)[1]["re"] == "+1.644934066848"
    code, out, _ = _run(capsys, "eval", "--config", str(cfg), "--digits", "5")
    assert _rows(out)[1]["re"] == "+1.64493"


def test_config_file_rejects_unknown_keys(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    with pytest.raises(ParseError):
        read_config_file(str(cfg))
    code, _, _ = _run(capsys, "eval", "--config", str(cfg))
    assert code == 2


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "eta.json"
    code, out, _ = _run(capsys, "eval", "--s", "2", "--format", "json", "--out", str(target))
    assert code == 0 and out == ""
    assert Report.from_json(target.read_text()).rows[0].label == "eta"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "etalab", "eval", "--s", "1", "--digits", "8", "--format", "csv"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert "+0.69314718" in proc.stdout
