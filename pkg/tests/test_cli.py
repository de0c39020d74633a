import csv
import io
import json
import subprocess
import sys

import pytest

from qwalks import asymptotics, cli


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_count_csv(capsys):
    code, out, _ = run(["count", "--steps", "S", "--n", "10", "--output", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 11
    assert int(rows[-1]["count"]) <= 3 ** 10
    assert rows[0] == {"n": "0", "count": "1"}


def test_count_json_full_table(capsys):
    code, out, _ = run(["count", "--steps", "(-1,1);(0,1);(1,-1)", "--n", "4", "--full"], capsys)
    data = json.loads(out)
    assert code == 0 and data["counts"] == ["1", "1", "2", "4", "10"]
    assert data["table"]["n_max"] == 4


def test_alpha(capsys):
    code, out, _ = run(["alpha", "--digits", "10", "--output", "text"], capsys)
    assert code == 0 and out == "0.1731788836\n"
    code, out, _ = run(["alpha", "--digits", "10"], capsys)
    data = json.loads(out)
    assert data["alpha"] == "0.1731788836" and data["digits"] == 10 and data["partial_terms"] > 0


def test_alpha_growth_csv(capsys):
    code, out, _ = run(["alpha", "--growth-n", "80", "--output", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert rows[0]["n"] == "50" and rows[-1]["n"] == "80"
    assert set(rows[0]) == {"n", "c_n", "ratio", "residual_ratio"}


@pytest.mark.parametrize("argv", [
    ["count", "--n", "-1"],
    ["count", "--steps", "(1,2"],
    ["kernel", "--steps", "N;E"],
    ["strip", "--k-max", "3"],
    ["poles", "--poles-max-n", "1"],
    ["alpha", "--digits", "0"],
])
def test_usage_errors(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2 and out == "" and "error" in err


def test_argparse_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli.main(["count", "--output", "xml"])
    assert exc.value.code == 2


def test_certification_failure_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(asymptotics, "sum_certificate", lambda: {"passed": False})
    code, out, _ = run(["alpha"], capsys)
    assert code == 1 and json.loads(out)["alpha"] == "0.1731788836"


def test_kernel_and_strip(capsys):
    code, out, _ = run(["kernel", "--steps", "T", "--order", "20", "--output", "text"], capsys)
    assert code == 0 and "fail" not in out
    code, out, _ = run(["strip", "--k-max", "6", "--order", "10", "--output", "text"], capsys)
    assert code == 0 and out.splitlines()[-1].startswith("pass")


def test_poles_small(capsys):
    code, out, _ = run(["poles", "--poles-max-n", "3", "--output", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["n"] for r in rows] == ["2", "3"]
    assert all(r["off_unit_circle"] == "pass" for r in rows)


def test_series_text(capsys):
    code, out, _ = run(["series", "--steps", "S", "--order", "6", "--output", "text"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "Q(1,1) = 1 + t + 3*t^2 + 7*t^3 + 21*t^4 + 55*t^5 + O(t^6)"


def test_out_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cli.OUT_DIR_ENV, str(tmp_path))
    code, out, _ = run(["alpha", "--output", "text"], capsys)
    assert code == 0 and out == ""
    assert (tmp_path / "alpha.txt").read_text() == "0.1731788836\n"
    run(["count", "--out", "c.json"], capsys)
    assert json.loads((tmp_path / "c.json").read_text())["n_max"] == 10


def test_small_run_is_deterministic(capsys):
    argv = ["verify-all", "--order", "12", "--poles-max-n", "3", "--precision", "40"]
    first = run(argv, capsys)
    second = run(argv, capsys)
    assert first == second
    assert first[0] == 0


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qwalks", "alpha", "--digits", "3",
                          "--output", "text"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "0.173\n"
