import csv
import io
import json
import subprocess
import sys

import pytest

from fracsums import __version__
from fracsums.cli import EXIT_CAPACITY, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main, parse_config, run


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(parse_config(list(argv)), out, err)
    return code, out.getvalue(), err.getvalue()


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_compute_small():
    code, out, err = invoke("compute", "--x", "10", "--x", "100")
    assert code == EXIT_OK
    rows = rows_of(out)
    assert [r["T"] for r in rows] == ["27", "482"]
    assert float(rows[0]["E"]) == pytest.approx(2.4298357720, abs=1e-9)
    assert rows[0]["flagged"] == "false"
    assert "compute: 2 rows" in err


def test_compute_below_two_skipped():
    code, out, _ = invoke("compute", "--x", "1", "--x", "5")
    assert code == EXIT_OK and [r["x"] for r in rows_of(out)] == ["5"]


def test_compute_empty_grid_header_only():
    code, out, _ = invoke("compute", "--f", "sqrt_floor")
    assert code == EXIT_OK
    assert out.strip() == "x,T,main_term,E,envelope,const_uncertainty,flagged"


def test_compute_json():
    code, out, _ = invoke("compute", "--f", "sqrt_floor", "--x", "1000", "--format", "json")
    doc = json.loads(out)
    assert doc["meta"]["version"] == __version__
    assert doc["meta"]["config"]["f"] == "sqrt_floor"
    assert "threads" not in doc["meta"]["config"]
    (row,) = doc["rows"]
    assert row["x"] == 1000 and isinstance(row["flagged"], bool)


def test_thread_count_does_not_change_bytes():
    args = ("compute", "--f", "log_floor", "--xmin", "100", "--xmax", "1e6", "--points", "25")
    one = invoke(*args, "--threads", "1")[1]
    four = invoke(*args, "--threads", "4")[1]
    assert one == four and len(rows_of(one)) == 25


def test_out_file(tmp_path):
    path = tmp_path / "rows.csv"
    code, out, _ = invoke("delta-scan", "--x", "10", "--out", str(path))
    assert code == EXIT_OK and out == ""
    assert rows_of(path.read_text())[0]["x"] == "10"


def test_constants():
    code, out, err = invoke("constants", "--f", "one")
    rows = rows_of(out)
    assert [r["constant"] for r in rows] == ["C1", "C2", "C3"]
    assert float(rows[1]["midpoint"]) == pytest.approx(0.15443132980306572)
    code, out, _ = invoke("constants", "--f", "sqrt_floor", "--method", "series", "--dcut", "1e4")
    assert {r["method"] for r in rows_of(out)} == {"series"}
    assert float(rows_of(out)[0]["radius"]) == pytest.approx(0.02)


def test_unknown_function_is_usage_error():
    code, _, err = invoke("constants", "--f", "nope")
    assert code == EXIT_USAGE and "error" in err


def test_closed_form_unavailable_is_usage_error():
    code, _, _ = invoke("constants", "--f", "pow_floor", "--alpha", "0.3", "--method", "closed")
    assert code == EXIT_USAGE


def test_exponent_fit_synthetic():
    code, out, err = invoke("exponent-fit", "--synthetic", "--alpha", "0")
    assert code == EXIT_OK
    rows = {r["reference"]: r for r in rows_of(out)}
    assert float(rows["theorem"]["slope"]) == pytest.approx(0.5, abs=1e-9)
    assert rows["zhai_wu"]["passed"] == "true"
    assert rows["delta_conjectured"]["passed"] == "false"
    assert "PASS" in err
    code, _, err = invoke("exponent-fit", "--synthetic", "0.9", "--alpha", "0")
    assert code == EXIT_FAIL and "FAIL" in err


def test_exponent_fit_sqrt_floor():
    code, out, err = invoke("exponent-fit", "--f", "sqrt_floor", "--xmin", "1e4", "--xmax", "1e6",
                            "--points", "8")
    assert code == EXIT_OK, err


def test_exponent_fit_too_few_points():
    code, _, err = invoke("exponent-fit", "--f", "one", "--x", "100", "--x", "1000")
    assert code == EXIT_USAGE and ">= 5" in err


def test_vaaler_check():
    code, out, err = invoke("vaaler-check", "--points", "500", "--H", "5", "--H", "50")
    assert code == EXIT_OK
    rows = rows_of(out)
    assert [r["H"] for r in rows] == ["5", "50"]
    assert all(r["violations"] == "0" for r in rows)


def test_vaaler_check_seeded():
    a = invoke("vaaler-check", "--points", "200", "--seed", "7")[1]
    b = invoke("vaaler-check", "--points", "200", "--seed", "7")[1]
    c = invoke("vaaler-check", "--points", "200", "--seed", "8")[1]
    assert a == b != c


def test_delta_scan():
    code, out, err = invoke("delta-scan", "--xmin", "1", "--xmax", "1e5", "--points", "200")
    assert code == EXIT_OK
    rows = rows_of(out)
    assert len(rows) == 200
    assert max(abs(float(r["residual"])) for r in rows) <= 3


@pytest.mark.slow
def test_rs_check():
    code, out, err = invoke("rs-check")
    assert code == EXIT_OK and "PASS" in err
    assert len(rows_of(out)) == 500


def test_rs_check_capacity(monkeypatch):
    monkeypatch.setenv("FRACSUMS_RS_WORK_CAP", "10")
    code, _, err = invoke("rs-check")
    assert code == EXIT_CAPACITY


def test_prop_check_small():
    code, out, err = invoke("prop-check", "--xmin", "1e3", "--xmax", "1e4")
    assert code == EXIT_OK
    rows = rows_of(out)
    assert {r["prop"] for r in rows} == {"average", "shifted"}
    assert {r["regime"] for r in rows} == {"D>=sqrtX", "D<sqrtX"}
    assert "average[D>=sqrtX]" in err


def test_main_entry_and_bad_args(capsys):
    assert main(["delta-scan", "--x", "2"]) == EXIT_OK
    with pytest.raises(SystemExit) as exc:
        main(["compute", "--format", "xml"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        parse_config(["vaaler-check", "--seed", "-1"])
    assert exc.value.code == EXIT_USAGE


def test_module_invocation():
    proc = subprocess.run([sys.executable, "-m", "fracsums", "compute", "--x", "10"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert rows_of(proc.stdout)[0]["T"] == "27"
