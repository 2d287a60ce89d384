import csv
import io
import json

import pytest

from dirac_coulomb.cli import EXIT_FAIL, EXIT_IO, EXIT_OK, EXIT_USAGE, main


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spectrum_rows_and_totals(capsys):
    code, out, _ = _run(capsys, "spectrum", "--n-max", "3")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert [(r["n"], r["kappa"]) for r in doc["rows"]] == [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]
    assert doc["totals"] == {"1": 2, "2": 8, "3": 18}
    eps = [r["epsilon"] for r in doc["rows"]]
    assert eps[1] < eps[2] and eps[0] < eps[1]


def test_spectrum_csv(capsys):
    code, out, _ = _run(capsys, "spectrum", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK and len(rows) == 3
    assert set(rows[0]) == {"n", "kappa", "j", "epsilon", "binding", "delta_j", "degeneracy"}


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "--alpha", "1.5"],
        ["spectrum", "--n-max", "0"],
        ["state", "--n", "2", "--kappa", "3"],
        ["state", "--n", "1", "--kappa", "1", "--two-mj", "2"],
        ["spectrum", "--Z", "-1"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = _run(capsys, *argv)
    assert code == EXIT_USAGE and out == "" and err.startswith("error:")


def test_bad_grid_spec_is_rejected_by_parser(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["state", "--n", "1", "--kappa", "1", "--grid", "4:4"])
    assert exc.value.code == 2


def test_unwritable_output(capsys, tmp_path):
    code, _, err = _run(capsys, "spectrum", "--out", str(tmp_path / "missing" / "x.json"))
    assert code == EXIT_IO and "cannot write" in err


def test_state_json_is_normalized(capsys):
    code, out, _ = _run(capsys, "state", "--n", "2", "--kappa", "1", "--case", "jl", "--grid", "32:12:2")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["meta"]["norm"] == pytest.approx(1.0, abs=1e-10)
    assert len(doc["data"]["re_c1"]) == 32 * 12 * 2


def test_field_slice_csv(tmp_path, capsys):
    path = tmp_path / "slice.csv"
    argv = ["field", "--n", "2", "--kappa", "1", "--case", "bel", "--slice", "--slice-points", "20", "--format", "csv"]
    assert main(argv + ["--out", str(path)]) == EXIT_OK
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["z", "rho", "w", "s_rho", "s_phi", "s_z", "polarization"]
    assert len(rows) == 1 + 20 * 20
    assert all(float(r[2]) >= 0 for r in rows[1:])


def test_output_is_deterministic(tmp_path):
    argv = ["field", "--n", "2", "--kappa", "1", "--theta", "0.3", "--phi", "1.1", "--grid", "8:6:4"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--out", str(a)]) == EXIT_OK
    assert main(argv + ["--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_verify_passes_and_detects_fault(capsys):
    code, out, _ = _run(capsys, "verify", "--n-max", "1", "--Z", "20")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["passed"] and doc["n_failed"] == 0
    code, out, err = _run(capsys, "verify", "--n-max", "1", "--Z", "20", "--beta-scale", "1.01")
    assert code == EXIT_FAIL and not json.loads(out)["passed"]
    assert "verification failed" in err


def test_oracle_command(capsys):
    code, out, _ = _run(capsys, "oracle", "--Z", "30", "--kappa-max", "1", "--n-r-max", "1")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["n_checks"] == 2
    assert all(c["value"] < 1e-8 for c in doc["checks"])
