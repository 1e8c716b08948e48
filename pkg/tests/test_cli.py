import csv
import io
import json

import pytest

from ivfopt.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def report(*argv):
    code, text = run(*argv)
    return code, json.loads(text)


@pytest.mark.parametrize(
    "argv, status",
    [
        (["check-member", "--ivf", "corpus:figure_1", "--u", "1", "--g", "0.25,1.5", "--c", "0.5"], 0),
        (["check-member", "--ivf", "corpus:example_3_1", "--u", "1", "--g", "0,0", "--c", "0"], 1),
        (["check-member", "--ivf", "corpus:figure_1", "--u", "1", "--g", "1,0", "--c", "0.5"], 2),
        (["check-member", "--ivf", "corpus:nope", "--u", "1", "--g", "0,1", "--c", "0"], 2),
        (["check-member", "--ivf", "corpus:figure_1", "--u", "9", "--g", "0,1", "--c", "0"], 2),
        (["region", "--ivf", "corpus:example_3_1", "--u", "0", "--c", "0.5"], 0),
        (["region", "--ivf", "corpus:sqrt_cusp", "--u", "0", "--c", "0"], 1),
        (["region", "--ivf", "corpus:example_2_1_2d", "--u", "0", "--c", "0"], 2),
        (["repro", "--case", "example_3_1_u0"], 0),
        (["repro", "--case", "nope"], 2),
        (["efficiency", "--ivf", "corpus:example_3_1", "--u", "0", "--mode", "weak"], 0),
        (["efficiency", "--ivf", "corpus:example_3_1", "--u", "0.5"], 1),
        (["sum-rule", "--ivf1", "corpus:sum_rule_phi1", "--ivf2", "corpus:sum_rule_phi2", "--u", "0", "--c-list", "0"], 1),
        (["sum-rule", "--ivf1", "corpus:sum_rule_phi1", "--ivf2", "corpus:figure_1", "--u", "0", "--c-list", "0"], 2),
        (["diff-opt", "--ivf1", "corpus:note_4_1_phi1", "--ivf2", "corpus:note_4_1_phi2", "--u", "0", "--c-list", "1"], 1),
        (["diff-opt", "--ivf1", "corpus:example_3_1", "--ivf2", "corpus:example_3_1", "--u", "0", "--c-list", "0,1"], 0),
        (["normal-cone", "--domain", "0,1", "--u", "0", "--g", "0,0", "--c", "0"], 0),
        (["normal-cone", "--domain", "0,1", "--u", "0", "--g", "1,2", "--c", "0.5"], 1),
        (["lipschitz", "--ivf", "corpus:example_3_1", "--u", "0"], 0),
    ],
)
def test_exit_codes(argv, status):
    code, text = run(*argv)
    assert code == status
    assert json.loads(text)["command"] == argv[0]


def test_usage_error_exits_two():
    with pytest.raises(SystemExit) as info:
        main(["region", "--ivf", "corpus:example_3_1"])
    assert info.value.code == 2


def test_error_report_has_diagnostic(capsys):
    code, rep = report("check-member", "--ivf", "corpus:figure_1", "--u", "1", "--g", "1,0", "--c", "0.5")
    assert code == 2
    assert rep["diagnostics"][0]["level"] == "error"
    assert "ivfopt: error" in capsys.readouterr().err


def test_region_report():
    _, rep = report("region", "--ivf", "corpus:example_3_1", "--u", "0", "--c", "0.5")
    r = rep["results"]
    assert r["g_lo"] == pytest.approx([-1.5, 0.5], abs=1e-3)
    assert r["g_hi"] == pytest.approx([-0.5, 1.5], abs=1e-3)
    _, rep = report("region", "--ivf", "corpus:example_3_1", "--u", "1", "--c", "0")
    assert rep["results"]["g_lo"][1] == "inf" and rep["results"]["g_hi"][0] == pytest.approx(2, abs=1e-3)
    _, rep = report("region", "--ivf", "corpus:constant", "--u", "0.2", "--c", "0")
    assert rep["results"]["g_lo"] == pytest.approx([0, 0], abs=1e-6)


def test_diff_opt_report():
    _, rep = report("diff-opt", "--ivf1", "corpus:note_4_1_phi1", "--ivf2", "corpus:note_4_1_phi2", "--u", "0", "--c-list", "1")
    entry = rep["results"]["per_c"][0]
    assert entry["subset"] is False and entry["witness"]["g"][0][0] < -2


def test_file_input(tmp_path):
    path = tmp_path / "f.ivf"
    path.write_text("ivf f dim=1\ndomain -1 1\npiece -1 1 :: abs(y) :: 2*abs(y)\n")
    code, rep = report("efficiency", "--ivf", str(path), "--u", "0")
    assert code == 0 and rep["results"]["weak_efficient"] and rep["results"]["efficient"]


@pytest.mark.parametrize(
    "argv",
    [
        ["repro", "--case", "all"],
        ["sum-rule", "--ivf1", "corpus:sum_rule_phi1", "--ivf2", "corpus:sum_rule_phi2", "--u", "0"],
        ["lipschitz", "--ivf", "corpus:log_example", "--u", "1.5"],
    ],
)
def test_reports_are_byte_stable(argv):
    assert run(*argv) == run(*argv)


def _rows(*extra):
    code, text = run("plot-data", "--ivf", "corpus:figure_1", "--u", "1", "--g", "0.25,1.5", "--c", "0.5", *extra)
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["y", "phi_lo", "phi_hi", "h_lo", "h_hi"]
    return [[float(v) for v in r] for r in rows[1:]]


def test_plot_data():
    rows = _rows()
    assert len(rows) == 2001
    by_y = {r[0]: r[1:] for r in rows}
    assert by_y[1.0] == [0, 0, 0, 0]
    assert by_y[2.0] == pytest.approx([1, 3, -0.25, 1.0])
    assert all(h_lo <= p_lo + 1e-9 and h_hi <= p_hi + 1e-9 for _, p_lo, p_hi, h_lo, h_hi in rows)
    assert [r[0] for r in _rows("--grid", "2")] == [-1, 2]
