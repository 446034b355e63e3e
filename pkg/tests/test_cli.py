import io
import json
import subprocess
import sys

import pytest

from reesalg.cli import main
from reesalg.groebner import Ideal, ideal_equal
from reesalg.matfile import MatrixFileError, format_matrix_file, parse_matrix_file
from reesalg.reescore import symmetric_ideal


def run(argv, stdin=None, monkeypatch=None):
    out = io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv, out=out)
    return code, out.getvalue()


def test_report_json_on_example(data_dir):
    code, text = run(["report", str(data_dir / "example_4x3.mat"), "--json"])
    assert code == 0
    j = json.loads(text)
    assert list(j) == ["n", "gd", "heights", "sat_index", "stabilization_level", "forms_equal",
                       "fiber_degree", "relation_type", "generators"]
    assert j["forms_equal"] and j["sat_index"] == 2
    assert j["relation_type"] == 5 and j["fiber_degree"] == 5


def test_report_json_roundtrips(data_dir):
    mf = parse_matrix_file((data_dir / "example_4x3.mat").read_text())
    _, text = run(["report", str(data_dir / "example_4x3.mat"), "--json"])
    gens = [mf.ring.parse(s) for s in json.loads(text)["generators"]]
    _, text2 = run(["saturate", str(data_dir / "example_4x3.mat")])
    gens2 = [mf.ring.parse(line.split("  ", 1)[1]) for line in text2.splitlines() if line.startswith("(")]
    assert ideal_equal(Ideal(mf.ring, gens), Ideal(mf.ring, gens2))


def test_report_on_negative_example(data_dir):
    code, text = run(["report", str(data_dir / "neg_example.mat"), "--json"])
    assert code == 0 and json.loads(text)["forms_equal"] is False


def test_report_is_deterministic(data_dir):
    a = run(["report", str(data_dir / "example_4x3.mat")])[1]
    b = run(["report", str(data_dir / "example_4x3.mat")])[1]
    assert a == b and "relation_type: 5" in a


def test_saturate_power_zero_echoes_L(data_dir, monkeypatch):
    text = (data_dir / "example_4x3.mat").read_text()
    code, out = run(["saturate", "-", "--power", "0"], stdin=text, monkeypatch=monkeypatch)
    assert code == 0
    mf = parse_matrix_file(text)
    gens = [mf.ring.parse(line.split("  ", 1)[1]) for line in out.splitlines()]
    assert ideal_equal(Ideal(mf.ring, gens), symmetric_ideal(mf.matrix))
    assert len(gens) == 3


def test_saturate_ladder(data_dir):
    code, out = run(["saturate", str(data_dir / "example_4x3.mat"), "--infinity"])
    assert code == 0 and "sat_index 2" in out


def test_dual_methods_agree(data_dir):
    outs = []
    for method in ("general", "restricted"):
        code, out = run(["dual", str(data_dir / "example_4x3.mat"), "--level", "2", "--method", method])
        assert code == 0 and out.startswith("B_2 (3x4)")
        outs.append(out.split("minimal generators", 1)[1])
    mf = parse_matrix_file((data_dir / "example_4x3.mat").read_text())
    ideals = [Ideal(mf.ring, [mf.ring.parse(line.split("  ", 1)[1]) for line in o.splitlines()[1:]])
              for o in outs]
    assert ideal_equal(*ideals)


def test_gens_sym_fiber(data_dir):
    code, out = run(["gens", str(data_dir / "koszul.mat")])
    assert code == 0 and out == "a1 = x2\na2 = -x1\n"
    code, out = run(["sym", str(data_dir / "example_4x3.mat")])
    assert code == 0 and "bidegree (2,1)" in out
    code, out = run(["fiber", str(data_dir / "example_4x3.mat")])
    assert code == 0 and out.startswith("principal, degree 5")


def test_parse_error_reports_position(tmp_path, capsys):
    bad = tmp_path / "bad.mat"
    bad.write_text("ring d=2 T=3\nmatrix 3 2\nx1 0\nx2 x1\n0 x2^^2\n")
    code, _ = run(["report", str(bad)])
    assert code == 2
    assert f"{bad}:5:6:" in capsys.readouterr().err


@pytest.mark.parametrize("text, where", [
    ("matrix 3 2\n", ":1:1"),
    ("ring d=2 T=3\nmatrix 3 2\nx1 0\nx2\n0 x2\n", ":4"),
    ("ring d=2\n", ":1"),
    ("ring d=2 T=3 field=32001\nmatrix 1 1\nx1\n", ":1"),
])
def test_matrix_file_errors(text, where):
    with pytest.raises(MatrixFileError) as info:
        parse_matrix_file(text, "f.mat")
    assert str(info.value).startswith("f.mat" + where)


def test_format_roundtrip(data_dir):
    mf = parse_matrix_file((data_dir / "neg_example.mat").read_text())
    again = parse_matrix_file(format_matrix_file(mf.matrix, ["header line"]))
    assert again.matrix == mf.matrix and again.comments == ("header line",)


def test_validation_and_missing_file(data_dir, capsys):
    assert run(["report", str(data_dir / "nope.mat")])[0] == 2
    assert run(["random", "--d", "7", "--m", "3", "--n", "1"])[0] == 2
    assert run(["dual", str(data_dir / "example_4x3.mat"), "--level", "0"])[0] == 2
    assert run(["bogus"])[0] == 2
    capsys.readouterr()


def test_budget_exit_code(data_dir, capsys):
    assert run(["--max-pairs", "3", "report", str(data_dir / "example_4x3.mat")])[0] == 3
    assert "budget" in capsys.readouterr().err


def test_random_json(tmp_path):
    code, out = run(["random", "--d", "2", "--m", "3", "--n", "2", "--seed", "1", "--trials", "3",
                     "--json", "--workers", "1", "--dump-dir", str(tmp_path)])
    s = json.loads(out)
    assert code == 0 and s["trials_run"] == 3 and s["sat_index_histogram"] == {"2": 3}


def test_random_violation_exit_code(tmp_path, monkeypatch):
    import reesalg.harness as h

    monkeypatch.setattr(h, "theorem_violations", lambda r: ["forced"])
    code, out = run(["random", "--d", "2", "--m", "3", "--n", "1", "--trials", "1",
                     "--workers", "1", "--dump-dir", str(tmp_path)])
    assert code == 4 and "counterexample_dumps" in out


def test_module_entry_point(data_dir):
    proc = subprocess.run([sys.executable, "-m", "reesalg", "fiber", str(data_dir / "example_4x3.mat")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "degree 5" in proc.stdout
