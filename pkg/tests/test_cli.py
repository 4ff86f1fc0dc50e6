import json
import subprocess
import sys

import pytest

from klw import __version__
from klw.cli import expected_fact1, expected_fact2, main
from klw.coxeter import CartanType


@pytest.fixture(autouse=True)
def no_cache(monkeypatch):
    monkeypatch.delenv("KLW_TABLE_DIR", raising=False)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out)


def test_klpoly_examples(capsys):
    assert run(capsys, "klpoly", "-t", "A", "-r", "3", "-x", "2", "-w", "2132", "--format", "text")[:2] == (0, "1+q\n")
    assert run(capsys, "klpoly", "-t", "A", "-r", "2", "-x", "", "-w", "121", "--format", "text")[:2] == (0, "1\n")
    assert run(capsys, "klpoly", "-t", "A", "-r", "2", "-x", "12", "-w", "21", "--format", "text")[:2] == (0, "0\n")


def test_klpoly_report(capsys):
    code, rep = run_json(capsys, "klpoly", "-t", "A", "-r", "3", "-x", "2", "-w", "2132")
    assert code == 0
    assert rep["schema"] == 1 and rep["version"] == __version__
    assert rep["normalization"] == "v-soergel"
    assert rep["cartan"] == "A3"
    assert rep["command"][0] == "klpoly"
    assert rep["result"]["P"] == "1+q" and rep["result"]["at_one"] == 2 and rep["result"]["mu"] == 1


def test_reports_are_byte_identical(capsys):
    argv = ("verify", "all", "-t", "B", "-r", "2")
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first
    assert list(json.loads(first)) == sorted(json.loads(first))


def test_usage_and_capacity_errors(capsys):
    code, out, err = run(capsys, "klpoly", "-t", "A", "-r", "2", "-x", "3", "-w", "1")
    assert code == 2 and out == "" and "out of range" in err
    assert run(capsys, "klpoly", "-t", "A", "-r", "2", "-x", "x", "-w", "1")[0] == 2
    assert run(capsys, "klpoly", "-t", "D", "-r", "4", "-x", "", "-w", "1")[0] == 2
    assert run(capsys, "klpoly", "-t", "A3", "-r", "3", "-x", "", "-w", "1")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "verify", "everything", "-t", "A", "-r", "2")[0] == 2
    assert run(capsys, "verify", "wall", "-t", "A", "-r", "2", "-J", "7")[0] == 2
    assert run(capsys, "--jobs", "0", "cells", "-t", "A", "-r", "2")[0] == 2
    code, out, err = run(capsys, "cells", "-t", "B", "-r", "9")
    assert code == 3 and "max-order" in err
    assert run(capsys, "--max-order", "10", "cells", "-t", "A", "-r", "3")[0] == 3


def test_cells_two_sided_with_shapes(capsys):
    code, rep = run_json(capsys, "cells", "-t", "A", "-r", "2", "--side", "two-sided")
    res = rep["result"]
    assert code == 0 and res["count"] == 3
    assert res["shapes"] == [[3], [2, 1], [1, 1, 1]]
    assert res["agrees_with_rs"] is True
    assert res["cells"] == [[""], ["1", "2", "12", "21"], ["121"]]


def test_cells_counts_and_formats(capsys):
    assert run_json(capsys, "cells", "-t", "A", "-r", "3", "--side", "left")[1]["result"]["count"] == 10
    assert run_json(capsys, "cells", "-t", "A", "-r", "4", "--side", "left")[1]["result"]["count"] == 26
    code, dot, _ = run(capsys, "cells", "-t", "B", "-r", "2", "--side", "left", "--format", "dot")
    assert code == 0 and dot.startswith("digraph")
    assert sum("tooltip" in line for line in dot.splitlines()) == 4
    code, text, _ = run(capsys, "cells", "-t", "A", "-r", "3", "--side", "two-sided", "--format", "table")
    assert code == 0 and len(text.splitlines()) == 10 and "shape 2,2" in text
    rep = run_json(capsys, "cells", "-t", "B", "-r", "2", "--side", "right")[1]
    assert "shapes" not in rep["result"]


def test_verify_fact2(capsys):
    code, rep = run_json(capsys, "verify", "fact2", "-t", "A", "-r", "4")
    assert code == 0 and rep["status"] == "PASS" and rep["result"]["fact2"]["holds"] is True
    code, rep = run_json(capsys, "verify", "fact2", "-t", "B", "-r", "2")
    f2 = rep["result"]["fact2"]
    assert code == 0 and rep["status"] == "PASS"
    assert f2["holds"] is False and f2["expected_holds"] is False
    assert f2["witness_pair"] == ["1", "121"]


def test_verify_thmout(capsys):
    code, rep = run_json(capsys, "verify", "thmout", "-t", "A", "-r", "2", "-J", "1")
    walls = rep["result"]["thmout"]["walls"]
    assert code == 0 and len(walls) == 1 and walls[0]["J"] == [1]
    assert [r["multiplicity"] for r in walls[0]["rows"]] == [2, 2, 2]
    code, rep = run_json(capsys, "verify", "thmout", "-t", "B", "-r", "2", "-J", "1,2")
    assert code == 0 and rep["result"]["thmout"]["walls"][0]["rows"][0]["multiplicity"] == 8


@pytest.mark.parametrize("cartan", ["A1", "A3", "B2", "B3"])
def test_verify_all(cartan, capsys):
    code, rep = run_json(capsys, "verify", "all", "-t", cartan)
    assert code == 0 and rep["status"] == "PASS"
    assert set(rep["result"]) == {"fact1", "fact2", "wall", "thmout", "sl2"}


def test_verify_sl2(capsys):
    code, rep = run_json(capsys, "verify", "sl2", "-t", "A", "-r", "1")
    res = rep["result"]["sl2"]
    assert code == 0
    assert [c["classification"] for c in res["cases"]] == ["NotInteger", "IntegerAtLeast2", "IntegerOne", "Zero"]
    assert res["a1_block"]["projective_simple"] == {"e": 1, "1": 2}


def test_expected_outcomes():
    assert expected_fact1(CartanType.parse("B4")) and not expected_fact1(CartanType.parse("B5"))
    assert not expected_fact1(CartanType.parse("A2xB6"))
    assert expected_fact2(CartanType.parse("A7xB1")) and not expected_fact2(CartanType.parse("B2"))


def test_table_round_trip(tmp_path, capsys):
    binp, jsonp = tmp_path / "a3.klwt", tmp_path / "a3.json"
    assert run(capsys, "table", "build", "-t", "A", "-r", "3", str(binp))[0] == 0
    assert run(capsys, "table", "export", "-t", "A", "-r", "3", str(jsonp))[0] == 0
    code, rep = run_json(capsys, "table", "import", str(binp))
    assert code == 0 and rep["cartan"] == "A3" and rep["result"]["order"] == 24
    assert run(capsys, "table", "import", str(jsonp), "-t", "A", "-r", "3")[0] == 0
    assert run(capsys, "table", "import", str(jsonp), "-t", "B", "-r", "3")[0] == 4
    again = tmp_path / "again.klwt"
    assert run(capsys, "table", "build", "-t", "A3", str(again))[0] == 0
    assert again.read_bytes() == binp.read_bytes()


def test_table_format_errors(tmp_path, capsys):
    good = tmp_path / "b2.klwt"
    run(capsys, "table", "build", "-t", "B", "-r", "2", str(good))
    trunc = tmp_path / "trunc.klwt"
    trunc.write_bytes(good.read_bytes()[:-5])
    code, out, err = run(capsys, "table", "import", str(trunc))
    assert code == 4 and out == "" and "payload" in err
    old = tmp_path / "old.json"
    run(capsys, "table", "export", "-t", "B", "-r", "2", str(old))
    old.write_text(old.read_text().replace(f'"version":"{__version__}"', '"version":"0.0.1"'))
    assert run(capsys, "table", "import", str(old))[0] == 4
    assert run(capsys, "table", "import", str(tmp_path / "missing.klwt"))[0] == 4
    assert run(capsys, "table", "export", "-t", "B", "-r", "2")[0] == 2


def test_table_cache(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("KLW_TABLE_DIR", str(tmp_path))
    code, _, err = run(capsys, "klpoly", "-t", "B", "-r", "3", "-x", "", "-w", "1212")
    assert code == 0 and "cached" in err and (tmp_path / "B3.klwt").exists()
    code, _, err = run(capsys, "klpoly", "-t", "B", "-r", "3", "-x", "", "-w", "1212")
    assert code == 0 and "loaded" in err
    (tmp_path / "B3.klwt").write_bytes(b"junk")
    code, _, err = run(capsys, "cells", "-t", "B", "-r", "3")
    assert code == 0 and "ignoring" in err
    assert (tmp_path / "B3.klwt").read_bytes().startswith(b"KLWT")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "klw", "klpoly", "-t", "A", "-r", "3", "-x", "2", "-w", "2132",
                           "--format", "text"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "1+q\n"
