import json

import pytest

from tutte_cli.main import EXIT_FAIL, EXIT_INPUT, EXIT_PASS, InputError, main, parse_vars
from unitutte_core.config import settings

U12_DOC = {"type": "matroid", "n": 2, "bases": [[0], [1]]}
EDGE_DOC = {"type": "graph", "vertices": 2, "edges": [[0, 1]]}
DOUBLED_DOC = {"type": "arithmetic_presentation", "free_rank": 1, "columns": [[2]]}


def _out(capsys) -> list[str]:
    return capsys.readouterr().out.strip().splitlines()


def test_compute_tutte(capsys, write_doc):
    assert main(["compute", "tutte", "--input", write_doc(U12_DOC)]) == EXIT_PASS
    assert _out(capsys) == ["1*x^1 + 1*y^1"]


def test_compute_dichromatic(capsys, write_doc):
    assert main(["compute", "dichromatic", "--input", write_doc(EDGE_DOC)]) == EXIT_PASS
    assert _out(capsys) == ["1*a^2 + 1*a^1"]


def test_compute_with_substitution(capsys, write_doc):
    path = write_doc(EDGE_DOC)
    assert main(["compute", "dichromatic", "--input", path, "--vars", "a=2"]) == EXIT_PASS
    assert _out(capsys) == ["6"]


def test_compute_bollobas_riordan_half_axes(capsys, write_doc):
    path = write_doc({"type": "delta", "n": 1, "feasible": [[], [0]]})
    assert main(["compute", "br", "--input", path]) == EXIT_PASS
    assert set(_out(capsys)[0].split(" + ")) == {"1*p^(1/2)", "1*q^(1/2)"}
    # p and q take the value of their square roots
    assert main(["compute", "br", "--input", path, "--vars", "p=2,q=3"]) == EXIT_PASS
    assert _out(capsys) == ["5"]


def test_compute_arithmetic_from_presentation(capsys, write_doc):
    path = write_doc(DOUBLED_DOC)
    assert main(["compute", "arith-tutte-full", "--input", path]) == EXIT_PASS
    assert _out(capsys) == ["1*x^1 + 1"]
    assert main(["compute", "arith-tutte-plocal", "--input", path, "--prime", "3"]) == EXIT_PASS
    assert _out(capsys) == ["1*x^1"]


def test_compute_json(capsys, write_doc):
    path = write_doc(U12_DOC)
    assert main(["compute", "tutte", "--input", path, "--format", "json"]) == EXIT_PASS
    doc = json.loads(capsys.readouterr().out)
    assert doc["invariant"] == "tutte"
    assert doc["text"] == "1*x^1 + 1*y^1"
    assert {"coeff": "1", "monomial": {"x": 1}} in doc["terms"]


def _run(capsys, argv: list[str], threads: int) -> str:
    assert main([*argv, "--threads", str(threads)]) == EXIT_PASS
    return capsys.readouterr().out


def test_thread_count_does_not_change_output(capsys, write_doc, monkeypatch):
    monkeypatch.setattr(settings, "threads", settings.threads)
    path = write_doc(U12_DOC)
    compute = ["compute", "tutte", "--input", path]
    text = _run(capsys, compute, 1)
    assert _run(capsys, compute, 8) == text
    assert text.strip() == "1*x^1 + 1*y^1"

    as_json = _run(capsys, [*compute, "--format", "json"], 1)
    assert _run(capsys, [*compute, "--format", "json"], 8) == as_json
    assert json.loads(as_json)["text"] == "1*x^1 + 1*y^1"

    verify = ["verify", "krs", "--enumerate", "3"]
    report = _run(capsys, verify, 1)
    assert _run(capsys, verify, 8) == report
    assert report.strip().splitlines() == ["PASS 15 instances"]


def test_relative_legend_lines(capsys, write_doc):
    doc = {"type": "relative", "matroid": U12_DOC, "zero_set": [1]}
    assert main(["compute", "tutte", "--input", write_doc(doc)]) == EXIT_PASS
    lines = _out(capsys)
    assert lines[1].startswith("C0 = ")
    assert lines[2].startswith("C1 = ")


@pytest.mark.parametrize(
    "identity, size, line",
    [
        ("delta-count", 2, "delta-count[2] = 15"),
        ("dmp-count", 2, "dmp-count[2] = 38"),
        ("nonsaturated-count", 2, "nonsaturated-count[2] = 3"),
        ("matroid-count", 4, "matroid-count[4] = 17"),
    ],
)
def test_verify_counts(capsys, identity, size, line):
    assert main(["verify", identity, "--size", str(size)]) == EXIT_PASS
    out = _out(capsys)
    assert out[0] == line
    assert out[1] == "PASS 1 instances"


def test_verify_identity_over_enumeration(capsys):
    assert main(["verify", "krs", "--enumerate", "3"]) == EXIT_PASS
    assert _out(capsys)[-1].startswith("PASS")


def test_verify_random_instances(capsys):
    assert main(["verify", "delta-prefactor", "--random", "3", "--size", "3"]) == EXIT_PASS
    assert _out(capsys) == ["PASS 3 instances"]


def test_verify_reports_failure(capsys, write_doc):
    doc = {"type": "delta", "n": 2, "feasible": [[], [0], [0, 1]]}
    assert main(["verify", "bounds-minor", "--input", write_doc(doc)]) == EXIT_FAIL
    out = _out(capsys)
    assert out[0] == "FAIL bounds-minor"
    assert json.loads(out[1])["identity"].startswith("bounds-minor")


def test_verify_global_checks(capsys):
    assert main(["verify", "norm-delta"]) == EXIT_PASS
    assert main(["verify", "ow-relation", "--format", "json"]) == EXIT_PASS
    out = _out(capsys)
    assert json.loads(out[-1])["passed"] is True


def test_grothendieck(capsys):
    assert main(["grothendieck", "delta"]) == EXIT_PASS
    assert "relation: c*l = n*n" in _out(capsys)
    assert main(["grothendieck", "mat"]) == EXIT_PASS
    assert _out(capsys) == ["generators: c, l", "relations: none"]
    assert main(["grothendieck", "sf"]) == EXIT_PASS
    assert _out(capsys)[0].startswith("enumeration unsupported")


def test_enumerate(capsys):
    assert main(["enumerate", "dmp", "--size", "2"]) == EXIT_PASS
    assert _out(capsys) == ["dmp[0] = 1", "dmp[1] = 5", "dmp[2] = 38"]


def test_input_errors(capsys, write_doc, tmp_path):
    assert main(["compute", "tutte", "--input", str(tmp_path / "missing.json")]) == EXIT_INPUT
    assert "error: cannot read" in capsys.readouterr().err
    bad = write_doc({"type": "matroid", "n": 2, "rank": [0, 2, 1, 1]})
    assert main(["compute", "tutte", "--input", bad]) == EXIT_INPUT
    assert main(["compute", "chromatic", "--input", write_doc(U12_DOC)]) == EXIT_INPUT
    assert main(["compute", "tutte", "--input", write_doc(U12_DOC), "--vars", "z=1"]) == EXIT_INPUT
    assert main(["verify", "krs"]) == EXIT_INPUT
    assert main(["enumerate", "submodular"]) == EXIT_INPUT


def test_parse_vars():
    values = parse_vars("x=2, y=1/2")
    assert set(values) == {"x", "y"}
    with pytest.raises(InputError, match="bad substitution"):
        parse_vars("x")
