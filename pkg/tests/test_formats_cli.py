import subprocess
import sys
from pathlib import Path

import pytest

from pcspwb.cli import run
from pcspwb.core import Instance, builtin_template
from pcspwb.errors import ParseError
from pcspwb.formats import (
    format_assignment, format_instance, format_structure, parse_instance, parse_structure,
)
from pcspwb.pcsp13 import TripleInstance, gen_planted, verify_assignment

from golden_cases import CASES

HERE = Path(__file__).parent
DATA = HERE / "data"


@pytest.fixture
def in_data(monkeypatch):
    monkeypatch.chdir(DATA)


def test_structure_file_equals_builtin():
    A = parse_structure((DATA / "one_in_three.txt").read_text())
    assert A == builtin_template("one-in-three")


def test_named_domain_is_interned():
    A = parse_structure((DATA / "k3_named.txt").read_text())
    assert A == builtin_template("k3")


@pytest.mark.parametrize("text,line", [
    ("structure s\ndomain 2\nrelation R 3\n1 0\nend\n", 4),
    ("structure s\ndomain 2\nrelation R 2\n0 7x\n", 4),
    ("structure s\n1 0\n", 2),
    ("structure s\ndomain 2\nrelation R 1\n0\nend\n1\n", 6),
])
def test_structure_parse_errors(text, line):
    with pytest.raises(ParseError) as exc:
        parse_structure(text)
    assert exc.value.line == line
    assert str(exc.value).startswith(f"line {line}")


def test_empty_files_rejected():
    with pytest.raises(ParseError):
        parse_structure("# only a comment\n")
    with pytest.raises(ParseError):
        parse_instance("")


def test_out_of_domain_tuple_rejected():
    with pytest.raises(ParseError):
        parse_structure("structure s\ndomain 2\nrelation R 1\n5\nend\n")


def test_structure_roundtrip():
    for name in ("one-in-three", "nae", "c2-plus-c3", "k4"):
        A = builtin_template(name)
        assert parse_structure(format_structure(A)) == A


def test_instance_parsing():
    X = parse_instance("triple x y z\n")
    assert isinstance(X, TripleInstance) and X.triples == (("x", "y", "z"),)
    with pytest.raises(ParseError):
        parse_instance("constraint Q a b\n", {"R": 3})
    with pytest.raises(ParseError):
        parse_instance("var a\nconstraint R a b c\n")
    with pytest.raises(ParseError):
        parse_instance("triple a b\n")


def test_instance_roundtrip():
    X, _ = gen_planted(12, 20, 3)
    assert parse_instance(format_instance(X)) == X
    Y = Instance(["a", "b", "c"], [("E", ("a", "b")), ("F", ("c",))])
    assert parse_instance(format_instance(Y)) == Y


def test_assignment_lines():
    assert format_assignment({"x": 1, "y": 0}) == "x = 1\ny = 0\n"


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, in_data):
    argv, code = CASES[name]
    got_code, text = run(argv)
    assert got_code == code
    assert text == (HERE / "golden" / f"{name}.out").read_text()


def test_output_is_deterministic(in_data):
    for argv in (CASES["gen_planted"][0], CASES["pcsp_z"][0], CASES["lab_refute_parity"][0]):
        assert run(argv) == run(argv)


def test_planted_roundtrip_through_cli(tmp_path):
    inst, plant = tmp_path / "inst.txt", tmp_path / "plant.txt"
    code, text = run(["gen", "planted", "--n", "40", "--m", "80", "--seed", "3",
                      "--plant", str(plant)])
    assert code == 0
    inst.write_text(text)
    X = parse_instance(text)
    planted = dict(line.split(" = ") for line in plant.read_text().splitlines())
    assert verify_assignment(X, {k: int(v) for k, v in planted.items()}, "one-in-three")
    code, out = run(["solve-pcsp13nae", str(inst)])
    assert code == 0 and out.startswith("yes\n")
    answer = dict(line.split(" = ") for line in out.splitlines()[1:])
    assert verify_assignment(X, {k: int(v) for k, v in answer.items()}, "nae")


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["solve-pcsp13nae"],
    ["solve-pcsp13nae", "missing-file.txt"],
    ["solve-pcsp13nae", "triangle.txt", "--method", "r"],
    ["poly", "find", "--template", "no-such", "--arity", "2"],
    ["prooflab", "refute", "--p", "7", "--c-size", "2"],
    ["prooflab", "refute", "--p", "9", "--c-size", "1", "--allow-small-p"],
])
def test_usage_errors(argv, in_data):
    code, text = run(argv)
    assert code == 2
    assert "error" in text or "usage" in text


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("structure s\ndomain 2\nrelation R 3\n1 0\n")
    code, text = run(["poly", "find", "--template", str(bad), "--arity", "2"])
    assert code == 2 and "line 4" in text


def test_resource_limit_exit_code(in_data, monkeypatch):
    monkeypatch.setenv("PCSPWB_LIMITS", "max_cells=100")
    code, text = run(["poly", "find", "--template", "nae", "--arity", "8"])
    assert code == 3 and "resource limit" in text
    monkeypatch.delenv("PCSPWB_LIMITS")
    assert run(["solve-csp", "clique5.txt", "--template", "k4"])[0] == 1
    monkeypatch.setenv("PCSPWB_LIMITS", "max_nodes=2")
    code, _ = run(["solve-csp", "clique5.txt", "--template", "k4"])
    assert code == 3


def test_bad_limits_env(in_data, monkeypatch):
    monkeypatch.setenv("PCSPWB_LIMITS", "max_bananas=3")
    assert run(["prooflab", "area", "--matrix", "ones3.txt"])[0] == 2


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pcspwb.cli", "solve-pcsp13nae", "xxx.txt"],
                          cwd=DATA, capture_output=True, text=True)
    assert proc.returncode == 1 and proc.stdout == "no\n"
