import json
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lgsing.cli import COMMANDS, SCHEMA, main, run_command
from lgsing.problem import ProblemFile, dump_problem, parse_problem

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"
RESIDUE = str(PROBLEMS / "residue_x2.toml")
MONOIDAL = str(PROBLEMS / "monoidality_xy.toml")
STAB = str(PROBLEMS / "stabilize.toml")
POINT = str(PROBLEMS / "point.toml")


def run(*argv):
    return run_command(list(argv))


def write(tmp_path, text, name="p.toml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


# ---------------------------------------------------------------- documented examples

def test_milnor_example():
    code, rep = run("milnor", "--field", "Q", "--vars", "x,y", "--f", "x^3+y^2")
    assert code == 0 and rep["milnor"] == 2
    assert rep["schema"] == SCHEMA and rep["status"] == "ok" and rep["command"] == "milnor"


def test_stable_hom_example():
    code, rep = run("stable-hom", RESIDUE, "--source", "E", "--target", "E")
    assert code == 0 and rep["dims"] == {"even": 1, "odd": 1}


def test_non_isolated_milnor_is_infinite():
    code, rep = run("milnor", "--vars", "x,y", "--f", "x^2*y")
    assert code == 0 and rep["milnor"] == "INFINITE"


# ---------------------------------------------------------------- every command

SUCCESS = [
    ("validate", RESIDUE),
    ("hom", RESIDUE, "--source", "F", "--target", "F"),
    ("stable-hom", RESIDUE, "--source", "K", "--target", "E"),
    ("null-homotopy", RESIDUE, "--morphism", "t"),
    ("null-homotopy", RESIDUE, "--object", "K"),
    ("box", MONOIDAL, "--left", "Ex", "--right", "Ey"),
    ("fold", RESIDUE, "--object", "E"),
    ("monoidality", MONOIDAL, "--left", "kx", "--right", "ky"),
    ("contraction", RESIDUE, "--object", "C"),
    ("stabilize", STAB, "--object", "k"),
    ("perfect", RESIDUE, "--object", "E"),
    ("u-torsion", POINT, "--object", "T2"),
    ("rhom-point", POINT, "--object", "T"),
    ("u-cone", POINT, "--object", "K"),
    ("milnor", "--vars", "x", "--f", "x^5"),
    ("ts-check", "--vars", "x,y", "--f", "x^3", "--g", "y^3"),
    ("point-report", "--field", "F101"),
]


def test_every_command_is_exercised():
    assert {argv[0] for argv in SUCCESS} == set(COMMANDS)


@pytest.mark.parametrize("argv", SUCCESS, ids=[" ".join(a[:1] + a[2:]) for a in SUCCESS])
def test_commands_succeed(argv):
    code, rep = run(*argv)
    assert code == 0, rep
    assert rep["command"] == argv[0] and rep["status"] == "ok" and isinstance(rep["notes"], list)


def test_command_payloads():
    assert run("fold", RESIDUE, "--object", "E")[1]["object"]["d0"] == [["x"]]
    assert run("null-homotopy", RESIDUE, "--object", "E")[1]["witness_present"] is False
    assert run("null-homotopy", RESIDUE, "--morphism", "t")[1]["witness_present"] is True
    assert run("perfect", RESIDUE, "--object", "K")[1]["perfect"] is True
    rep = run("perfect", RESIDUE, "--object", "E")[1]
    assert rep["perfect"] is False and rep["refutation"]
    assert run("u-torsion", POINT, "--object", "T")[1]["verdict"] == "not_torsion"
    rep = run("u-torsion", POINT, "--object", "K")[1]
    assert (rep["verdict"], rep["order"]) == ("torsion", 1)
    rep = run("rhom-point", POINT, "--object", "K")[1]
    assert [d for d, v in rep["dims"] if v] == [-1]
    rep = run("stabilize", STAB, "--object", "free")[1]
    assert rep["object"]["ranks"] == [0, 0] and rep["dims"] == {"even": 0, "odd": 0}
    rep = run("point-report", "--field", "Q")[1]
    assert rep["dims"] == {"even": 1, "odd": 0} and rep["u_torsion"] == "not_torsion"
    rep = run("ts-check", MONOIDAL, "--f", "x^2", "--g", "y^2", "--left", "Ex", "--right", "Ey")[1]
    assert rep["dims"] == rep["kunneth_dims"] == {"even": 2, "odd": 2}
    assert rep["milnor"] == {"f": 1, "g": 1, "sum": 1}


def test_window_flag_overrides_params():
    rep = run("rhom-point", POINT, "--object", "T", "--window", "2")[1]
    assert [d for d, _ in rep["dims"]] == list(range(-4, 5))


# ---------------------------------------------------------------- fault injection

CORRUPT = """
[ring]
vars = ["x"]
[potential]
f = "x^3"
[objects.good]
kind = "mf"
d0 = [["x"]]
d1 = [["x^2"]]
[objects.bad]
kind = "mf"
d0 = [["x", "0"], ["0", "x^2"]]
d1 = [["x^2", "0"], ["0", "x^2"]]
"""


def test_corrupted_d1_names_the_entry(tmp_path):
    code, rep = run("validate", write(tmp_path, CORRUPT))
    assert code == 1 and rep["status"] == "violation"
    assert rep["object"] == "bad"
    assert rep["entry"][:2] == [1, 1] and rep["entry"][2] in ("x^4 - x^3", "-x^3 + x^4")


@pytest.mark.parametrize("text,fragment", [
    ("[ring\nvars = 1", "malformed"),
    ("[ring]\nvars=['x']\n[potential]\nf='x^'\n", "potential.f"),
    ("[ring]\nvars=['x']\n[potential]\nf='x'\n[extra]\na=1\n", "unknown section"),
    ("[ring]\nvars=['x']\ncolour='red'\n", "unknown key"),
    ("[ring]\nvars=['x']\n[potential]\nf='x^2'\n[objects.A]\nkind='blob'\n", "kind"),
    ("[ring]\nvars=['x']\n[potential]\nf='x^2'\n[objects.A]\nkind='mf'\nd0=[['x','1']]\nd1=[['x']]\n", "d0"),
    ("[ring]\nvars=['x']\n[potential]\nf='x^2'\n[objects.A]\nkind='mf'\nd0=[['x'],['1','2']]\nd1=[['x']]\n", "ragged"),
    ("[ring]\nfield='F4'\nvars=['x']\n", "ring"),
    ("[ring]\nvars=[]\n[objects.T]\nkind='builtin'\nname='telescope'\nn=0\n", "objects.T"),
    ("[ring]\nvars=['x']\n[potential]\nf='x^2+1'\n[objects.k]\nkind='builtin'\nname='k_representative'\n", "objects.k"),
])
def test_parse_errors(tmp_path, text, fragment):
    code, rep = run("validate", write(tmp_path, text))
    assert code == 2 and rep["status"] == "parse-error"
    assert fragment in rep["error"]


def test_parse_error_reports_position(tmp_path):
    code, rep = run("validate", write(tmp_path, "[ring]\nvars=['x']\n[potential]\nf='x^2 + * x'\n"))
    assert code == 2 and "position" in rep


def test_other_input_errors(tmp_path):
    assert run("hom", RESIDUE, "--source", "E", "--target", "nope")[0] == 2
    assert run("hom", RESIDUE, "--source", "E")[0] == 2
    assert run("bogus")[0] == 2
    assert run("validate", str(tmp_path / "missing.toml"))[0] == 2
    assert run("fold", RESIDUE, "--object", "F")[0] == 2
    assert run("contraction", RESIDUE, "--object", "E")[0] == 2
    assert run("milnor", "--field", "F3", "--vars", "x", "--f", "x^3")[0] == 2
    assert run("ts-check", "--vars", "x", "--f", "x^2", "--g", "x^3")[0] == 2
    assert run("stable-hom", MONOIDAL, "--source", "kx", "--target", "ky")[0] == 2
    assert run("u-cone", RESIDUE, "--object", "E")[0] == 2


def test_violations():
    assert run("ts-check", "--vars", "x,y", "--f", "x^2*y", "--g", "0")[0] == 1
    code, rep = run("ts-check", "--vars", "x,y,z", "--f", "x^2*y", "--g", "z^2")
    assert code == 1 and "isolated" in rep["error"]


def test_resource_caps():
    code, rep = run("milnor", "--vars", "x,y,z", "--f", "x^3+y^3+z^3+x*y*z", "--cap", "1")
    assert code == 3 and rep["status"] == "resource-cap"
    code, rep = run("stabilize", STAB, "--object", "k", "--cap", "0")
    assert code == 3
    code, rep = run("stabilize", STAB, "--object", "k", "--cap", "1")
    assert code == 3


def test_small_window_is_indeterminate_not_a_verdict():
    code, rep = run("u-torsion", POINT, "--object", "T2", "--window", "0")
    assert code == 0 and rep["verdict"] == "indeterminate" and rep["order"] is None


# ---------------------------------------------------------------- output contract

def test_main_prints_sorted_json(capsys):
    assert main(["milnor", "--vars", "x", "--f", "x^4"]) == 0
    out = capsys.readouterr().out
    rep = json.loads(out)
    assert rep["milnor"] == 3
    assert out == json.dumps(rep, sort_keys=True, indent=2) + "\n"


def test_byte_identical_reports():
    argv = [sys.executable, "-m", "lgsing", "stabilize", STAB, "--object", "k", "--seed", "7"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and b"seed 7" in a


def test_exit_code_of_the_process(tmp_path):
    p = write(tmp_path, CORRUPT)
    r = subprocess.run([sys.executable, "-m", "lgsing", "validate", p], capture_output=True)
    assert r.returncode == 1 and json.loads(r.stdout)["object"] == "bad"


# ---------------------------------------------------------------- round trip

names = st.from_regex(r"[a-z][a-z0-9_]{0,5}", fullmatch=True)
exprs = st.builds(lambda c, v, e: f"{c}*{v}^{e}", st.integers(-9, 9), st.sampled_from(["x", "y"]),
                  st.integers(0, 4))
matrices = st.integers(1, 3).flatmap(
    lambda c: st.lists(st.lists(exprs, min_size=c, max_size=c), min_size=1, max_size=3))
mf_objects = st.fixed_dictionaries({"kind": st.just("mf"), "d0": matrices, "d1": matrices})
builtins = st.fixed_dictionaries({"kind": st.just("builtin"),
                                  "name": st.sampled_from(["trivial", "koszul_algebra", "telescope"]),
                                  "shift": st.integers(-3, 3)})
problems = st.builds(
    ProblemFile,
    st.fixed_dictionaries({"field": st.sampled_from(["Q", "F101", "F7"]), "vars": st.just(["x", "y"]),
                           "order": st.sampled_from(["degrevlex", "lex"])}),
    exprs,
    st.dictionaries(names, st.one_of(mf_objects, builtins), max_size=3),
    st.dictionaries(st.sampled_from(["window", "cap", "seed"]), st.integers(0, 50), max_size=3),
)


@given(problems)
def test_round_trip(pf):
    assert parse_problem(dump_problem(pf)) == pf


def test_round_trip_of_shipped_problems():
    for path in PROBLEMS.glob("*.toml"):
        pf = parse_problem(path.read_text())
        assert parse_problem(dump_problem(pf)) == pf
