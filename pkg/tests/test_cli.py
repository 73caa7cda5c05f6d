import inspect
import io
import json
import subprocess
import sys

import pytest

from exactnt import cli


def call(argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(stdin)))
    return cli.run(argv)


def write(tmp_path, doc, name="in.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


EXPECTED_COMMANDS = {
    "coprime-basis", "lll", "kernel-image",
    "abgroup structure", "abgroup order", "abgroup exponent", "abgroup hom",
    "abgroup tensor", "abgroup torsion", "order validate", "order disc", "order dual",
    "ideal arith", "ideal blowup", "ideal coprime-basis", "ideal invertible", "units kernel",
    "finring nil", "finring local", "finring reduced", "maxorder compute", "maxorder decide",
    "symbol legendre", "symbol jacobi", "symbol kronecker", "symbol auto-sign", "symbol ideal",
}


def test_registry_covers_commands_with_library_calls():
    names = {" ".join(c.path) for c in cli.REGISTRY}
    assert names == EXPECTED_COMMANDS
    for c in cli.REGISTRY:
        assert callable(c.library)
        assert inspect.getmodule(c.library).__name__.startswith("exactnt.")
        assert not inspect.getmodule(c.library).__name__.endswith(".cli")


def test_coprime_basis_command():
    code, env, _ = cli.run(["coprime-basis", "4500", "5400"])
    assert code == 0 and env["status"] == "ok" and env["version"] == "1"
    assert sorted(env["result"]["basis"], key=int) == ["5", "6"]


def test_jacobi_command():
    code, env, _ = cli.run(["symbol", "jacobi", "1001", "9907"])
    assert code == 0 and env["result"]["symbol"] == "-1"


def test_exit_codes(tmp_path):
    assert cli.run(["kernel-image", write(tmp_path, {"matrix": [["1", "2"], ["3"]]})])[0] == 1
    assert cli.run(["kernel-image", write(tmp_path, {"matrix": [["1", "x"]]})])[0] == 1
    assert cli.run([])[0] == 1
    assert cli.run(["no-such-command"])[0] == 1
    assert cli.run(["symbol", "legendre", "3", "8"])[0] == 2
    assert cli.run(["symbol", "jacobi", "3", "9"])[0] == 2
    bad = {"group": {"cyclic": ["4"]}, "sigma": [["2"]]}
    assert cli.run(["symbol", "auto-sign", write(tmp_path, bad)])[0] == 2
    # a composite whose factors exceed what the oracle may spend
    big = str((2 ** 61 - 1) * (2 ** 89 - 1))
    doc = {"ring": {"mod": big}}
    code, env, _ = cli.run(["--oracle-budget", "3", "finring", "reduced", write(tmp_path, doc)])
    assert code == 3 and env["diagnostics"][0]["type"] == "OracleBudgetExceeded"


def test_stdin_and_finite_rings(monkeypatch):
    code, env, _ = call(["finring", "nil", "-"], {"ring": {"mod": "12"}, "rad": "6"}, monkeypatch)
    assert code == 0 and env["result"]["nilradical"]["size"] == "2"
    code, env, _ = call(["finring", "local", "-"], {"ring": {"mod": "8"}}, monkeypatch)
    assert env["result"]["local"] is True


def test_orders_and_ideals(tmp_path):
    sqrt5 = {"monic": ["-5", "0", "1"]}
    code, env, _ = cli.run(["maxorder", "compute", write(tmp_path, {"order": sqrt5})])
    assert code == 0 and env["result"]["index"] == "2" and env["result"]["discriminant"] == "5"
    code, env, _ = cli.run(["maxorder", "decide", write(tmp_path, {"order": sqrt5})])
    assert env["result"]["maximal"] is False
    code, env, _ = cli.run(["order", "disc", write(tmp_path, {"order": {"monic": ["1", "0", "1"]}})])
    assert code == 0
    gauss = {"monic": ["1", "0", "1"]}
    doc = {"order": gauss, "op": "product", "I": {"elements": [["1", "1"]]},
           "J": {"elements": [["1", "-1"]]}}
    code, env, _ = cli.run(["ideal", "arith", write(tmp_path, doc)])
    assert code == 0
    doc = {"order": gauss, "ideal": {"elements": [["3", "0"]]}, "a": ["1", "1"]}
    code, env, _ = cli.run(["symbol", "ideal", write(tmp_path, doc)])
    assert code == 0 and env["result"]["symbol"] == "-1"


def test_units_kernel_and_transcript(tmp_path):
    doc = {"order": {"monic": ["-2", "0", "1"]}, "elements": [["1", "1"], ["-1", "1"]]}
    out = tmp_path / "t.txt"
    argv = ["--transcript", str(out), "units", "kernel", write(tmp_path, doc)]
    buf = io.StringIO()
    old = sys.stdout
    sys.stdout = buf
    try:
        code = cli.main(argv)
    finally:
        sys.stdout = old
    env = json.loads(buf.getvalue())
    assert code == 0
    k = env["result"]["kernel"]
    assert k in ([["1"], ["1"]], [["-1"], ["-1"]])
    text = out.read_text()
    assert text.startswith("# units kernel -> ok") and "verified [[-1, -1]]" in text


FIXTURES = [
    ("matrix", [["1", "2/4"], ["-3", "0"]]),
    ("matrix", {"rows": "0", "cols": "3", "entries": []}),
    ("group", {"cyclic": ["4", "6"]}),
    ("group", {"n": "2", "relations": [["2", "0"], ["0", "3"]]}),
    ("order", {"monic": ["-2", "0", "0", "1"]}),
    ("finite_ring", {"mod": "12"}),
]


@pytest.mark.parametrize("kind,doc", FIXTURES)
def test_round_trip(kind, doc):
    once = cli.canonical(kind, doc)
    # canonical output is itself a valid input, and a fixed point
    again = cli.canonical(kind, once)
    assert again == once
    assert json.loads(json.dumps(once)) == once


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "exactnt.cli", "symbol", "kronecker", "3", "8"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["result"]["symbol"] == "-1"
