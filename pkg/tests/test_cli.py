import io
import json
import shutil
import subprocess
import sys

import pytest

from dialccs.cli import main
from dialccs.dialgebra import FiniteDialgebra, bff_bisim_pr
from dialccs.mealy import parity_machine


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_parse():
    code, out, _ = run("parse", "tau.0 + 'c")
    assert (code, out) == (0, "Sum(Tau(Nil), Output('c'))\n")
    assert run("parse", "(a.0 | 'a)")[:2] == (0, "Par(Input('a', Nil), Output('a'))\n")
    code, _, err = run("parse", "tau.")
    assert code == 2 and "line 1, column 5" in err


def test_parse_file_and_at_syntax(tmp_path):
    f = tmp_path / "t.ccs"
    f.write_text("a.'b\n  | 'a\n")
    assert run("parse", "-f", str(f))[:2] == (0, "Par(Input('a', Output('b')), Output('a'))\n")
    assert run("check", f"@{f}", f"@{f}")[0] == 0
    assert run("parse")[0] == 2
    assert run("parse", "0", "-f", str(f))[0] == 2
    assert run("parse", "-f", str(tmp_path / "missing"))[0] == 2


def test_lts():
    code, out, _ = run("lts", "tau.0")
    assert code == 0 and out.splitlines()[0] == "2 states, 1 transitions"
    code, out, _ = run("lts", "a.0 | 'a", "--format", "json")
    data = json.loads(out)
    assert len(data["states"]) == 4
    assert any(t["label"] == "tau" for t in data["transitions"])
    code, out, _ = run("lts", "0", "--format", "dot")
    assert out.count("[label=") == 1


def test_dialgebra_export():
    code, out, _ = run("dialgebra", "tau.0", "--format", "json", "--fresh", "1")
    data = json.loads(out)
    assert data["shapes"][1] == {"id": "send", "params": ["fresh_0"]}
    assert "'fresh_0 | 0" in data["states"]


def test_check():
    pair = ("c.'c.0 + tau.0", "tau.0")
    assert run("check", *pair, "--semantics", "sync")[:2] == (1, "distinguished\n")
    assert run("check", *pair, "--semantics", "async")[:2] == (0, "equivalent\n")
    assert run("check", *pair, "--semantics", "async-oracle", "--form", "disjunctive")[0] == 0
    assert run("check", "0", "0", "--semantics", "async-oracle")[:2] == (0, "equivalent\n")


def test_check_certificates():
    code, out, _ = run("check", "'a", "'b", "--semantics", "async-oracle", "--certificate")
    assert code == 1
    body = json.loads(out.split("\n", 1)[1])
    assert body["verdict"] == "distinguished" and len(body["trace"]) == 1
    code, out, _ = run("check", "c.'c.0 + tau.0", "tau.0", "--certificate")
    body = json.loads(out.split("\n", 1)[1])
    assert code == 0 and body["states"][:2] == ["c.'c + tau.0", "tau.0"]
    code, out, _ = run("check", "tau.0", "0", "--semantics", "sync", "--certificate")
    assert code == 1 and json.loads(out.split("\n", 1)[1])["partition"] == [[0], [1]]


def test_minimize():
    code, out, err = run("minimize", "0")
    assert code == 0 and err == "states: 1 -> 1\n"
    code, out, err = run("minimize", "tau.0 + tau.0", "--format", "json")
    before, after = map(int, err.split(":")[1].split("->"))
    assert after <= before
    code, out, err = run("minimize", "tau.'a | tau.'a", "--semantics", "sync")
    assert err == "states: 9 -> 6\n"


def test_minimize_idempotent():
    _, out, err = run("minimize", "tau.('a | 'a) + tau.('a | 'a)", "--format", "json")
    before, after = map(int, err.split(":")[1].split("->"))
    assert after < before
    q = FiniteDialgebra.from_json(json.loads(out))
    assert q.n_states == after
    assert len(bff_bisim_pr(q)) == after


def test_cap_exit_code(monkeypatch):
    assert run("--cap", "2", "lts", "tau.tau.0")[0] == 3
    monkeypatch.setenv("CCS_STATE_CAP", "2")
    assert run("check", "tau.tau.0", "0")[0] == 3
    monkeypatch.setenv("CCS_STATE_CAP", "x")
    assert run("lts", "0")[0] == 2


def test_random_modes():
    code, out, _ = run("random", "--mode", "agreement", "--count", "50", "--size", "8")
    assert code == 0 and out.startswith("agreement: 50/50 pairs agree")
    code, out, _ = run("random", "--mode", "inclusion", "--count", "50")
    assert code == 0 and out.startswith("inclusion:")
    code, out, _ = run("random", "--mode", "equivalence-laws", "--count", "30")
    assert code == 0 and out.startswith("equivalence-laws: 30 triples pass")
    assert run("random", "--count", "0")[:2] == (0, "agreement: 0/0 pairs agree (0 equivalent, 0 distinguished)\n")


def test_random_is_deterministic():
    a = run("random", "--seed", "7", "--count", "40", "--size", "9")
    b = run("random", "--seed", "7", "--count", "40", "--size", "9")
    assert a == b


def test_random_rejects_bad_flags():
    assert run("random", "--size", "99")[0] == 2
    assert run("random", "--count", "-1")[0] == 2
    with pytest.raises(SystemExit) as exc:
        run("random", "--bogus")
    assert exc.value.code == 2


def test_mealy(tmp_path):
    f = tmp_path / "parity.json"
    f.write_text(json.dumps(parity_machine().to_json()))
    assert run("mealy", str(f), "even", "odd")[:2] == (1, "distinguished\n")
    assert run("mealy", str(f), "odd", "odd")[:2] == (0, "equivalent\n")
    assert run("mealy", str(f), "odd", "zero")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"states": ["s"], "inputs": [], "outputs": [], "trans": [{"in": "i"}]}')
    code, _, err = run("mealy", str(bad), "s", "s")
    assert code == 2 and "$.trans[0].in" in err


@pytest.mark.skipif(shutil.which("ccs") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["ccs", "check", "c.'c.0 + tau.0", "tau.0", "--semantics", "sync"],
                          capture_output=True, text=True)
    assert (proc.returncode, proc.stdout) == (1, "distinguished\n")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dialccs.cli", "parse", "0"],
                          capture_output=True, text=True)
    assert (proc.returncode, proc.stdout) == (0, "Nil\n")
