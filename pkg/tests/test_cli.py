import csv
import io
import json
import subprocess
import sys

import pytest

from gpt_entropy import boxworld as bw
from gpt_entropy.classical import uniform
from gpt_entropy.cli import run
from gpt_entropy.games import build_rac_state
from gpt_entropy.jsonio import dump_state


def _run(*argv):
    buf = io.StringIO()
    code = run([str(a) for a in argv], buf)
    return code, buf.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, state in [("pr", bw.pr_box()), ("bit", uniform(2)), ("rac", build_rac_state()),
                        ("prod", bw.tensor_box(bw.uniform_box(), bw.uniform_box()))]:
        paths[name] = tmp_path / f"{name}.json"
        dump_state(state, paths[name])
    return paths


def test_entropy_of_uniform_bit(files):
    code, out = _run("entropy", files["bit"])
    assert code == 0
    assert json.loads(out)["value_bits"] == 1.0


def test_entropy_of_marginal_and_renyi(files):
    assert json.loads(_run("entropy", files["rac"], "--subsystems", "X0,X1")[1])["value_bits"] == 2.0
    rep = json.loads(_run("entropy", files["pr"], "--alpha", "inf")[1])
    assert rep["quantity"] == "H_inf" and rep["value_bits"] == 1.0
    rep = json.loads(_run("entropy", files["pr"], "--method", "enumerate")[1])
    assert "strategy" in rep["witness"]


def test_chsh_of_pr_box(files):
    code, out = _run("chsh", files["pr"])
    assert code == 0 and json.loads(out)["chsh"] == 4


def test_conditional_and_mutual(files):
    assert json.loads(_run("conditional", files["rac"], "-a", "X0,X1", "-b", "Z")[1])["value_bits"] == 1.0
    assert json.loads(_run("conditional", files["rac"], "-a", "X0", "-b", "Z", "--plus")[1])["value_bits"] == 0.0
    assert json.loads(_run("mutual", files["rac"], "-a", "X0", "-b", "Z")[1])["value_bits"] == 1.0
    assert json.loads(_run("accinfo", files["rac"], "-a", "X0,X1", "-b", "Z")[1])["value_bits"] == 1.0


def test_distance_and_decomp(files):
    rep = json.loads(_run("distance", files["pr"], files["prod"])[1])
    assert rep["distance"] == "1/2"
    rep = json.loads(_run("decomp", files["pr"])[1])
    assert rep["value_bits"] == 0.0 and rep["witness"]["entangled"] == [True]


def test_vertices_csv():
    code, out = _run("vertices", "[[2,2],[2,2]]", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 24
    assert sum(r["product"] == "true" for r in rows) == 16


def test_text_format(files):
    code, out = _run("chsh", files["pr"], "--format", "text")
    assert code == 0 and out == "chsh: 4\n"


def test_game_reports_expected_values():
    vals = json.loads(_run("game", "rac")[1])["values"]
    assert vals["H(X0X1Z)"] == 2.0 and vals["I(X0X1;Z)"] == 1.0
    vals = json.loads(_run("game", "ic")[1])["values"]
    assert vals["IC value"] == 2.0


def test_hyptest_and_code_sim():
    rep = json.loads(_run("hyptest", "--p", "1/2,1/2", "--q", "1/4,3/4", "--n-list", "100,200")[1])
    assert [r["N"] for r in rep["rows"]] == [100, 200]
    assert rep["kl_bits"] == pytest.approx(0.2075187496)
    rep = json.loads(_run("code-sim", "--source", "9/10,1/10", "--n", "200", "--rate", "0.6")[1])
    assert rep["typical"]["upper_ok"] and rep["exact_avg_distance"] > 0


def test_ssa_sweep_text():
    code, out = _run("ssa-sweep", "--step", "1/4", "--format", "text")
    assert code == 0
    assert "bound_certified_threshold" in out


def test_output_is_byte_identical(files):
    assert _run("entropy", files["rac"])[1] == _run("entropy", files["rac"])[1]
    first = _run("code-sim", "--source", "9/10,1/10", "--n", "100", "--rate", "0.6", "--trials", "50", "--seed", "4")
    again = _run("code-sim", "--source", "9/10,1/10", "--n", "100", "--rate", "0.6", "--trials", "50", "--seed", "4")
    assert first == again


def test_guard_exit_code(files):
    code, out = _run("entropy", files["pr"], "--method", "enumerate", "--max-strategies", "3")
    assert code == 2
    assert json.loads(out)["error"] == "guard exceeded"


def test_invalid_input_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"theory": "boxworld", "signature": [[2, 2]], "table": [[1, 2], [1, 2], [1, 0], [1, 2]]}))
    code, out = _run("entropy", bad)
    assert code == 1
    assert "table[2]" in json.loads(out)["message"]
    assert _run("entropy", tmp_path / "missing.json")[0] == 1


def test_signalling_exit_code(tmp_path):
    table = [[int(a == y and b == 0), 1] for x in range(2) for y in range(2) for a in range(2) for b in range(2)]
    path = tmp_path / "sig.json"
    path.write_text(json.dumps({"theory": "boxworld", "signature": [[2, 2], [2, 2]], "table": table}))
    code, out = _run("chsh", path)
    rep = json.loads(out)
    assert code == 1 and rep["error"] == "signalling" and rep["violations"]


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "gpt_entropy", "chsh", str(files["pr"])],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["chsh"] == 4
