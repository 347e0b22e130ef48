import io
import json
import sys

import pytest

import app
from trustgame import check_decomposition, run_verify_job
from trustgame.python.cli import EXIT_INPUT_ERROR, EXIT_OK, EXIT_VIOLATIONS, Command, run
from trustgame.python.cli import commands
from trustgame.python.cli.suites import SUITES, SuiteResult, VerifyReport
from trustgame.python.core.validators import InvalidArgumentError

from conftest import EXAMPLES_DIR

G3 = str(EXAMPLES_DIR / "g3.txt")
GF = str(EXAMPLES_DIR / "gf.json")


def invoke(verb, graph=G3, **options):
    out = io.StringIO()
    code = run(Command(verb=verb, graph_path=graph, options=options), out)
    return code, out.getvalue()


def invoke_json(verb, graph=G3, **options):
    code, text = invoke(verb, graph, **options)
    assert code == EXIT_OK, text
    return json.loads(text)


def test_value_verb():
    data = invoke_json("value", coalition="1,2")
    assert data["coalition"] == ["1", "2"]
    assert data["internal"] == 0.2 and data["external"] == 0.5 and data["total"] == 0.7
    assert invoke_json("value")["total"] == 0.0


def test_shapley_verb_with_oracle():
    data = invoke_json("shapley", oracle=True)
    assert data["players"] == ["1", "2", "3"]
    assert data["payoffs"] == [0.533333333333, 0.0833333333333, 0.0833333333333]
    assert data["efficient"] is True
    assert data["max_abs_diff"] <= 1e-9


def test_banzhaf_verb():
    data = invoke_json("banzhaf")
    assert data["payoffs"] == [0.575, 0.125, 0.125]
    assert data["sum"] == 0.825 and data["efficient"] is False
    assert "oracle" not in data


def test_core_verb():
    data = invoke_json("core")
    assert data["allocation"]["payoffs"] == [0.7, 0.0, 0.0]
    assert data["in_core"] is True and data["is_unique_checked"] is True
    assert data["identity"] == {"lhs": 0.7, "rhs": 0.7}
    assert data["stability_gap"]["shapley"] == pytest.approx(1 / 3)


def test_decompose_verb():
    data = invoke_json("decompose")
    assert data["dividends"] == {"1": 0.2, "1,2": 0.5, "1,3": 0.5, "1,2,3": -0.5}


def test_marginal_verb():
    data = invoke_json("marginal", GF, edge="k2,j", target="i")
    assert data["case"] == "shared"
    assert data["total_coeff"] == pytest.approx(1 / 12)
    assert invoke_json("marginal", GF, edge="i,j", target="j", method="banzhaf")["total_coeff"] == 0.75


def test_sweep_verb_writes_tsv():
    code, text = invoke("sweep", GF, edge="i,j", targets="i,j,k2")
    assert code == EXIT_OK
    lines = text.splitlines()
    assert lines[0] == "weight\ti\tj\tk2\tbreakpoint"
    assert len(lines) == 102


def test_sweep_verb_json_defaults_to_head_and_tail():
    data = invoke_json("sweep", GF, edge="i,j", steps=11, json=True)
    assert data["targets"] == ["j", "i"]
    assert data["breakpoints"] == [0.2, 0.5, 0.8]
    assert len(data["rows"]) == 11


def test_verify_verb_passes_on_g3():
    data = invoke_json("verify", threads=2)
    assert data["passed"] is True
    assert [s["suite"] for s in data["suites"]] == list(SUITES)
    assert all(s["status"] == "pass" for s in data["suites"])


def test_verify_sampled_skips_exhaustive_suites(tmp_path):
    path = tmp_path / "wide.txt"
    path.write_text("\n".join(f"p{i} p{i + 1} 0.5" for i in range(13)))
    data = invoke_json("verify", str(path), sample=50, seed=3, suites="superadditive,values")
    statuses = {s["suite"]: s["status"] for s in data["suites"]}
    assert statuses == {"superadditive": "pass", "values": "skipped"}


def test_verify_failure_exits_with_violations(monkeypatch):
    failing = VerifyReport(n=3, n_edges=2, results=[SuiteResult("core", "fail", {"n_violations": 1})])
    monkeypatch.setattr(commands, "run_suites", lambda *args, **kwargs: failing)
    code, text = invoke("verify")
    assert code == EXIT_VIOLATIONS
    assert json.loads(text)["passed"] is False


def test_props_verb():
    data = invoke_json("props", str(EXAMPLES_DIR / "g2.txt"))
    assert data == {
        "n": 2,
        "edges": 1,
        "total_weight": 0.6,
        "in_degree": {"1": 0, "2": 1},
        "isolated": [],
        "zero_shapley": ["1"],
    }


def test_attribution_verb():
    data = invoke_json("attribution", GF, player="i")
    assert data["sum"] == pytest.approx(data["value"], abs=1e-9)
    assert {c["class"] for c in data["contributions"]} == {"self", "incoming", "shared"}


# ============================================================
# Errors and exit codes
# ============================================================

def test_missing_file_exits_1(tmp_path):
    assert invoke("shapley", str(tmp_path / "nope.txt"))[0] == EXIT_INPUT_ERROR


def test_bad_graph_exits_1(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("a b 0.5\nb b 0.2\n")
    code, text = invoke("shapley", str(path))
    assert code == EXIT_INPUT_ERROR and text == ""


def test_undecodable_graph_exits_1(tmp_path):
    path = tmp_path / "latin.txt"
    path.write_bytes(b"a b 0.5\n\xff c 0.2\n")
    code, text = invoke("shapley", str(path))
    assert code == EXIT_INPUT_ERROR and text == ""


def test_guard_refusal_exits_1():
    assert invoke("core", max_n=2)[0] == EXIT_INPUT_ERROR


@pytest.mark.parametrize(
    "verb, options",
    [
        ("value", {"coalition": "1,9"}),
        ("marginal", {"edge": "1,2", "target": "1"}),
        ("marginal", {"edge": "2", "target": "1"}),
        ("sweep", {"edge": "2,1", "steps": 1}),
        ("attribution", {}),
        ("verify", {"suites": "core,nonsense"}),
    ],
)
def test_bad_options_exit_1(verb, options):
    assert invoke(verb, **options)[0] == EXIT_INPUT_ERROR


def test_unknown_verb():
    with pytest.raises(InvalidArgumentError):
        Command(verb="nucleolus", graph_path=G3)


def test_output_is_deterministic():
    for verb in ("shapley", "banzhaf", "core", "decompose", "verify"):
        first = invoke(verb, GF, threads=1)
        second = invoke(verb, GF, threads=4)
        assert first == second, verb


# ============================================================
# Entry points
# ============================================================

def test_decompose_output_round_trips(tmp_path):
    code, text = invoke("decompose", GF)
    assert code == EXIT_OK
    path = tmp_path / "decompose.json"
    path.write_text(text)
    assert check_decomposition.check(GF, str(path)) == 0


def test_tampered_decomposition_is_caught(tmp_path):
    data = invoke_json("decompose")
    data["terms"][0]["coeff"] += 0.1
    path = tmp_path / "decompose.json"
    path.write_text(json.dumps(data))
    assert check_decomposition.check(G3, str(path)) == 2


def test_verify_job_runs_manifest(monkeypatch, capsys):
    monkeypatch.setattr(sys, "argv", ["run_verify_job.py", "config/job_config_verify.json"])
    assert run_verify_job.main() == EXIT_OK
    assert json.loads(capsys.readouterr().out)["passed"] is True


def test_verify_job_rejects_wrong_job_type(tmp_path, monkeypatch):
    manifest = tmp_path / "job.json"
    manifest.write_text(json.dumps({"job_type": "render", "graph": G3}))
    monkeypatch.setattr(sys, "argv", ["run_verify_job.py", str(manifest)])
    assert run_verify_job.main() == EXIT_INPUT_ERROR


def test_app_dispatches_verbs(monkeypatch, capsys):
    monkeypatch.setattr(sys, "argv", ["app.py", "value", G3, "--coalition", "1,3"])
    assert app.main() == EXIT_OK
    assert json.loads(capsys.readouterr().out)["total"] == 0.7


def test_app_forwards_verify_options_to_manifest_job(monkeypatch, capsys):
    seen = {}

    def fake_run_suites(g, config, **kwargs):
        seen.update(kwargs)
        return VerifyReport(n=g.n, n_edges=len(g.edges), results=[])

    monkeypatch.setattr(commands, "run_suites", fake_run_suites)
    monkeypatch.setattr(sys, "argv", [
        "app.py", "verify", "--manifest", "config/job_config_verify.json",
        "--suites", "core,values", "--sample", "5", "--seed", "7",
    ])
    assert app.main() == EXIT_OK
    assert list(seen["suites"]) == ["core", "values"]
    assert seen["sample"] == 5 and seen["seed"] == 7
    capsys.readouterr()
