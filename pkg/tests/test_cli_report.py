import json
import random
import subprocess
import sys

import pytest

from symphodge.cartan_model import CartanComplex
from symphodge.cli_report import main, render_markdown
from symphodge.hodge_solvers import seeded_ddelta_instances
from symphodge.model_complexes import build_model


def run(tmp_path, *argv):
    out = tmp_path / "out.txt"
    code = main([*argv, "--out", str(out)])
    return code, out.read_text() if out.exists() else None


def test_verify_kodaira_thurston_expected_failures_witnessed(tmp_path):
    code, text = run(tmp_path, "verify", "--model", "kodaira-thurston")
    assert code == 0
    report = json.loads(text)
    assert report["schema"] == 1 and report["seed"] == 0
    checks = {c["id"]: c for c in report["checks"]}
    lef = checks["kodaira-thurston.lefschetz"]
    assert lef["status"] == "counterexample" and lef["ok"]
    assert lef["witness"]["per_k"][1]["rank"] == 2
    assert checks["kodaira-thurston.harmonic"]["status"] == "counterexample"
    cx = checks["kodaira-thurston.ddelta.counterexample"]["witness"]
    m = build_model("kodaira-thurston")
    alpha = m.form_from_json(cx["alpha"]["json"])
    assert not m.d(alpha) and not m.delta(alpha)


def test_verify_torus_passes(tmp_path):
    code, text = run(tmp_path, "verify", "--model", "flat-torus-2", "--seed", "7")
    report = json.loads(text)
    assert code == 0 and report["summary"]["passed"] and report["seed"] == 7
    first = next(c for c in report["checks"] if c["id"] == "flat-torus-2.ddelta.seeded")["witness"]["first"]
    assert first["residual"]["terms"] == []


def test_verify_sphere_reports_every_check(tmp_path):
    code, text = run(tmp_path, "verify", "--model", "sphere-s1")
    report = json.loads(text)
    checks = {c["id"]: c for c in report["checks"]}
    assert all(c["ok"] for cid, c in checks.items() if cid != "sphere-s1.equivariant.section.omega_squared")
    assert checks["sphere-s1.equivariant.section.omega_squared_consistent"]["ok"]
    literal = checks["sphere-s1.equivariant.section.omega_squared"]
    # the literal representative is reported as it is: not closed
    assert literal["status"] == "fail"
    assert literal["witness"]["d_G_representative"]["json"]["terms"]
    assert code == (0 if literal["ok"] else 1)


def test_determinism(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    main(["verify", "--model", "flat-torus-2", "--seed", "3", "--out", str(a)])
    main(["verify", "--model", "flat-torus-2", "--seed", "3", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_markdown(tmp_path):
    code, text = run(tmp_path, "verify", "--model", "kodaira-thurston", "--format", "markdown")
    assert code == 0
    assert text.startswith("# Verification report")
    assert "| kodaira-thurston.lefschetz | counterexample | counterexample | yes |" in text


def test_markdown_lists_unexpected():
    report = {
        "tool": "t", "version": "0", "schema": 1, "seed": 0, "degree_bound": 6, "models": [],
        "checks": [{"id": "x", "expected": "pass", "status": "fail", "ok": False, "anchor": "a", "witness": {"w": 1}}],
        "summary": {"passed": False, "ok": 0, "total": 1},
    }
    text = render_markdown(report)
    assert "## Unexpected results" in text and '"w": 1' in text


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 5, "model": "flat-torus-2", "format": "json"}))
    code, text = run(tmp_path, "verify", "--config", str(cfg))
    assert json.loads(text)["seed"] == 5
    code, text = run(tmp_path, "verify", "--config", str(cfg), "--seed", "9")
    report = json.loads(text)
    assert report["seed"] == 9
    assert [m["name"] for m in report["models"]] == ["flat-torus-2"]


def test_timing_is_opt_in(tmp_path):
    _, text = run(tmp_path, "verify", "--model", "kodaira-thurston")
    assert all(c["timing"] is None for c in json.loads(text)["checks"])
    _, text = run(tmp_path, "verify", "--model", "kodaira-thurston", "--timing")
    assert all(isinstance(c["timing"], float) for c in json.loads(text)["checks"])


def test_usage_errors(tmp_path, capsys):
    assert main(["verify", "--model", "nope"]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["verify", "--model", "flat-torus-2", "--out", str(tmp_path / "missing" / "x.json")]) == 2
    assert main(["extend", "--class", "bogus"]) == 2
    assert main(["extend", "--class", "h7:0"]) == 2
    assert main(["extend", "--model", "flat-torus-2", "--class", "1"]) == 2
    assert main(["solve", "--model", "all", "--op", "ddelta", "--input", "x"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2")
    assert main(["verify", "--config", str(bad)]) == 2


def test_extend(tmp_path):
    code, text = run(tmp_path, "extend", "--class", "omega")
    out = json.loads(text)
    assert code == 0
    assert out["alpha_G"]["pretty"] == "dtheta^dz + u*(z)"
    assert out["chi0"] == ["0"]
    assert out["certificates"]["d_G"]["terms"] == [] and out["certificates"]["delta"]["terms"] == []
    code, text = run(tmp_path, "extend", "--class", "1")
    assert json.loads(text)["alpha_G"]["pretty"] == "1"
    code, text = run(tmp_path, "extend", "--class", "h2:0")
    assert code == 0
    code, text = run(tmp_path, "extend", "--class", "omega^2")
    sq = json.loads(text)["omega_squared"]
    assert sq["literal"]["chi1"]["pretty"] == "u^2*(-1/6*1)"
    assert sq["consistent"]["equivariantly_closed"]


def test_solve_ddelta_and_harmonic(tmp_path):
    m = build_model("flat-torus-4")
    rng = random.Random(1)
    _, alpha = next(seeded_ddelta_instances(m, 2, 1, rng))
    src = tmp_path / "alpha.json"
    src.write_text(json.dumps(alpha.to_json()))
    code, text = run(tmp_path, "solve", "--model", "flat-torus-4", "--op", "ddelta", "--input", str(src))
    out = json.loads(text)
    assert code == 0 and out["residual"]["terms"] == []
    beta = m.form_from_json(out["beta"]["json"])
    assert m.d(m.delta(beta)) == alpha

    gamma = m.omega + m.d(m.random_form(rng, 1))
    src.write_text(json.dumps(gamma.to_json()))
    code, text = run(tmp_path, "solve", "--model", "flat-torus-4", "--op", "harmonic", "--input", str(src))
    out = json.loads(text)
    assert code == 0 and out["same_class"]
    assert out["residual"]["d"]["terms"] == [] and out["residual"]["delta"]["terms"] == []


def test_solve_zero_and_precondition(tmp_path):
    m = build_model("flat-torus-2")
    src = tmp_path / "a.json"
    src.write_text(json.dumps(m.zero().to_json()))
    code, text = run(tmp_path, "solve", "--model", "flat-torus-2", "--op", "ddelta", "--input", str(src))
    assert code == 0 and json.loads(text)["beta"]["json"]["terms"] == []
    src.write_text(json.dumps(m.coframe(0).to_json()))
    code, text = run(tmp_path, "solve", "--model", "flat-torus-2", "--op", "ddelta", "--input", str(src))
    out = json.loads(text)
    assert code == 1 and out["error"] == {"kind": "precondition", "predicate": "alpha is neither exact nor coexact"}


def test_solve_dgdelta(tmp_path):
    m = build_model("sphere-s1")
    C = CartanComplex(m, 6)
    _, alpha = next(C.seeded_dG_delta_instances(3, 1, random.Random(8)))
    src = tmp_path / "a.json"
    src.write_text(json.dumps(alpha.to_json(6)))
    code, text = run(tmp_path, "solve", "--model", "sphere-s1", "--op", "dgdelta", "--input", str(src))
    out = json.loads(text)
    assert code == 0 and out["residual"]["terms"] == []


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "symphodge", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and "symphodge" in r.stdout


@pytest.mark.parametrize("argv", [["verify", "--help"], ["extend", "--help"], ["solve", "--help"]])
def test_help(argv):
    assert main(argv) == 0
