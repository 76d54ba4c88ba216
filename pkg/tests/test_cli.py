import json
from pathlib import Path

import numpy as np
import pytest

from matbeta import cli
from matbeta.matvbeta import df_to_params, upper_prob_auto

DATA = Path(__file__).resolve().parents[1] / "data"
EX = DATA / "examples"
TOY = DATA / "toy_oneway"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write_csv(path, A):
    np.savetxt(path, np.atleast_2d(A), delimiter=",", fmt="%.17g")
    return path


def test_pvalue_factor_b_rejects(capsys, tmp_path):
    # S_E = I makes F_c = S_H
    sh = EX / "fc_2B.csv"
    se = write_csv(tmp_path / "se.csv", np.eye(2))
    code, out, _ = run(capsys, "pvalue", "--sh", sh, "--se", se, "--nu-h", 3, "--nu-e", 24)
    doc = json.loads(out)
    assert code == 3
    assert doc["p_value"] == pytest.approx(0.0119703, abs=1e-6)
    assert doc["decision"] == "Reject"
    assert doc["schema_version"] == cli.SCHEMA_VERSION


def test_pvalue_zero_hypothesis(capsys, tmp_path):
    sh = write_csv(tmp_path / "sh.csv", np.zeros((2, 2)))
    se = write_csv(tmp_path / "se.csv", np.eye(2))
    code, out, _ = run(capsys, "pvalue", "--sh", sh, "--se", se, "--nu-h", 3, "--nu-e", 24)
    assert code == 0
    assert json.loads(out)["p_value"] == 1.0


def test_malformed_and_asymmetric_input(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3,x\n")
    se = write_csv(tmp_path / "se.csv", np.eye(2))
    code, _, err = run(capsys, "pvalue", "--sh", bad, "--se", se, "--nu-h", 3, "--nu-e", 24)
    assert code == 1 and "cannot parse" in err
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("1,2\n3\n")
    assert run(capsys, "fc", "--fc", ragged, "--nu-h", 3, "--nu-e", 24)[0] == 1
    asym = write_csv(tmp_path / "asym.csv", [[1.0, 0.2], [0.3, 1.0]])
    code, _, err = run(capsys, "fc", "--fc", asym, "--nu-h", 3, "--nu-e", 24)
    assert code == 1 and "symmetric" in err
    assert run(capsys, "fc", "--fc", tmp_path / "missing.csv", "--nu-h", 3, "--nu-e", 24)[0] == 1
    assert run(capsys, "fc", "--nu-h", 3)[0] == 1


def test_json_matrix_format(capsys, tmp_path):
    path = tmp_path / "fc.json"
    path.write_text(json.dumps({"dim": 2, "data": [0.336837, -0.160550, -0.160550, 0.100913]}))
    code, out, _ = run(capsys, "fc", "--fc", path, "--nu-h", 3, "--nu-e", 24)
    csv_code, csv_out, _ = run(capsys, "fc", "--fc", EX / "fc_2B.csv", "--nu-h", 3, "--nu-e", 24)
    assert code == csv_code == 3
    assert json.loads(out)["p_value"] == json.loads(csv_out)["p_value"]


def test_identity_fc_matches_engine(capsys, tmp_path):
    fc = write_csv(tmp_path / "eye.csv", np.eye(2))
    code, out, _ = run(capsys, "fc", "--fc", fc, "--nu-h", 3, "--nu-e", 24)
    expected = upper_prob_auto(np.eye(2), df_to_params(2, 3, 24)).consensus
    assert json.loads(out)["p_value"] == expected


def test_cov_equality_example(capsys):
    code, out, _ = run(capsys, "fc", "--fc", EX / "fc_3.csv", "--nu-h", 31, "--nu-e", 31, "--cov-equality")
    doc = json.loads(out)
    assert doc["p_value"] == pytest.approx(0.0585654, abs=1e-6)
    assert doc["command"] == "fc --cov-equality"
    assert code == 0


def test_report_round_trip(capsys):
    _, out, _ = run(capsys, "reproduce", "--example", "2AB")
    doc = json.loads(out)
    assert json.loads(cli.dumps(doc)) == doc
    assert cli.dumps(doc) == out.rstrip("\n")
    for key in ("eigenvalues", "statistics", "expressions", "p_value", "agreement_spread",
                "decisions", "settings", "version", "inputs"):
        assert key in doc
    assert doc["p_value"] == pytest.approx(0.4291338, abs=5e-4)


def test_seventeen_digits():
    text = cli.dumps({"x": 0.1, "y": float("inf"), "z": [1 / 3]})
    assert "0.10000000000000001" in text
    assert json.loads(text) == {"x": 0.1, "y": None, "z": [1 / 3]}


def test_model_matches_pvalue(capsys):
    args = ("--nu-h", 2, "--nu-e", 9)
    code_m, out_m, _ = run(capsys, "model", "--y", TOY / "y.csv", "--x", TOY / "x.csv", "--c", TOY / "c.csv")
    code_p, out_p, _ = run(capsys, "pvalue", "--sh", TOY / "sh.csv", "--se", TOY / "se.csv", *args)
    pm, pp = json.loads(out_m)["p_value"], json.loads(out_p)["p_value"]
    assert code_m == code_p == 3
    assert abs(pm - pp) <= 1e-12 * max(abs(pp), 1e-300) or abs(pm - pp) < 1e-12


def test_model_not_estimable(capsys, tmp_path):
    c = write_csv(tmp_path / "c.csv", [[0.0, 1.0, 0.0, 0.0]])
    code, _, err = run(capsys, "model", "--y", TOY / "y.csv", "--x", TOY / "x.csv", "--c", c)
    assert code == 2 and "estimable" in err


def test_model_with_explicit_zero_h(capsys, tmp_path):
    h = write_csv(tmp_path / "h.csv", np.zeros((2, 2)))
    base = run(capsys, "model", "--y", TOY / "y.csv", "--x", TOY / "x.csv", "--c", TOY / "c.csv")[1]
    with_h = run(capsys, "model", "--y", TOY / "y.csv", "--x", TOY / "x.csv", "--c", TOY / "c.csv", "--h", h)[1]
    assert json.loads(base)["p_value"] == json.loads(with_h)["p_value"]


def test_reproduce_notes(capsys):
    _, out, _ = run(capsys, "reproduce", "--example", "2B")
    doc = json.loads(out)
    assert doc["expressions"]["pvBII2"]["note"] == "series sums 1"
    _, out, _ = run(capsys, "reproduce", "--example", "1")
    doc = json.loads(out)
    assert doc["expressions"]["pvBII1"]["status"] == "Diverged"
    assert doc["example"]["computed_radius"] == pytest.approx(38.5102, abs=1e-3)
    assert doc["example"]["rel_deviation"] < 1e-3


def test_table_output(capsys):
    code, out, _ = run(capsys, "reproduce", "--example", "2AB", "--table")
    assert code == 0
    assert "pvBII1" in out and "target" in out


def test_env_var_sets_depth(capsys, monkeypatch):
    monkeypatch.setenv("MATBETA_MAX_DEGREE", "40")
    _, out, _ = run(capsys, "reproduce", "--example", "2AB")
    assert json.loads(out)["settings"]["max_degree"] == 40
    _, out, _ = run(capsys, "reproduce", "--example", "2AB", "--max-degree", "60")
    assert json.loads(out)["settings"]["max_degree"] == 60
    monkeypatch.setenv("MATBETA_MAX_DEGREE", "lots")
    assert run(capsys, "reproduce", "--example", "2AB")[0] == 1


def test_mc_is_deterministic(capsys, tmp_path):
    nabla = write_csv(tmp_path / "n.csv", 1e-4 * np.eye(2))
    argv = ("mc", "--m", 2, "--nu-h", 3, "--nu-e", 24, "--nabla", nabla, "--n", 5000, "--seed", 9)
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0
    doc = json.loads(first[1])
    # close to 1, but the smallest root of F has mass near 0 (exact 0.99760)
    exact = upper_prob_auto(1e-4 * np.eye(2), df_to_params(2, 3, 24)).consensus
    assert doc["estimate"] > 0.99
    assert abs(doc["estimate"] - exact) < 3 * max(doc["stderr"], 1e-4)
    assert run(capsys, "mc", "--m", 2, "--nu-h", 3, "--nu-e", 1, "--nabla", nabla)[0] == 1
