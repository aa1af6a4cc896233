import json

from maasslab.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_hurwitz_exact_rational(capsys):
    code, out = run_cli(capsys, "--no-timing", "hurwitz", "--n", "0")
    doc = json.loads(out)
    assert code == 0
    assert doc["values"]["H"] == "-1/12"
    assert doc["err_est"] == 0


def test_trace_cm(capsys):
    code, out = run_cli(capsys, "--no-timing", "--digits", "25",
                        "trace", "--n", "-23")
    doc = json.loads(out)
    assert code == 0
    assert doc["values"]["regime"] == "cm"
    assert abs(float(doc["values"]["value"]) - 35) < 1e-8
    assert doc["err_est"] is not None


def test_determinism_byte_identical(capsys):
    _, out1 = run_cli(capsys, "--no-timing", "--digits", "25",
                      "kloosterman", "--c", "24", "--m", "1")
    _, out2 = run_cli(capsys, "--no-timing", "--digits", "25",
                      "kloosterman", "--c", "24", "--m", "1")
    assert out1 == out2


def test_invalid_subcommand_exit2(capsys):
    assert main(["nonsense"]) == 2


def test_invalid_input_exit2(capsys):
    code, out = run_cli(capsys, "--no-timing", "trace", "--n", "7")
    assert code == 2


def test_qexp_gd(capsys):
    code, out = run_cli(capsys, "--no-timing", "qexp", "gd",
                        "--d", "1", "--trunc", "8")
    doc = json.loads(out)
    series = json.loads(doc["values"]["qexp"])
    terms = dict((k, v) for k, v in series["terms"])
    assert terms[-1] == "1" and terms[3] == "248"


def test_verify_spt_identity(capsys):
    code, out = run_cli(capsys, "--no-timing", "--digits", "25",
                        "verify", "spt-identity", "--n-max", "47")
    doc = json.loads(out)
    assert code == 0
    rows = json.loads(doc["values"]["rows"])
    assert all(r["pass"] for r in rows)
    assert {r["n"] for r in rows} == {-23, -47}


def test_verify_lehmer(capsys):
    code, out = run_cli(capsys, "--no-timing", "--digits", "25",
                        "verify", "lehmer", "--c-max-scan", "400")
    assert code == 0
    doc = json.loads(out)
    assert doc["values"]["all_pass"] is True


def test_csv_format(capsys):
    code, out = run_cli(capsys, "--no-timing", "--format", "csv",
                        "s", "--n", "2")
    assert code == 0
    assert "65/6" in out


def test_digits_env_override(capsys, monkeypatch):
    monkeypatch.setenv("MAASSLAB_DIGITS", "33")
    code, out = run_cli(capsys, "--no-timing", "hurwitz", "--n", "3")
    doc = json.loads(out)
    assert doc["config"]["digits"] == 33
    assert doc["values"]["H"] == "1/3"


def test_eval_F(capsys):
    code, out = run_cli(capsys, "--no-timing", "--digits", "25",
                        "eval", "F", "--x", "0.1", "--y", "1.3")
    doc = json.loads(out)
    assert code == 0
    assert "value" in doc["values"]
