import json
import subprocess
import sys

import pytest

from padicmap.cli import load_config, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_classify(capsys):
    assert run_json(capsys, "classify", "--p", "5", "--a", "-25")["regime"] == "ChaoticSFT"
    assert run_json(capsys, "classify", "--p", "3", "--a", "1/3")["regime"] == "EscapeAll"


@pytest.mark.parametrize("argv,code,msg", [
    (["classify", "--p", "2", "--a", "1"], 2, "odd prime"),
    (["classify", "--p", "9", "--a", "1"], 2, "odd prime"),
    (["classify", "--p", "3", "--a", "0"], 2, ""),
    (["classify", "--p", "3", "--a", "x/y"], 2, ""),
    (["classify", "--p", "3"], 2, "required"),
    (["itinerary", "--p", "3", "--a", "9", "--x", "1"], 4, "regime"),
    (["decompose", "--p", "3", "--a", "1/3"], 4, ""),
    (["cylinder", "--p", "5", "--a", "1/25", "--word", "1,3"], 2, ""),
    (["verify", "--suite", "nope"], 2, "unknown suite"),
])
def test_error_exit_codes(capsys, argv, code, msg):
    got, out, err = run(capsys, *argv)
    assert got == code
    assert out == "" and err.startswith("error:") and msg in err


def test_precision_exhausted_exit_code(capsys):
    code, _, err = run(capsys, "orbit", "--p", "5", "--a", "1/25", "--x", "fixed:1",
                       "--precision", "4", "--depth", "30")
    assert code == 3 and "precision" in err


def test_exact_input_stays_exact(capsys):
    # 1/5 -> 0 -> inf exactly; a 64-digit expansion could not certify the zero
    out = run_json(capsys, "orbit", "--p", "5", "--a", "-25", "--x", "1/5", "--depth", "3")
    assert out["valuations"] == [-1, "inf", "inf", "inf"]
    big = run_json(capsys, "orbit", "--p", "3", "--a", "1/3", "--x", "2/7", "--depth", "40",
                   "--precision", "10")
    assert big["valuations"][-1] == -40


def test_itinerary_of_fixed_point(capsys):
    out = run_json(capsys, "itinerary", "--p", "5", "--a", "1/25", "--x", "fixed:1", "--depth", "6")
    assert out["word"] == [1, 1, 1, 1, 1, 1]
    out = run_json(capsys, "itinerary", "--p", "5", "--a", "-25", "--x", "1/5", "--depth", "5")
    assert out["word"] == [1, 3, 4, 4, 4]


def test_cylinder_and_fixed_points(capsys):
    out = run_json(capsys, "cylinder", "--p", "5", "--a", "1/25", "--word", "1,2,1")
    assert out["disk"]["radius_exponent"] == -6
    out = run_json(capsys, "fixed-points", "--p", "5", "--a", "1/25")
    assert len(out["fixed_points"]) == 3 and len(out["period_two"]) == 2


def test_entropy(capsys):
    out = run_json(capsys, "entropy")
    assert abs(out["lambda"] - 1.69562) < 1e-4


def test_orbit_escape_taylor(capsys):
    out = run_json(capsys, "orbit", "--p", "3", "--a", "1/3", "--x", "1", "--depth", "4")
    assert out["valuations"] == [0, -1, -2, -3, -4]
    assert run_json(capsys, "escape", "--p", "3", "--a", "9", "--x", "1/3")["verdict"] == "InCoreRegion"
    out = run_json(capsys, "taylor", "--p", "3", "--a", "9", "--x", "1/3", "--order", "4")
    assert len(out["coefficients"]) == 4


def test_decompose(capsys):
    out = run_json(capsys, "decompose", "--p", "3", "--a", "9", "--kmax", "3", "--samples", "20")
    assert out["partition_ok"] and out["divisibility_ok"] and out["landing_ok"]
    assert len(out["landing_table"]) == 20


def test_verify_pass_and_fault(capsys):
    out = run_json(capsys, "verify", "--suite", "entropy,classification", "--seed", "1")
    assert out["passed"] and out["failed_suites"] == []
    code, text, _ = run(capsys, "verify", "--suite", "sft", "--samples", "300", "--inject-fault")
    assert code == 1 and json.loads(text)["failed_suites"] == ["sft"]


def test_deterministic_output(capsys):
    argv = ["verify", "--suite", "scaling,good_reduction", "--seed", "7", "--samples", "50",
            "--pairs", "100"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert "wall_time" not in first


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"p": 5, "a": "1/25", "depth": 3}))
    out = run_json(capsys, "itinerary", "--config", str(cfg), "--x", "fixed:2")
    assert out["word"] == [2, 2, 2]
    out = run_json(capsys, "itinerary", "--config", str(cfg), "--x", "fixed:2", "--depth", "5")
    assert out["word"] == [2] * 5
    kv = tmp_path / "run.cfg"
    kv.write_text("# comment\np = 3\na = 9\n")
    assert run_json(capsys, "classify", "--config", str(kv))["regime"] == "MinimalOffOrigin"
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    code, _, err = run(capsys, "classify", "--config", str(bad))
    assert code == 2 and "unknown config keys" in err


def test_load_config_formats(tmp_path):
    f = tmp_path / "c.txt"
    f.write_text("p: 7\nkmax = 3\n")
    assert load_config(str(f)) == {"p": "7", "kmax": "3"}
    f.write_text("[1, 2]")
    with pytest.raises(Exception, match="object"):
        load_config(str(f))


def test_out_file_and_plain_output(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, text, _ = run(capsys, "classify", "--p", "7", "--a", "3", "--out", str(target), "--no-json")
    assert code == 0 and "regime: \"GoodReduction\"" in text
    assert json.loads(target.read_text())["regime"] == "GoodReduction"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "padicmap", "classify", "--p", "5", "--a", "1/25"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and json.loads(res.stdout)["regime"] == "FullShiftTwo"
