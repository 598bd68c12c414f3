import json
import subprocess
import sys
import time

import numpy as np
import pytest

from steerkit.cli import cmd_classify, cmd_polar, cmd_schmidt, cmd_steer, cmd_verify, parse_vector, run, to_json
from steerkit.errors import ParseError


def invoke(capsys, *argv):
    code = run([str(a) for a in argv])
    return code, json.loads(capsys.readouterr().out)


def test_schmidt_bell(capsys, fixtures_dir):
    code, rep = invoke(capsys, "schmidt", fixtures_dir / "bell.json")
    assert code == 0 and rep["status"] == "ok"
    assert rep["results"]["rank"] == 2
    np.testing.assert_allclose(rep["results"]["coefficients"], [0.7071067811865476] * 2, rtol=1e-15)


def test_schmidt_product(fixtures_dir):
    rep = cmd_schmidt(fixtures_dir / "product.json")
    assert rep["results"]["rank"] == 1 and rep.exit_code == 0


def test_schmidt_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "d1": 2,\n  "d2": 2\n  "re": []\n}')
    code, rep = invoke(capsys, "schmidt", bad)
    assert code == 2
    assert rep["status"]["error"] == "ParseError"
    assert "line 4" in rep["status"]["message"]


def test_missing_file(capsys, tmp_path):
    code, rep = invoke(capsys, "polar", tmp_path / "nope.json")
    assert code == 2 and rep["status"]["error"] == "FileNotFound"


def test_steer_bell(capsys, fixtures_dir):
    code, rep = invoke(capsys, "steer", fixtures_dir / "bell.json", "1,0;0,0")
    assert code == 0
    assert rep["results"]["probability"] == pytest.approx(0.5, abs=1e-12)
    assert rep["results"]["distant_state"] == {"re": [1, 0], "im": [0, 0]}


def test_steer_zero_vector(fixtures_dir):
    rep = cmd_steer(fixtures_dir / "bell.json", "0,0;0,0")
    assert rep["status"]["error"] == "NotUnit" and rep.exit_code == 2


def test_steer_normalize_flag(capsys, fixtures_dir):
    code, rep = invoke(capsys, "steer", fixtures_dir / "bell.json", "3,0;0,4", "--normalize")
    assert code == 0 and rep["results"]["probability"] == pytest.approx(0.5)
    assert cmd_steer(fixtures_dir / "bell.json", "3,0;0,4")["status"]["error"] == "NotUnit"


def test_steer_dimension_mismatch(fixtures_dir):
    rep = cmd_steer(fixtures_dir / "bell.json", "1,0;0,0;0,0")
    assert rep["status"]["error"] == "DimensionMismatch"


def test_steer_seeded_fixture(fixtures_dir):
    rep = cmd_steer(fixtures_dir / "random_3x4.json", "0.6,0;0,0.8;0,0")
    assert rep["residuals"]["oracle_state"] < 1e-10
    assert rep["residuals"]["oracle_probability"] < 1e-12
    assert rep.exit_code == 0


def test_steer_impossible_event(fixtures_dir):
    rep = cmd_steer(fixtures_dir / "product.json", "0,0;1,0")
    assert rep["results"]["possible"] is False and rep["results"]["distant_state"] is None
    assert rep.exit_code == 0


@pytest.mark.parametrize("name, rank", [("bell.json", 2), ("product.json", 1), ("random_4x5.json", 4)])
def test_polar(fixtures_dir, name, rank):
    rep = cmd_polar(fixtures_dir / name)
    assert rep.exit_code == 0 and rep["results"]["rank"] == rank
    assert set(rep["residuals"]) == {"polar_right", "polar_left", "similarity", "antiunitarity"}
    assert max(rep["residuals"].values()) < 1e-10


def test_classify(capsys):
    code, rep = invoke(capsys, "classify", "pow:2", "pow:2")
    assert code == 0
    assert rep["results"]["tier"] == "SqrtRangeOnly"
    assert rep["results"]["arrow"] == ["SqrtRangeOnly", "Range"]
    assert rep["results"]["summable"] == {"s0": True, "s1": True, "s2": False}


def test_classify_not_in_space():
    rep = cmd_classify("pow:2", "pow:0.4")
    assert rep["results"]["tier"] == "NotInSpace" and rep["results"]["image_error"] == "NotInDomain"


def test_classify_exponential_image():
    rep = cmd_classify("exp:0.5", "pow:1")
    assert rep["results"]["tier"] == "ClosureOnly"
    assert rep["results"]["steering_image"] == "powexp:1,0.7071067811865476"
    assert rep["results"]["arrow"] == ["ClosureOnly", "SqrtRangeOnly"]
    # the printed base is rounded above sqrt(0.5): as a new input it is a different, divergent model
    assert cmd_classify("exp:0.5", rep["results"]["steering_image"])["results"]["summable"]["s1"] is False


@pytest.mark.parametrize("spec, coeffs", [("pow:x", "pow:1"), ("pow:1", "pow:1"), ("pow:2", "bogus")])
def test_classify_errors(spec, coeffs):
    rep = cmd_classify(spec, coeffs)
    assert rep["status"]["error"] in ("ParseError", "InvalidModel") and rep.exit_code == 2


def test_verify_bell(fixtures_dir):
    rep = cmd_verify(fixtures_dir / "bell.json", seed=0, trials=100)
    assert rep["results"]["all_passed"] and rep.exit_code == 0


def test_verify_random_6x6_runtime(fixtures_dir):
    start = time.perf_counter()
    rep = cmd_verify(fixtures_dir / "random_6x6.json", seed=3, trials=500)
    assert time.perf_counter() - start < 10
    assert rep["results"]["all_passed"] and rep.exit_code == 0


def test_verify_rank_deficient(fixtures_dir):
    rep = cmd_verify(fixtures_dir / "rank2_5x4.json", seed=1, trials=50)
    checks = {c["name"]: c for c in rep["results"]["checks"]}
    assert checks["null_padding_equivalence"]["evaluations"] == 50
    assert rep.exit_code == 0


def test_verify_corrupted_norm(capsys, fixtures_dir):
    code, rep = invoke(capsys, "verify", fixtures_dir / "corrupted_norm.json")
    assert code != 0 and rep["status"]["error"] == "NotNormalized"


def test_json_output_file(capsys, tmp_path, fixtures_dir):
    out = tmp_path / "r.json"
    code = run(["polar", str(fixtures_dir / "bell.json"), "--json", str(out)])
    assert code == 0 and out.read_text() == capsys.readouterr().out


def test_seventeen_digit_floats():
    text = to_json({"x": 0.1, "y": [1 / 3], "z": 2.0, "n": 3})
    assert '"x": 0.10000000000000001' in text
    assert "0.33333333333333331" in text
    assert json.loads(text) == {"x": 0.1, "y": [1 / 3], "z": 2.0, "n": 3}


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        to_json({"x": float("nan")})


def test_parse_vector():
    np.testing.assert_array_equal(parse_vector("1,0;0,-1.5;2"), [1, -1.5j, 2])
    for bad in ("1,2,3", "a,b", "1,;0,0", "inf,0"):
        with pytest.raises(ParseError):
            parse_vector(bad)


def test_module_entry_point(fixtures_dir):
    proc = subprocess.run([sys.executable, "-m", "steerkit", "schmidt", str(fixtures_dir / "bell.json")],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["results"]["rank"] == 2
