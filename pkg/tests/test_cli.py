import io
import json
import subprocess
import sys

import pytest

from nongalois.cli import run

FREE2 = "p 5\ngens x y\nchi x=1\n"
COR = "p 5\ngens x1 x2\nrel x1^25 [x1,[x1,[x1,x2]]]\nchi x1=1\n"


def call(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {"free2": FREE2, "cor": COR}.items():
        f = tmp_path / f"{name}.txt"
        f.write_text(text)
        paths[name] = str(f)
    m = tmp_path / "m.txt"
    m.write_text("0 0 0\n1 0 0\n0 0 0\n")
    paths["matrix"] = str(m)
    act = tmp_path / "act.txt"
    act.write_text("".join(f"g{i} -> g{(i - 1) % 5}\n" for i in range(5)))
    paths["action"] = str(act)
    return paths


def test_tgroup_free(files):
    code, out, _ = call(["tgroup", "--pres", files["free2"]])
    assert code == 0
    assert json.loads(out) == {"t": {"1": 1, "5": 1}, "u": 1}


def test_omega_verify():
    code, out, _ = call(["omega", "--p", "5", "--verify"])
    assert code == 0
    res = json.loads(out)
    assert res["h2dec"] == {"4": 1, "5": 1}
    assert res["match"] is True


def test_detect_corollary(files):
    code, out, _ = call(["detect", "--rule", "thm1.1", "--pres", files["cor"], "--tau", "x2", "--e", "2"])
    assert code == 3
    assert json.loads(out)["verdict"] == "not_absolute_galois"
    code, out, _ = call(["detect", "--rule", "thm1.1", "--pres", files["free2"], "--tau", "y", "--e", "2"])
    assert code == 0


def test_detect_batch_order(files):
    argv = ["detect", "--rule", "tgroup", "--pres", files["cor"], files["free2"], "--jobs", "2"]
    code, out, _ = call(argv)
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 3
    assert [x["file"] for x in lines] == [files["cor"], files["free2"]]
    assert [x["verdict"] for x in lines] == ["not_absolute_galois", "no_witness"]
    assert call(argv)[1] == out


def test_decompose_and_canonical(files):
    code, out, _ = call(["decompose", "--matrix", files["matrix"], "--p", "5"])
    assert code == 0 and json.loads(out) == {"2": 1, "1": 1}
    code, out, _ = call(["canonical", "--p", "5", "--t", "3=1", "--u", "3"])
    assert code == 0 and json.loads(out)["sigma_p"] == [0, 0, 1]


def test_cohomology(tmp_path, files):
    code, out, _ = call(["omega", "--p", "5"])
    pres = tmp_path / "omega.txt"
    pres.write_text(json.loads(out)["presentation"])
    code, out, _ = call(["cohomology", "--pres", str(pres), "--action", files["action"]])
    assert code == 0
    assert json.loads(out) == {"h1": {"5": 1}, "h2dec": {"4": 1, "5": 1}}


def test_family():
    code, out, _ = call(["family", "--p", "5"])
    assert code == 3
    assert json.loads(out)["rule"] == "family"


@pytest.mark.parametrize(
    "argv,code",
    [
        (["bogus"], 1),
        ([], 1),
        (["canonical", "--p", "5", "--u", "5"], 2),
        (["tgroup", "--pres", "/nonexistent"], 2),
        (["omega", "--p", "3"], 2),
    ],
)
def test_error_codes(argv, code):
    got, out, err = call(argv)
    assert got == code
    assert len(out.splitlines()) == 1
    assert "error" in json.loads(out)
    assert err


def test_precondition_exit_code(files):
    code, out, _ = call(["detect", "--rule", "thm1.1", "--pres", files["free2"], "--tau", "y", "--e", "9"])
    assert code == 2
    assert json.loads(out)["error"] == "DetectorError"


def test_zero_character_exit_code(tmp_path):
    f = tmp_path / "z.txt"
    f.write_text("p 5\ngens x\nchi x=5\n")
    code, out, _ = call(["tgroup", "--pres", str(f)])
    assert code == 2 and json.loads(out)["error"] == "ZeroCharacter"


def test_module_entry_point_is_deterministic(files):
    argv = [sys.executable, "-m", "nongalois", "tgroup", "--pres", files["cor"]]
    a = subprocess.run(argv, capture_output=True, text=True)
    b = subprocess.run(argv, capture_output=True, text=True)
    assert a.returncode == 0
    assert a.stdout == b.stdout
