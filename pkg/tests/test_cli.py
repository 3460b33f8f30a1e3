import json
import subprocess
import sys

import pytest

from ltonets.cli import main, run
from ltonets.fusion_ring import builtin_document


def out(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_classify_fib(capsys):
    code, cap = out(capsys, "classify", "--ring", "fib")
    assert code == 0
    assert cap.out.startswith("III_lambda lambda=0.6180339887")
    assert cap.out.strip().endswith("exact=false(numeric)")


def test_classify_hilb_z2(capsys):
    code, cap = out(capsys, "classify", "--ring", "hilb_z2")
    assert cap.out.strip() == "II_1 exact=true"


def test_classify_table(capsys):
    code, cap = out(capsys, "classify")
    lines = cap.out.strip().splitlines()
    assert len(lines) == 5
    assert lines[2].split()[:2] == ["rep_s3", "III_lambda"]


def test_boundary_dim(capsys):
    code, cap = out(capsys, "toric", "boundary-dim", "--sites", "3")
    assert cap.out.strip() == "dim=32 blocks=M4+M4"


def test_json_embeds_config_and_is_stable():
    _, a = run(["classify", "--ring", "rep_s3", "--json"])
    _, b = run(["classify", "--ring", "rep_s3", "--json"])
    assert a == b
    data = json.loads(a)
    assert data["config"]["ring"] == "rep_s3"
    assert data["type"] == "III_lambda" and data["lambda"] == "0.5"


def test_ring_commands(capsys, tmp_path):
    path = tmp_path / "fib.json"
    path.write_text(builtin_document("fib"))
    code, cap = out(capsys, "ring", "validate", "--file", str(path))
    assert code == 0 and cap.out.startswith("ok:")
    code, cap = out(capsys, "ring", "pointed", "--ring", "hilb_s3")
    assert cap.out.strip() == "pointed=true"
    _, text = run(["ring", "dims", "--ring", "rep_s3", "--json"])
    assert json.loads(text)["dims"] == [1, 1, 2]
    _, text = run(["ring", "triples", "--ring", "fib"])
    assert len(text.splitlines()) == 5


def test_state_commands(tmp_path):
    _, text = run(["state", "trace-check", "--ring", "hilb_z2", "--level", "2"])
    assert text.endswith(": 0")
    _, text = run(["state", "markov", "--ring", "rep_s3", "--level", "2", "--json"])
    assert json.loads(text)["value"] == 1


def test_toric_reduce():
    _, text = run(
        ["toric", "reduce", "--monomial", "X@(3,4,e) X@(4,4,e) X@(4,3,n) X@(4,4,n)",
         "--inner", "rect 2 2 5 5 rough", "--outer", "rect 0 0 8 8 rough", "--json"]
    )
    data = json.loads(text)
    assert data["word"] == ["A(4, 4)"] and data["boundary"] == "1"


def test_k0_commands():
    _, text = run(["k0", "infinitesimal", "--ring", "rep_s3", "--json"])
    assert json.loads(text)["witness"] is not None
    _, text = run(["k0", "uhf", "--ring", "hilb_s3"])
    assert text.startswith("M_{6^inf}")
    _, text = run(["k0", "pairing", "--matrix", "[[2,1],[1,2]]", "--vector", "[1,-1]"])
    assert text == "tau.v = 0"


@pytest.mark.parametrize(
    "argv, code",
    [
        (["classify", "--ring", "nope"], 3),
        (["toric", "reduce", "--monomial", "W@(0,0,e)", "--inner", "rect 2 2 5 5", "--outer", "rect 0 0 8 8"], 2),
        (["toric", "boundary-dim", "--sites", "9"], 4),
        (["k0", "infinitesimal", "--ring", "fib"], 5),
        (["state", "regular-q", "--ring", "fib", "--level", "1"], 3),
        (["k0", "pairing", "--matrix", "[[1,", "--vector", "[1]"], 2),
    ],
)
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code
    assert capsys.readouterr().err.startswith("error:")


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as info:
        main(["ring"])
    assert info.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ltonets", "classify", "--ring", "hilb_z2"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "II_1 exact=true"
