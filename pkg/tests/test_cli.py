import json
import subprocess
import sys

import numpy as np
import pytest

from projclust import tones
from projclust.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def a2_wav(tmp_path_factory):
    p = tmp_path_factory.mktemp("wav") / "fixture_a2.wav"
    assert run(["tone", "synth", "--fundamental", "110", "--amps", "1,2,1", "-o", str(p)]) == 0
    return p


def test_demo_passes(capsys):
    code, out, _ = call(capsys, "demo")
    checks = json.loads(out)
    assert code == 0 and checks and all(c["pass"] for c in checks)
    code, out, _ = call(capsys, "demo", "--format", "table")
    assert code == 0 and "[FAIL]" not in out and out.count("[PASS]") == len(checks)


def test_gate_without_args_prints_both_tables(capsys):
    code, out, _ = call(capsys, "gate")
    obj = json.loads(out)
    assert code == 0
    assert [r["output"] for r in obj["XOR"]] == ["O1", "O2", "O2", "O1"]
    assert [r["output"] for r in obj["OR"]] == ["O1", "O2", "O2", "O2"]
    assert obj["traces"]["QT2"] == 3
    assert {(t["from"], t["to"]) for t in obj["transport"]} >= {("QT1", "Q1"), ("QT2", "Q2")}


def test_gate_with_input(capsys):
    code, out, _ = call(capsys, "gate", "--kind", "xor", "--input", "0,0,0,1")
    assert code == 0 and json.loads(out) == {"XOR": [1.0, 0.0]}


def test_tone_recognize_a2(capsys, a2_wav):
    code, out, _ = call(capsys, "tone", "recognize", str(a2_wav), "--harmonics", "2", "--top", "3")
    rows = json.loads(out)
    assert code == 0 and rows[0]["tone"] == "A2" and len(rows) == 3
    code, out, _ = call(capsys, "tone", "recognize", str(a2_wav), "--harmonics", "0", "--measure", "F")
    assert json.loads(out)[0]["tone"] == "A3"


def test_tone_recognize_with_noise_is_byte_identical(capsys, a2_wav):
    argv = ("tone", "recognize", str(a2_wav), "--measure", "delta", "--noise-bins", "1000", "--seed", "3")
    _, a, _ = call(capsys, *argv)
    _, b, _ = call(capsys, *argv)
    assert a == b and json.loads(a)[0]["tone"] == "A2"


def test_noise_without_seed_is_an_error(capsys, a2_wav):
    code, _, err = call(capsys, "tone", "recognize", str(a2_wav), "--noise-bins", "10")
    assert code == 1 and "seed" in json.loads(err)["message"]


def test_tone_spectrum_csv(capsys, a2_wav, tmp_path):
    out_path = tmp_path / "spec.csv"
    assert run(["tone", "spectrum", str(a2_wav), "-o", str(out_path), "--raw"]) == 0
    lines = out_path.read_text().splitlines()
    assert lines[0] == "bin,magnitude" and len(lines) == 22051
    mags = np.array([float(l.split(",")[1]) for l in lines[1:]])
    assert int(np.argmax(mags)) + 1 == 220
    code, out, _ = call(capsys, "tone", "spectrum", str(a2_wav))
    mags = np.array([float(l.split(",")[1]) for l in out.splitlines()[1:]])
    assert np.linalg.norm(mags) == pytest.approx(1, abs=1e-12)


def test_rgb(capsys):
    code, out, _ = call(capsys, "rgb", "0.95", "0.1", "0.1", "--ref", "P1=0.6,0,0.6")
    obj = json.loads(out)
    assert code == 0
    assert obj["scores"]["R"] == 0.9025
    assert obj["verdict"]["kind"] == "probable" and obj["verdict"]["label"] == "R"
    refs = {r["reference"]: r for r in obj["references"]}
    assert refs["R"]["sq_distance"] == pytest.approx(0.0225, abs=1e-12)
    assert "P1" in refs
    code, out, _ = call(capsys, "rgb", "0.95", "0.1", "0.1", "--format", "table")
    assert code == 0 and "verdict" in out


def test_frame_default_and_report(capsys):
    code, out, _ = call(capsys, "frame", "--f", "1.1,2.1,3", "--g", "1,2,3", "--eps", "0.1")
    obj = json.loads(out)
    assert code == 0
    assert obj["A"] == pytest.approx(1.25) and obj["tight"]
    assert obj["delta"] == pytest.approx(0.1, abs=1e-12) and obj["nabla"] == pytest.approx(0.08, abs=1e-12)
    assert obj["member"] == {"norm": False, "delta": True, "nabla": True}


def test_frame_from_json_file(capsys, tmp_path):
    p = tmp_path / "f.json"
    p.write_text(json.dumps({"dim": 2, "vectors": [[1, 0], [0, 1], [1, 1]]}))
    code, out, _ = call(capsys, "frame", str(p))
    obj = json.loads(out)
    assert code == 0 and obj["A"] == pytest.approx(1) and obj["B"] == pytest.approx(3)
    assert np.allclose(obj["dual"], [[2 / 3, -1 / 3], [-1 / 3, 2 / 3], [1 / 3, 1 / 3]])


def test_classify_json_lines(capsys, tmp_path):
    train = tmp_path / "train.csv"
    train.write_text("a,b,label\n1,0,0\n0,1,1\n")
    query = tmp_path / "q.csv"
    query.write_text("a,b\n0.9,0.1\n0.1,0.9\n")
    code, out, _ = call(capsys, "classify", "--train", str(train), "--query", str(query), "--metric", "sqnorm")
    rows = [json.loads(l) for l in out.splitlines()]
    assert code == 0 and [r["label"] for r in rows] == [0, 1]
    assert rows[0]["d0"] == pytest.approx(0.02) and rows[0]["d1"] == pytest.approx(1.62)


def test_classify_bad_label_reports_row(capsys, tmp_path):
    train = tmp_path / "train.csv"
    train.write_text("a,label\n1,0\n2,2\n")
    query = tmp_path / "q.csv"
    query.write_text("a\n1\n")
    code, _, err = call(capsys, "classify", "--train", str(train), "--query", str(query))
    assert code == 1
    e = json.loads(err)
    assert e["error"] == "UnknownLabel" and "row 2" in e["message"]


def test_usage_errors_exit_2(capsys):
    assert call(capsys, "demo", "--bogus")[0] == 2
    assert call(capsys, "nosuch")[0] == 2
    assert call(capsys)[0] == 2


def test_missing_file_exits_1(capsys, tmp_path):
    code, out, err = call(capsys, "tone", "recognize", str(tmp_path / "missing.wav"))
    assert code == 1 and out == ""
    assert "error" in json.loads(err)


def test_bad_wav_exits_1(capsys, tmp_path):
    p = tmp_path / "x.wav"
    p.write_bytes(b"not a wav at all")
    code, _, err = call(capsys, "tone", "spectrum", str(p))
    assert code == 1 and json.loads(err)["error"] == "BadMagic"


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "projclust", "gate", "--kind", "or", "--input", "1,0,0,0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout) == {"OR": [1.0, 0.0]}
    proc = subprocess.run([sys.executable, "-m", "projclust", "frobnicate"], capture_output=True, text=True)
    assert proc.returncode == 2 and "usage" in proc.stderr
