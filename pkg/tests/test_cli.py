import json
import subprocess
import sys

import pytest


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "splda", *args],
        capture_output=True,
        text=True,
    )


@pytest.fixture(scope="module")
def synth_files(tmp_path_factory):
    d = tmp_path_factory.mktemp("synth")
    prefix = str(d / "fix")
    res = run_cli("gen-synth", "--seed", "42", "--out-prefix", prefix)
    assert res.returncode == 0, res.stderr
    return prefix


def test_gen_synth_writes_four_files(synth_files, tmp_path):
    import os

    for suffix in ("_source.fvec", "_source.labels", "_target.fvec", "_target.labels"):
        assert os.path.exists(synth_files + suffix)
    # re-run elsewhere: bit-identical outputs
    other = str(tmp_path / "again")
    res = run_cli("gen-synth", "--seed", "42", "--out-prefix", other)
    assert res.returncode == 0
    for suffix in ("_source.fvec", "_target.fvec"):
        with open(synth_files + suffix, "rb") as a, open(other + suffix, "rb") as b:
            assert a.read() == b.read()


def test_gen_synth_single_class_usage_error(tmp_path):
    res = run_cli("gen-synth", "--classes", "1", "--out-prefix", str(tmp_path / "x"))
    assert res.returncode == 2
    assert "--classes" in res.stderr


def test_adapt_full_run(synth_files, tmp_path):
    out = tmp_path / "pred.labels"
    report = tmp_path / "report.json"
    res = run_cli(
        "adapt",
        "--source", synth_files + "_source.fvec",
        "--source-labels", synth_files + "_source.labels",
        "--target", synth_files + "_target.fvec",
        "--target-labels", synth_files + "_target.labels",
        "--out", str(out), "--report", str(report),
    )
    assert res.returncode == 0, res.stderr
    doc = json.loads(report.read_text())
    assert len(doc["iterations"]) == 10
    final = res.stdout.strip().splitlines()[-1]
    assert final.startswith("accuracy=")
    val = final.split("=", 1)[1]
    assert len(val.split(".")[1]) == 4
    assert float(val) == pytest.approx(doc["final_accuracy"], abs=1e-4)
    assert len(out.read_text().splitlines()) == 250


def test_adapt_deterministic_outputs(synth_files, tmp_path):
    args = [
        "adapt",
        "--source", synth_files + "_source.fvec",
        "--source-labels", synth_files + "_source.labels",
        "--target", synth_files + "_target.fvec",
    ]
    outs = []
    for tag in ("a", "b"):
        out = tmp_path / f"pred_{tag}.labels"
        rep = tmp_path / f"rep_{tag}.json"
        res = run_cli(*args, "--out", str(out), "--report", str(rep))
        assert res.returncode == 0, res.stderr
        outs.append((out.read_bytes(), rep.read_bytes()))
    assert outs[0] == outs[1]


def test_adapt_missing_source_flag(tmp_path):
    res = run_cli("adapt", "--target", "t.fvec", "--out", "o", "--report", "r")
    assert res.returncode == 2
    assert "--source" in res.stderr


def test_adapt_dim_zero(synth_files, tmp_path):
    res = run_cli(
        "adapt",
        "--source", synth_files + "_source.fvec",
        "--source-labels", synth_files + "_source.labels",
        "--target", synth_files + "_target.fvec",
        "--dim", "0",
        "--out", str(tmp_path / "o"), "--report", str(tmp_path / "r"),
    )
    assert res.returncode == 2
    assert "--dim" in res.stderr


def test_adapt_unknown_flag(synth_files):
    res = run_cli("adapt", "--bogus", "1")
    assert res.returncode == 2


def test_adapt_missing_file(tmp_path):
    res = run_cli(
        "adapt",
        "--source", str(tmp_path / "missing.fvec"),
        "--source-labels", "x", "--target", "y",
        "--out", str(tmp_path / "o"), "--report", str(tmp_path / "r"),
    )
    assert res.returncode == 1
    assert "error" in res.stderr


def test_baseline(synth_files):
    res = run_cli(
        "baseline",
        "--source", synth_files + "_source.fvec",
        "--source-labels", synth_files + "_source.labels",
        "--target", synth_files + "_target.fvec",
        "--target-labels", synth_files + "_target.labels",
    )
    assert res.returncode == 0, res.stderr
    assert res.stdout.strip().startswith("accuracy=")


def test_baseline_zero_shift_perfect(tmp_path):
    prefix = str(tmp_path / "zs")
    run_cli("gen-synth", "--seed", "7", "--classes", "3", "--dim", "16",
            "--shift", "0", "--rotation", "0", "--out-prefix", prefix)
    res = run_cli(
        "baseline",
        "--source", prefix + "_source.fvec",
        "--source-labels", prefix + "_source.labels",
        "--target", prefix + "_target.fvec",
        "--target-labels", prefix + "_target.labels",
    )
    assert res.stdout.strip() == "accuracy=1.0000"


def test_inspect(tmp_path):
    p = tmp_path / "tiny.fvec"
    p.write_bytes(bytes.fromhex("53504c46" "01000000" "01000000" "02000000"
                                "0000803f" "00000040"))
    res = run_cli("inspect", str(p))
    assert res.returncode == 0
    assert res.stdout.splitlines()[0] == "n=1 d=2"
    assert "nan_count=0" in res.stdout


def test_inspect_truncated(tmp_path):
    import struct

    p = tmp_path / "trunc.fvec"
    p.write_bytes(struct.pack("<4sIII", b"SPLF", 1, 4, 4) + b"\x00" * 60)
    res = run_cli("inspect", str(p))
    assert res.returncode == 1
    assert "bytes" in res.stderr or "4x4" in res.stderr
