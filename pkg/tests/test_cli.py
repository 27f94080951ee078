import json
import subprocess
import sys

import numpy as np
import pytest

from rdhei.cli import main
from rdhei.pixmap_io import load_pgm, save_pgm
from rdhei.samples import smooth_field

K1 = "11" * 32
K2 = "22" * 32


@pytest.fixture
def work(tmp_path, lena):
    save_pgm(tmp_path / "lena.pgm", lena)
    (tmp_path / "msg.bin").write_bytes(b"attack at dawn")
    return tmp_path


def run(*args):
    return main([str(a) for a in args])


def test_full_pipeline_emr(work, lena):
    assert run("encode", work / "lena.pgm", "--method", "emr", "--key1", K1, "-o", work / "enc.pgm") == 0
    assert run("hide", work / "enc.pgm", "--key2", K2, "--message", work / "msg.bin", "-o", work / "mk.pgm") == 0
    assert run("extract", work / "mk.pgm", "--key2", K2, "-o", work / "out.bin") == 0
    assert (work / "out.bin").read_bytes() == b"attack at dawn"
    assert run("recover", work / "mk.pgm", "--method", "emr", "--key1", K1, "-o", work / "rec.pgm") == 0
    assert np.array_equal(load_pgm(work / "rec.pgm") >> 1, lena >> 1)


def test_full_pipeline_lmr_env_keys(work, lena, monkeypatch):
    monkeypatch.setenv("RDHEI_KEY1", K1)
    monkeypatch.setenv("RDHEI_KEY2", K2)
    assert run("encode", work / "lena.pgm", "--method", "lmr", "-o", work / "enc.pgm") == 0
    assert run("hide", work / "enc.pgm", "--message", work / "msg.bin", "-o", work / "mk.pgm") == 0
    assert run("extract", work / "mk.pgm", "-o", work / "out.bin") == 0
    assert (work / "out.bin").read_bytes() == b"attack at dawn"
    assert run("recover", work / "mk.pgm", "--method", "lmr", "-o", work / "rec.pgm") == 0
    assert np.array_equal(load_pgm(work / "rec.pgm"), lena)


def test_capacity(work, capsys):
    assert run("capacity", work / "lena.pgm", "--method", "emr") == 0
    out = json.loads(capsys.readouterr().out)
    assert out["b"] == 4 and out["exact"] is False
    assert run("capacity", work / "lena.pgm", "--method", "lmr", "--key1", K1) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["b"] == 4 and out["case"] == "good" and out["exact"] is True
    assert [p.name for p in work.glob("*.pgm")] == ["lena.pgm"]


def test_roundtrip_lmr(work, capsys):
    code = run("roundtrip", work / "lena.pgm", "--method", "lmr", "--key1", K1, "--key2", K2,
               "--message", work / "msg.bin")
    report = json.loads(capsys.readouterr().out)
    assert code == 0
    assert report["pass"] is True
    assert report["psnr_db"] == "inf" and report["ssim"] == 1.0


def test_roundtrip_emr(work, capsys):
    assert run("roundtrip", work / "lena.pgm", "--method", "emr", "--key1", K1, "--key2", K2) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["pass"] and abs(report["psnr_db"] - 51.14) < 0.15


def test_analyze(work, capsys):
    assert run("analyze", work / "lena.pgm") == 0
    single = json.loads(capsys.readouterr().out)
    assert single["npcr_pct"] is None
    assert run("analyze", work / "lena.pgm", work / "lena.pgm") == 0
    pair = json.loads(capsys.readouterr().out)
    assert pair["psnr_db"] == "inf" and pair["npcr_pct"] == 0.0


def test_hide_oversized_exit_3(work, capsys):
    run("encode", work / "lena.pgm", "--method", "emr", "--key1", K1, "-o", work / "enc.pgm")
    capsys.readouterr()
    (work / "big.bin").write_bytes(bytes(200_000))
    assert run("hide", work / "enc.pgm", "--key2", K2, "--message", work / "big.bin", "-o", work / "x.pgm") == 3
    err = capsys.readouterr().err
    assert "capacity is" in err and "bits" in err
    assert not (work / "x.pgm").exists()


def test_wrong_key_or_garbage_exit_4(work, tmp_path):
    run("encode", work / "lena.pgm", "--method", "lmr", "--key1", K1, "-o", work / "enc.pgm")
    run("hide", work / "enc.pgm", "--key2", K2, "--message", work / "msg.bin", "-o", work / "mk.pgm")
    assert run("extract", work / "mk.pgm", "--key2", "33" * 32, "-o", work / "o.bin") in (0, 4)
    (tmp_path / "junk.pgm").write_bytes(b"not an image")
    assert run("analyze", tmp_path / "junk.pgm") == 4
    assert run("extract", work / "lena.pgm", "--method", "lmr", "--key2", K2, "-o", work / "o.bin") == 4


def test_bad_case_exit_5(tmp_path):
    save_pgm(tmp_path / "noise.pgm", np.random.default_rng(0).integers(0, 256, (128, 128), dtype=np.uint8))
    assert run("encode", tmp_path / "noise.pgm", "--method", "lmr", "--key1", K1, "-o", tmp_path / "e.pgm") == 5
    assert run("capacity", tmp_path / "noise.pgm", "--method", "lmr", "--key1", K1) == 5


def test_usage_errors_exit_2(work):
    assert run("encode", work / "lena.pgm", "--method", "emr", "--key1", "abc", "-o", work / "e.pgm") == 2
    assert run("encode", work / "lena.pgm", "--method", "emr", "-o", work / "e.pgm") == 2
    assert run("recover", work / "missing.pgm", "--method", "emr", "--key1", K1, "-o", work / "r.pgm") == 2
    with pytest.raises(SystemExit) as info:
        run("encode", work / "lena.pgm", "--method", "xyz")
    assert info.value.code == 2


def test_roundtrip_failure_exit_5_for_bad_case(tmp_path, capsys):
    save_pgm(tmp_path / "noise.pgm", np.random.default_rng(1).integers(0, 256, (64, 64), dtype=np.uint8))
    assert run("roundtrip", tmp_path / "noise.pgm", "--method", "lmr", "--key1", K1, "--key2", K2) == 5
    assert json.loads(capsys.readouterr().out)["pass"] is False


def test_module_entry_point(tmp_path):
    img = smooth_field(np.random.default_rng(2), 32, 32)
    save_pgm(tmp_path / "a.pgm", img)
    proc = subprocess.run(
        [sys.executable, "-m", "rdhei", "capacity", str(tmp_path / "a.pgm"), "--method", "emr"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["method"] == "emr"
