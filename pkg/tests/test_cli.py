import json
import subprocess
import sys

import pytest

from decaylab.cli import main

from test_scenarios import SMALL_WAVE


@pytest.fixture
def cfg_path(tmp_path):
    p = tmp_path / "tiny.cfg"
    p.write_text(SMALL_WAVE)
    return p


def test_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "S1-free-wave-1d" in out and "S5n-localized-negative-control" in out
    assert "hypothesis_violated" in out


def test_run_config_file(cfg_path, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", str(cfg_path), "--out", str(out), "--svg"]) == 0
    text = capsys.readouterr().out
    assert "tiny-wave: pass" in text
    assert (out / "tiny-wave" / "plots.svg").exists()


def test_run_uses_env_out_dir(cfg_path, tmp_path, monkeypatch):
    monkeypatch.setenv("DECAYLAB_OUT", str(tmp_path / "env"))
    assert main(["run", str(cfg_path)]) == 0
    assert (tmp_path / "env" / "tiny-wave" / "report.json").exists()


def test_run_reports_unexpected_status(tmp_path):
    p = tmp_path / "flip.cfg"
    p.write_text(SMALL_WAVE.replace("T = 20.0", 'T = 20.0\nexpected = "hypothesis_violated"'))
    assert main(["run", str(p), "--out", str(tmp_path)]) == 1


def test_run_rejects_corrupt_config(tmp_path, capsys):
    p = tmp_path / "bad.cfg"
    p.write_text(SMALL_WAVE.replace("grid.N = 501", "grid.N = -4"))
    assert main(["run", str(p), "--out", str(tmp_path / "o")]) == 2
    assert "config error" in capsys.readouterr().err
    assert not (tmp_path / "o").exists()


def test_run_unknown_target(capsys):
    assert main(["run", "S99-nothing"]) == 2


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    assert main(["run", "S1", "--sample-every", "0"]) == 2


def test_verify_with_extra_config(cfg_path, tmp_path, capsys):
    out = tmp_path / "v"
    assert main(["verify", "--filter", "tiny-*", "--config", str(cfg_path), "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert [s["id"] for s in summary["scenarios"]] == ["tiny-wave"]
    assert "1/1 scenarios as expected" in capsys.readouterr().out


def test_verify_corrupt_config_runs_nothing(tmp_path):
    p = tmp_path / "bad.cfg"
    p.write_text(SMALL_WAVE.replace("grid.N = 501", "grid.N = -4"))
    out = tmp_path / "v"
    assert main(["verify", "--config", str(p), "--out", str(out)]) == 2
    assert not out.exists()


def test_verify_empty_filter(tmp_path):
    assert main(["verify", "--filter", "zzz*", "--out", str(tmp_path)]) == 2


def test_console_script_entry_point(tmp_path):
    res = subprocess.run(
        [sys.executable, "-m", "decaylab.cli", "list"], capture_output=True, text=True, check=False
    )
    assert res.returncode == 0
    assert "S12b-damped-plate" in res.stdout
