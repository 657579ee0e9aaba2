import numpy as np
import pytest

from diagcsim.cli import main
from diagcsim.report import read_csv

SMALL = """
[run]
variants = ["diagc_on", "diagc_off", "stc_only", "agc_only"]
[scenario]
prf_hz = 1000.0
prts_per_dwell = 5
range_bins = 160
noise_rms = 0.01
rng_seed = 4
[[scatterer]]
range_bin = 40
extent_bins = 30
taper_bins = 8
amplitude = 0.4
[[scatterer]]
range_bin = 110
power_db = 6.0
doppler_hz = 500.0
[diagc]
lead_bins = 4
"""


@pytest.fixture
def small(tmp_path):
    p = tmp_path / "small.toml"
    p.write_text(SMALL)
    return p


def test_run_writes_tree(small, tmp_path):
    out = tmp_path / "out"
    assert main(["run", str(small), "--out", str(out)]) == 0
    comment, header, rows = read_csv(out / "metrics.csv")
    assert comment.startswith("# config_sha256=") and comment.endswith("seed=4")
    assert [r[0] for r in rows] == ["diagc_on", "diagc_off", "stc_only", "agc_only"]
    assert len(rows[0][6].split(";")) == 5
    _, h, tr = read_csv(out / "diagc_on" / "trace.csv")
    assert h == ["prt", "bin", "pre_clip", "post_clip", "sense_code", "word", "db",
                 "compressed_mag", "residual_mag"]
    assert len(tr) == 5 * 160
    # residuals exist from PRT skip_first + order = 4 onward
    assert tr[0][8] == "" and tr[3 * 160][8] != ""
    _, h, dt = read_csv(out / "diagc_on" / "diagc_trace.csv")
    assert h[:3] == ["prt", "bin", "adc_code"] and len(dt) == 5 * 160
    _, h, _ = read_csv(out / "diagc_off" / "detections.csv")
    assert h == ["dwell", "range_bin", "magnitude"]
    assert not any(p.name.startswith(".diagcsim-") for p in tmp_path.iterdir())


def test_seed_flag_changes_output(small, tmp_path):
    main(["run", str(small), "--out", str(tmp_path / "a")])
    main(["run", str(small), "--out", str(tmp_path / "b"), "--seed", "5"])
    a = (tmp_path / "a" / "diagc_off" / "trace.csv").read_bytes()
    b = (tmp_path / "b" / "diagc_off" / "trace.csv").read_bytes()
    assert a != b and b"seed=5" in b


def test_compare(small, tmp_path):
    out = tmp_path / "cmp"
    assert main(["compare", str(small), "--out", str(out)]) == 0
    _, _, rows = read_csv(out / "compare_metrics.csv")
    assert [r[0] for r in rows] == ["diagc_on", "diagc_off", "stc_only"]
    _, h, bins = read_csv(out / "compare_bins.csv")
    assert h == ["bin", "diagc_on", "diagc_off", "stc_only", "differs", "saturating_zone"]
    assert len(bins) == 160
    zone = np.array([r[5] == "1" for r in bins])
    assert zone[110] and zone[60] and not zone[5]


def test_sweep_step(small, tmp_path):
    out = tmp_path / "sw"
    assert main(["sweep-step", str(small), "--steps", "0,6,12", "--out", str(out)]) == 0
    _, h, rows = read_csv(out / "sweep.csv")
    assert h == ["step_db", "pulse_width_bins", "peak_sidelobe_db"]
    assert [r[0] for r in rows] == ["0", "6", "12"]


def test_bad_steps_exit_1(small, tmp_path, capsys):
    assert main(["sweep-step", str(small), "--steps", "0,x", "--out", str(tmp_path)]) == 1
    assert "--steps" in capsys.readouterr().err


def test_validation_error_exit_1_names_key(tmp_path, capsys):
    p = tmp_path / "bad.toml"
    p.write_text(SMALL.replace("lead_bins", "lead_bin"))
    out = tmp_path / "o"
    assert main(["run", str(p), "--out", str(out)]) == 1
    assert "diagc.lead_bin" in capsys.readouterr().err
    assert not out.exists()


def test_missing_file_exit_1(tmp_path):
    assert main(["run", str(tmp_path / "none.toml"), "--out", str(tmp_path / "o")]) == 1


def test_runtime_failure_exit_2_leaves_nothing(small, tmp_path, monkeypatch, capsys):
    import diagcsim.cli as cli

    def boom(*a, **k):
        raise RuntimeError("card fault")
    monkeypatch.setattr(cli, "simulate_dwell", boom)
    out = tmp_path / "o"
    assert main(["run", str(small), "--out", str(out)]) == 2
    assert "card fault" in capsys.readouterr().err
    assert not out.exists()
    assert not any(p.name.startswith(".diagcsim-") for p in tmp_path.iterdir())


def test_warning_goes_to_stderr(tmp_path, capsys):
    p = tmp_path / "w.toml"
    p.write_text(SMALL + "[receiver]\nmax_control_db = 16.0\nsingle_stage_limit_db = 10.0\n")
    assert main(["run", str(p), "--out", str(tmp_path / "o")]) == 0
    assert "receiver.max_control_db" in capsys.readouterr().err
