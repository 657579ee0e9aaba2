import pytest

from diagcsim.config import load_config, parse_config
from diagcsim.exceptions import ConfigurationError

BASE = {"scenario": {"prf_hz": 1000.0, "prts_per_dwell": 6, "range_bins": 128}}


def doc(**sections):
    d = {k: dict(v) for k, v in BASE.items()}
    for k, v in sections.items():
        d[k] = v
    return d


def key_of(d):
    with pytest.raises(ConfigurationError) as e:
        parse_config(d)
    return e.value.key


def test_minimal_config_defaults():
    cfg = parse_config(doc())
    assert cfg.variants == ("diagc_on", "diagc_off")
    assert cfg.waveform.n_samples == 26
    assert cfg.diagc.max_word == 32


def test_seed_override():
    assert parse_config(doc(), seed=42).scenario.rng_seed == 42


@pytest.mark.parametrize("d,key", [
    (doc(bogus={}), "bogus"),
    (doc(diagc={"max_wrd": 3}), "diagc.max_wrd"),
    (doc(diagc={"max_word": "x"}), "diagc.max_word"),
    (doc(scatterer=[{"range_bin": 3, "amplitude": 1, "colour": 1}]), "scatterer[0].colour"),
    (doc(scatterer=[{"range_bin": 3}]), "scatterer[0]"),
    (doc(scatterer=[{"range_bin": 120, "amplitude": 1.0}]), "scatterer[0].range_bin"),
    (doc(waveform={"code": "barker12"}), "waveform.code"),
    (doc(sigproc={"order": 4}), "sigproc.order"),
    (doc(run={"variants": ["diagc_on", "nope"]}), "run.variants"),
    (doc(legacy={"stc": {"db_per_octave": 7}}), "legacy.stc.db_per_octave"),
    ({"scenario": {"prf_hz": 1000.0, "prts_per_dwell": 2, "range_bins": 128}},
     "scenario.prts_per_dwell"),
    ({"scenario": {"prf_hz": 1000.0, "range_bins": 128}}, "scenario.prts_per_dwell"),
])
def test_errors_name_the_key(d, key):
    assert key_of(d) == key


def test_receiver_stage_table():
    stages = [{"name": "a", "clip_level": 10.0},
              {"name": "pre_if", "clip_level": 10.0, "control_point": "diagc"},
              {"name": "pc", "clip_level": 1.0}]
    cfg = parse_config(doc(receiver={"stage": stages}))
    assert cfg.receiver.protected_stage == "pc"
    bad = [dict(stages[0]), dict(stages[1])]
    assert key_of(doc(receiver={"stage": bad})) == "receiver.stages"


def test_load_config_hash(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text('[scenario]\nprf_hz = 1000.0\nprts_per_dwell = 5\nrange_bins = 64\n')
    cfg, h = load_config(p)
    assert len(h) == 64 and cfg.scenario.range_bins == 64
    p.write_text("[scenario\n")
    with pytest.raises(ConfigurationError):
        load_config(p)


def test_shipped_configs_load(configs_dir):
    files = sorted(configs_dir.glob("*.toml"))
    assert files
    for f in files:
        load_config(f)
