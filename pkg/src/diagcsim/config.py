"""Scenario configuration files (TOML).

Every key a section accepts is listed in ``_KEYS``; anything else is
rejected with the offending key named, before any processing starts.
"""
import hashlib
from dataclasses import replace

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .diagc import DiagcConfig
from .exceptions import ConfigurationError
from .legacy import AgcState, StcLaw
from .pipeline import LegacyConfig, SigprocConfig, SimulationConfig
from .rxchain import ReceiverConfig, StageSpec, default_stages
from .scene import Scatterer, Scenario, inject_bite, tapered_zone
from .waveform import BARKER_CODES, PulseSpec, phase_code_spec

_KEYS = {
    "run": {"variants"},
    "scenario": {"prf_hz", "prts_per_dwell", "range_bins", "beam_azimuth_deg",
                 "beam_elevation_deg", "beamwidth_deg", "noise_rms", "rng_seed"},
    "scatterer": {"range_bin", "extent_bins", "taper_bins", "amplitude", "power_db",
                  "doppler_hz", "azimuth_deg", "elevation_deg"},
    "bite": {"range_bin", "power_db", "doppler_hz"},
    "waveform": {"kind", "code", "samples_per_chip", "duration", "bandwidth", "sample_rate",
                 "amplitude"},
    "receiver": {"stage", "adc_bits", "adc_full_scale", "sense_tap", "max_control_db",
                 "single_stage_limit_db", "diagc_delay_bins"},
    "stage": {"name", "gain_db", "clip_level", "control_point"},
    "diagc": {"enabled", "window_bins", "target_level", "lsb_db", "max_word",
              "slew_db_per_bin", "latency_bins", "lead_bins"},
    "legacy": {"stc", "agc", "iagc"},
    "stc": {"db_per_octave", "cutoff_range_bins", "max_atten_db"},
    "agc": {"mu", "setpoint_db", "gain_db"},
    "sigproc": {"order", "threshold", "skip_first"},
}
_SECTIONS = {"run", "scenario", "scatterer", "bite", "waveform", "receiver", "diagc", "legacy",
             "sigproc"}


def _check_keys(table, section, path):
    if not isinstance(table, dict):
        raise ConfigurationError("expected a table", key=path)
    for k in table:
        if k not in _KEYS[section]:
            raise ConfigurationError("unknown key", key=f"{path}.{k}")


def _get(table, key, path, kind, default=None, required=False):
    if key not in table:
        if required:
            raise ConfigurationError("missing required key", key=f"{path}.{key}")
        return default
    v = table[key]
    if kind is float and isinstance(v, int) and not isinstance(v, bool):
        v = float(v)
    if kind is int and isinstance(v, float) and v.is_integer():
        v = int(v)
    if not isinstance(v, kind) or (kind in (int, float) and isinstance(v, bool)):
        raise ConfigurationError(f"expected {kind.__name__}, got {v!r}", key=f"{path}.{key}")
    return v


def _scatterers(items, scenario_beam):
    out = []
    if not isinstance(items, list):
        raise ConfigurationError("expected an array of tables", key="scatterer")
    for i, t in enumerate(items):
        path = f"scatterer[{i}]"
        _check_keys(t, "scatterer", path)
        if ("amplitude" in t) == ("power_db" in t):
            raise ConfigurationError("give exactly one of amplitude / power_db", key=path)
        amp = _get(t, "amplitude", path, float)
        if amp is None:
            amp = 10 ** (_get(t, "power_db", path, float) / 20)
        kw = dict(
            doppler_hz=_get(t, "doppler_hz", path, float, 0.0),
            azimuth_deg=_get(t, "azimuth_deg", path, float, scenario_beam[0]),
            elevation_deg=_get(t, "elevation_deg", path, float, scenario_beam[1]),
        )
        rb = _get(t, "range_bin", path, int, required=True)
        ext = _get(t, "extent_bins", path, int, 1)
        taper = _get(t, "taper_bins", path, int, 0)
        if taper < 0:
            raise ConfigurationError("must be non-negative", key=f"{path}.taper_bins")
        try:
            out.extend(tapered_zone(rb, ext, taper, amp, **kw))
        except ConfigurationError as e:
            raise ConfigurationError(str(e.args[0]), key=f"{path}.taper_bins") from None
    return out


def _waveform(t):
    path = "waveform"
    _check_keys(t, "waveform", path)
    kind = _get(t, "kind", path, str, "phase_code")
    fs = _get(t, "sample_rate", path, float, 1e6)
    amp = _get(t, "amplitude", path, float, 1.0)
    if kind == "phase_code":
        code = t.get("code", "barker13")
        if isinstance(code, str):
            if not code.startswith("barker") or not code[6:].isdigit() \
                    or int(code[6:]) not in BARKER_CODES:
                raise ConfigurationError(f"unknown code {code!r}", key="waveform.code")
            code = BARKER_CODES[int(code[6:])]
        elif not isinstance(code, list):
            raise ConfigurationError("expected a code name or a list of +1/-1",
                                     key="waveform.code")
        spc = _get(t, "samples_per_chip", path, int, 2)
        spec = phase_code_spec(code, spc, fs, amp)
        if "duration" in t and abs(_get(t, "duration", path, float) - spec.duration) > 1e-12:
            raise ConfigurationError("duration disagrees with code length and samples_per_chip",
                                     key="waveform.duration")
    elif kind == "lfm":
        spec = PulseSpec(kind="lfm", duration=_get(t, "duration", path, float, required=True),
                         sample_rate=fs, bandwidth=_get(t, "bandwidth", path, float, required=True),
                         amplitude=amp)
    else:
        raise ConfigurationError(f"unknown waveform kind {kind!r}", key="waveform.kind")
    return spec.validate()


def _receiver(t):
    path = "receiver"
    _check_keys(t, "receiver", path)
    stages = default_stages()
    if "stage" in t:
        items = t["stage"]
        if not isinstance(items, list) or not items:
            raise ConfigurationError("expected a non-empty array of tables", key="receiver.stage")
        stages = []
        for i, s in enumerate(items):
            sp = f"receiver.stage[{i}]"
            _check_keys(s, "stage", sp)
            stages.append(StageSpec(
                name=_get(s, "name", sp, str, required=True),
                gain_db=_get(s, "gain_db", sp, float, 0.0),
                clip_level=_get(s, "clip_level", sp, float, 1.0),
                control_point=_get(s, "control_point", sp, str, "none"),
            ))
    return ReceiverConfig(
        stages=tuple(stages),
        adc_bits=_get(t, "adc_bits", path, int, 14),
        adc_full_scale=_get(t, "adc_full_scale", path, float),
        sense_tap=_get(t, "sense_tap", path, str, "pre_if"),
        max_control_db=_get(t, "max_control_db", path, float, 16.0),
        single_stage_limit_db=_get(t, "single_stage_limit_db", path, float, 20.0),
        diagc_delay_bins=_get(t, "diagc_delay_bins", path, int, 0),
    )


def _diagc(t):
    path = "diagc"
    _check_keys(t, "diagc", path)
    d = DiagcConfig()
    return DiagcConfig(
        window_bins=_get(t, "window_bins", path, int, d.window_bins),
        target_level=_get(t, "target_level", path, int, d.target_level),
        lsb_db=_get(t, "lsb_db", path, float, d.lsb_db),
        max_word=_get(t, "max_word", path, int, d.max_word),
        slew_db_per_bin=_get(t, "slew_db_per_bin", path, float, d.slew_db_per_bin),
        latency_bins=_get(t, "latency_bins", path, int, d.latency_bins),
        lead_bins=_get(t, "lead_bins", path, int, d.lead_bins),
        enabled=_get(t, "enabled", path, bool, d.enabled),
    )


def _legacy(t):
    _check_keys(t, "legacy", "legacy")
    base = LegacyConfig()
    stc, agc = base.stc, base.agc
    if "stc" in t:
        s = t["stc"]
        _check_keys(s, "stc", "legacy.stc")
        stc = StcLaw(
            db_per_octave=_get(s, "db_per_octave", "legacy.stc", float, stc.db_per_octave),
            cutoff_range_bins=_get(s, "cutoff_range_bins", "legacy.stc", int,
                                   stc.cutoff_range_bins),
            max_atten_db=_get(s, "max_atten_db", "legacy.stc", float, stc.max_atten_db),
        )
    if "agc" in t:
        a = t["agc"]
        _check_keys(a, "agc", "legacy.agc")
        agc = AgcState(
            gain_db=_get(a, "gain_db", "legacy.agc", float, agc.gain_db),
            setpoint_db=_get(a, "setpoint_db", "legacy.agc", float, agc.setpoint_db),
            mu=_get(a, "mu", "legacy.agc", float, agc.mu),
        )
    return LegacyConfig(stc=stc, agc=agc, iagc=_get(t, "iagc", "legacy", bool, False))


def parse_config(doc, seed=None):
    """Build a validated :class:`SimulationConfig` from a parsed document."""
    for k in doc:
        if k not in _SECTIONS:
            raise ConfigurationError("unknown section", key=k)
    if "scenario" not in doc:
        raise ConfigurationError("missing section", key="scenario")
    sc = doc["scenario"]
    _check_keys(sc, "scenario", "scenario")
    beam = (_get(sc, "beam_azimuth_deg", "scenario", float, 0.0),
            _get(sc, "beam_elevation_deg", "scenario", float, 0.0))
    scenario = Scenario(
        prf_hz=_get(sc, "prf_hz", "scenario", float, required=True),
        prts_per_dwell=_get(sc, "prts_per_dwell", "scenario", int, required=True),
        range_bins=_get(sc, "range_bins", "scenario", int, required=True),
        scatterers=tuple(_scatterers(doc.get("scatterer", []), beam)),
        beam=beam,
        beamwidth_deg=_get(sc, "beamwidth_deg", "scenario", float, 1.0),
        noise_rms=_get(sc, "noise_rms", "scenario", float, 0.0),
        rng_seed=_get(sc, "rng_seed", "scenario", int, 0),
    )
    if seed is not None:
        scenario = replace(scenario, rng_seed=int(seed))
    if scenario.prts_per_dwell < 3:
        raise ConfigurationError("DIAGC needs at least 3 PRTs per dwell",
                                 key="scenario.prts_per_dwell")
    if "bite" in doc:
        b = doc["bite"]
        _check_keys(b, "bite", "bite")
        scenario = inject_bite(scenario, _get(b, "range_bin", "bite", int, required=True),
                               _get(b, "power_db", "bite", float, required=True),
                               _get(b, "doppler_hz", "bite", float, 0.0))
    run = doc.get("run", {})
    _check_keys(run, "run", "run")
    variants = run.get("variants", ["diagc_on", "diagc_off"])
    if not isinstance(variants, list) or not all(isinstance(v, str) for v in variants):
        raise ConfigurationError("expected a list of variant names", key="run.variants")
    sp = doc.get("sigproc", {})
    _check_keys(sp, "sigproc", "sigproc")
    d = SigprocConfig()
    sigproc = SigprocConfig(
        order=_get(sp, "order", "sigproc", int, d.order),
        threshold=_get(sp, "threshold", "sigproc", float, d.threshold),
        skip_first=_get(sp, "skip_first", "sigproc", int, d.skip_first),
    )
    cfg = SimulationConfig(
        scenario=scenario,
        waveform=_waveform(doc.get("waveform", {})),
        receiver=_receiver(doc.get("receiver", {})),
        diagc=_diagc(doc.get("diagc", {})),
        legacy=_legacy(doc.get("legacy", {})),
        sigproc=sigproc,
        variants=tuple(variants),
    )
    cfg.validate()
    return cfg


def load_config(path, seed=None):
    """Read, parse and validate a config file.

    Returns ``(config, sha256_hex)`` where the hash covers the raw file bytes.
    """
    with open(path, "rb") as f:
        raw = f.read()
    try:
        doc = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as e:
        raise ConfigurationError(f"cannot parse: {e}", key=str(path)) from None
    return parse_config(doc, seed=seed), hashlib.sha256(raw).hexdigest()
