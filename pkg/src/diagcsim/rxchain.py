"""Receiver chain as an ordered cascade of gain / hard-limit stages.

Each stage multiplies by its gain, subtracts any per-bin attenuation applied
at its control point, then hard-limits the magnitude at ``clip_level`` while
keeping the phase. The coupled sense path detects the envelope at the
``sense_tap`` output and digitizes it with the card ADC.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ._validation import as_complex_1d, check_length
from .exceptions import ConfigurationError, ContractViolation

CONTROL_POINTS = ("none", "stc", "diagc")


@dataclass(frozen=True)
class StageSpec:
    name: str
    gain_db: float = 0.0
    clip_level: float = 1.0
    control_point: str = "none"


@dataclass(frozen=True)
class Issue:
    severity: str  # "error" or "warning"
    key: str
    message: str

    def __str__(self):
        return f"{self.severity}: {self.key}: {self.message}"


def default_stages():
    # Headroom shrinks toward the detector; everything up to the pre-IF
    # amplifier sits 40 dB above the protected stage.
    return (
        StageSpec("rf_front_end", 0.0, 100.0, "stc"),
        StageSpec("lna", 0.0, 100.0),
        StageSpec("mixer", 0.0, 100.0),
        StageSpec("pre_if", 0.0, 100.0, "diagc"),
        StageSpec("pulse_compressor_input", 0.0, 1.0),
        StageSpec("post_if", 0.0, 1.0),
    )


@dataclass(frozen=True)
class ReceiverConfig:
    """Receiver cascade plus the sense-path ADC.

    When ``adc_full_scale`` is None it is derived so that the detector range
    above the protected stage's clip equals ``max_control_db``: the clip
    level referred to the tap, raised by the gain-control range.
    """

    stages: Tuple[StageSpec, ...] = field(default_factory=default_stages)
    adc_bits: int = 14
    adc_full_scale: Optional[float] = None
    sense_tap: str = "pre_if"
    max_control_db: float = 16.0
    single_stage_limit_db: float = 20.0
    diagc_delay_bins: int = 0

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))

    @property
    def names(self):
        return [s.name for s in self.stages]

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise ConfigurationError(f"no stage named {name!r}", key="receiver.stages") from None

    def control_index(self, point):
        hits = [i for i, s in enumerate(self.stages) if s.control_point == point]
        return hits[0] if hits else None

    @property
    def protected_stage(self):
        """Name of the stage right after the DIAGC control point."""
        i = self.control_index("diagc")
        if i is None or i + 1 >= len(self.stages):
            raise ConfigurationError("no stage follows the diagc control point",
                                     key="receiver.stages")
        return self.stages[i + 1].name

    @property
    def adc_max_code(self):
        return (1 << self.adc_bits) - 1

    def clip_referred_to_tap(self):
        """Tap-output level at which the protected stage starts clipping."""
        tap = self.index(self.sense_tap)
        prot = self.index(self.protected_stage)
        gain_db = sum(s.gain_db for s in self.stages[tap + 1:prot + 1])
        return self.stages[prot].clip_level / 10 ** (gain_db / 20)

    def resolved_full_scale(self):
        if self.adc_full_scale is not None:
            return float(self.adc_full_scale)
        return self.clip_referred_to_tap() * 10 ** (self.max_control_db / 20)

    def clip_code(self):
        """ADC code the protected stage's clip level reads at the tap."""
        env = np.array([self.clip_referred_to_tap()])
        return int(adc_quantize(env, self)[0])

    def net_gain_db(self):
        return sum(s.gain_db for s in self.stages)


@dataclass
class StageTrace:
    """Per-stage pre-clip and post-clip samples plus clip flags."""

    pre_clip: Dict[str, np.ndarray] = field(default_factory=dict)
    outputs: Dict[str, np.ndarray] = field(default_factory=dict)
    flags: Dict[str, np.ndarray] = field(default_factory=dict)

    def flag_count(self, name):
        return int(np.count_nonzero(self.flags[name]))


@dataclass
class ReceiverOutput:
    main_out: np.ndarray
    sense_codes: np.ndarray
    trace: StageTrace


def _clip(y, clip_level):
    mag = np.abs(y)
    flags = mag > clip_level
    out = y.copy()
    out[flags] *= clip_level / mag[flags]
    return out, flags


def apply_stage(samples, stage, atten_db_per_bin=None, _return_pre=False):
    """Gain, per-bin attenuation and phase-preserving hard limit for one stage."""
    x = as_complex_1d(samples)
    if atten_db_per_bin is None:
        atten = np.zeros(len(x))
    else:
        atten = np.asarray(atten_db_per_bin, dtype=float)
        check_length(atten, len(x), "atten_db_per_bin")
        if np.any(atten < 0):
            raise ContractViolation("attenuation must be non-negative")
    y = x * 10 ** ((stage.gain_db - atten) / 20)
    out, flags = _clip(y, stage.clip_level)
    if _return_pre:
        return out, flags, y
    return out, flags


def detect_envelope(samples):
    return np.abs(as_complex_1d(samples))


def adc_quantize(envelope, config):
    """Unsigned ADC codes for a non-negative envelope; over-range saturates."""
    fs = config.resolved_full_scale()
    if fs <= 0:
        raise ConfigurationError("adc_full_scale must be positive", key="receiver.adc_full_scale")
    levels = 1 << config.adc_bits
    env = np.asarray(envelope, dtype=float)
    codes = np.floor(env / fs * levels)
    return np.minimum(codes, levels - 1).astype(np.int64)


def delay_commands(atten_db, delay_bins):
    """Attenuation seen by an amplifier answering commands ``delay_bins`` late.

    The amplifier's command register holds 0 dB until the first command
    arrives.
    """
    atten = np.asarray(atten_db, dtype=float)
    if delay_bins == 0:
        return atten
    out = np.zeros_like(atten)
    out[delay_bins:] = atten[:len(atten) - delay_bins]
    return out


def run_receiver(prt, config, stc_atten_per_bin=None, diagc_atten_per_bin=None,
                 diagc_delay_bins=None):
    """Run one PRT through the cascade.

    Returns the ``post_if`` (last stage) output, the sense-path ADC codes and
    the per-stage trace. ``diagc_delay_bins`` models the pre-IF amplifier's
    response lag to attenuation commands (default: ``config.diagc_delay_bins``).
    """
    x = as_complex_1d(getattr(prt, "samples", prt))
    n = len(x)
    stc = np.zeros(n) if stc_atten_per_bin is None else np.asarray(stc_atten_per_bin, float)
    dia = np.zeros(n) if diagc_atten_per_bin is None else np.asarray(diagc_atten_per_bin, float)
    check_length(stc, n, "stc_atten_per_bin")
    check_length(dia, n, "diagc_atten_per_bin")
    if diagc_delay_bins is None:
        diagc_delay_bins = config.diagc_delay_bins
    dia = delay_commands(dia, diagc_delay_bins)

    trace = StageTrace()
    sense = None
    for stage in config.stages:
        atten = {"stc": stc, "diagc": dia}.get(stage.control_point)
        x, flags, pre = apply_stage(x, stage, atten, _return_pre=True)
        trace.pre_clip[stage.name] = pre
        trace.outputs[stage.name] = x
        trace.flags[stage.name] = flags
        if stage.name == config.sense_tap:
            sense = adc_quantize(detect_envelope(x), config)
    if sense is None:
        raise ConfigurationError(f"sense_tap {config.sense_tap!r} is not a stage",
                                 key="receiver.sense_tap")
    return ReceiverOutput(x, sense, trace)


def validate_config(config) -> List[Issue]:
    """Check a receiver configuration; returns errors and warnings."""
    issues = []

    def err(key, msg):
        issues.append(Issue("error", key, msg))

    if not config.stages:
        err("receiver.stages", "cascade is empty")
        return issues
    names = config.names
    for name in set(names):
        if names.count(name) > 1:
            err("receiver.stages", f"duplicate stage name {name!r}")
    for i, s in enumerate(config.stages):
        if s.control_point not in CONTROL_POINTS:
            err(f"receiver.stages[{i}].control_point", f"unknown control point {s.control_point!r}")
        if not s.clip_level > 0:
            err(f"receiver.stages[{i}].clip_level", "clip_level must be positive")
    for point in ("stc", "diagc"):
        n = sum(1 for s in config.stages if s.control_point == point)
        if n > 1:
            err("receiver.stages", f"{n} {point} control points declared, at most one allowed")
    d = config.control_index("diagc")
    if d is not None and d == len(config.stages) - 1:
        err("receiver.stages", "diagc control point must be followed by a protected stage")
    s = config.control_index("stc")
    if s is not None and d is not None and s > d:
        err("receiver.stages", "stc control point must precede the diagc control point")
    if config.sense_tap not in names:
        err("receiver.sense_tap", f"{config.sense_tap!r} names no stage")
    if config.adc_bits < 1 or config.adc_bits > 31:
        err("receiver.adc_bits", "adc_bits must be in 1..31")
    if config.adc_full_scale is not None and not config.adc_full_scale > 0:
        err("receiver.adc_full_scale", "adc_full_scale must be positive")
    if config.diagc_delay_bins < 0:
        err("receiver.diagc_delay_bins", "diagc_delay_bins must be non-negative")
    if config.max_control_db < 0:
        err("receiver.max_control_db", "max_control_db must be non-negative")
    if config.max_control_db > config.single_stage_limit_db:
        issues.append(Issue(
            "warning", "receiver.max_control_db",
            f"{config.max_control_db} dB exceeds the ~{config.single_stage_limit_db} dB reachable "
            "by one controlled stage; control more than one IF stage"))
    return issues
