"""End-to-end dwell simulation for one processing variant."""
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from . import legacy
from .diagc import AttenSchedule, DiagcCard, DiagcConfig
from .exceptions import ConfigurationError
from .legacy import AgcState, StcLaw
from .metrics import (MetricsReport, gain_control_depth, peak_sidelobe, pulse_width,
                      residue_power, saturation_occupancy)
from .rxchain import ReceiverConfig, run_receiver, validate_config
from .scene import Scenario, synthesize_prt, validate_scenario
from .sigproc import CompressedPrt, DetectionReport, detect, mti_cancel, pulse_compress
from .waveform import PulseSpec, generate, matched_reference, phase_code_spec

VARIANTS = ("diagc_on", "diagc_off", "stc_only", "agc_only")


@dataclass(frozen=True)
class SigprocConfig:
    order: int = 2
    threshold: float = 100.0
    skip_first: int = 2


@dataclass(frozen=True)
class LegacyConfig:
    stc: StcLaw = field(default_factory=StcLaw)
    agc: AgcState = field(default_factory=lambda: AgcState(gain_db=0.0, setpoint_db=-20.0, mu=0.5))
    iagc: bool = False


@dataclass(frozen=True)
class SimulationConfig:
    scenario: Scenario
    waveform: PulseSpec = field(default_factory=lambda: phase_code_spec(samples_per_chip=2))
    receiver: ReceiverConfig = field(default_factory=ReceiverConfig)
    diagc: DiagcConfig = field(default_factory=DiagcConfig)
    legacy: LegacyConfig = field(default_factory=LegacyConfig)
    sigproc: SigprocConfig = field(default_factory=SigprocConfig)
    variants: Tuple[str, ...] = ("diagc_on", "diagc_off")

    def validate(self):
        """Check every section; raises :class:`ConfigurationError` on the first error.

        Returns the list of warnings.
        """
        self.waveform.validate()
        pulse_len = self.waveform.n_samples
        validate_scenario(self.scenario, pulse_len)
        issues = validate_config(self.receiver)
        errors = [i for i in issues if i.severity == "error"]
        if errors:
            raise ConfigurationError(errors[0].message, key=errors[0].key)
        self.diagc.validate(self.scenario.range_bins)
        if self.sigproc.order not in (2, 3):
            raise ConfigurationError("must be 2 or 3", key="sigproc.order")
        if self.sigproc.skip_first < 0:
            raise ConfigurationError("must be non-negative", key="sigproc.skip_first")
        if self.scenario.prts_per_dwell - self.sigproc.skip_first < self.sigproc.order:
            raise ConfigurationError("too few PRTs left to cancel", key="sigproc.skip_first")
        if not self.sigproc.threshold > 0:
            raise ConfigurationError("must be positive", key="sigproc.threshold")
        for v in self.variants:
            if v not in VARIANTS:
                raise ConfigurationError(f"unknown variant {v!r}", key="run.variants")
        return [i for i in issues if i.severity == "warning"]


@dataclass
class DwellResult:
    variant: str
    inputs: list
    outputs: list
    schedules: List[AttenSchedule]
    card_traces: list
    compressed: List[CompressedPrt]
    residuals: list
    report: DetectionReport
    metrics: MetricsReport

    @property
    def traces(self):
        return [o.trace for o in self.outputs]

    def residual_for_prt(self, prt_index, skip_first, order):
        """Residual whose newest PRT is ``prt_index``, or None."""
        k = prt_index - skip_first - order
        if 0 <= k < len(self.residuals):
            return self.residuals[k]
        return None


def _agc_level_db(codes, full_scale_levels):
    p = np.mean((np.asarray(codes, dtype=float) / full_scale_levels) ** 2)
    return 10 * np.log10(p) if p > 0 else -300.0


def simulate_dwell(cfg, variant="diagc_on", dwell_index=0):
    """Run one dwell of ``cfg.scenario`` through the chain for ``variant``."""
    if variant not in VARIANTS:
        raise ConfigurationError(f"unknown variant {variant!r}", key="run.variants")
    sc = cfg.scenario
    n = sc.range_bins
    rx = cfg.receiver
    pulse = generate(cfg.waveform)
    ref = matched_reference(pulse)
    dcfg = cfg.diagc.resolved(rx)
    dcfg = replace(dcfg, enabled=(variant == "diagc_on") and dcfg.enabled)
    card = DiagcCard(dcfg, n)
    card.reset(dwell_index)
    stc = legacy.stc_profile(n, cfg.legacy.stc) if variant == "stc_only" else None
    agc = cfg.legacy.agc
    levels = 1 << rx.adc_bits

    inputs, outputs, schedules, compressed = [], [], [], []
    for k in range(1, sc.prts_per_dwell + 1):
        prt = synthesize_prt(sc, pulse, k)
        sched = card.schedule(k)
        atten = sched.db
        if variant == "agc_only":
            a = min(max(-agc.gain_db, 0.0), rx.max_control_db)
            atten = np.full(n, a)
            sched = AttenSchedule(np.full(n, int(round(a / dcfg.lsb_db)), dtype=np.int64),
                                  dcfg.lsb_db)
        out = run_receiver(prt, rx, stc, atten)
        card.observe(k, out.sense_codes)
        if variant == "agc_only":
            agc = legacy.agc_step(agc, _agc_level_db(out.sense_codes, levels))
        inputs.append(prt)
        outputs.append(out)
        schedules.append(sched)
        compressed.append(pulse_compress(out.main_out, ref, prt_index=k))

    sp = cfg.sigproc
    residuals = mti_cancel(compressed, order=sp.order, skip_first=sp.skip_first)
    report = detect(residuals, sp.threshold, dwell_index=dwell_index)
    prot = rx.protected_stage
    clip = rx.stages[rx.index(prot)].clip_level
    last = np.abs(compressed[-1].samples)
    metrics = MetricsReport(
        pulse_width_bins=pulse_width(last),
        peak_sidelobe_db=peak_sidelobe(last),
        residue_power_db=residue_power(residuals, clip_level=clip),
        saturation_counts=saturation_occupancy([o.trace for o in outputs], prot),
        gain_control_depth_db=gain_control_depth(schedules),
        detections_count=len(report),
    )
    return DwellResult(variant, inputs, outputs, schedules, card.traces, compressed,
                       residuals, report, metrics)
