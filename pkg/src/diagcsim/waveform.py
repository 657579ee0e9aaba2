"""Transmit waveforms and matched-filter references.

One complex sample is produced per range bin, so ``sample_rate`` is the
range clock.
"""
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._validation import check_positive
from .exceptions import ConfigurationError

BARKER_13 = (1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1)

BARKER_CODES = {
    2: (1, -1),
    3: (1, 1, -1),
    4: (1, 1, -1, 1),
    5: (1, 1, 1, -1, 1),
    7: (1, 1, 1, -1, -1, 1, -1),
    11: (1, 1, 1, -1, -1, -1, 1, -1, -1, 1, -1),
    13: BARKER_13,
}


@dataclass(frozen=True)
class PulseSpec:
    """Transmit pulse description.

    ``kind`` is ``"lfm"`` or ``"phase_code"``. ``bandwidth`` is only read for
    LFM and ``code`` only for phase codes.
    """

    kind: str
    duration: float
    sample_rate: float
    bandwidth: float = 0.0
    code: Optional[Sequence[int]] = None
    amplitude: float = 1.0

    @property
    def n_samples(self):
        return int(round(self.duration * self.sample_rate))

    def validate(self):
        if self.kind not in ("lfm", "phase_code"):
            raise ConfigurationError(f"unknown waveform kind {self.kind!r}", key="waveform.kind")
        check_positive(self.duration, "waveform.duration")
        check_positive(self.sample_rate, "waveform.sample_rate")
        check_positive(self.amplitude, "waveform.amplitude")
        if self.n_samples < 1:
            raise ConfigurationError("duration * sample_rate must give at least one sample",
                                     key="waveform.duration")
        if self.kind == "lfm":
            if self.bandwidth < 0 or not np.isfinite(self.bandwidth):
                raise ConfigurationError("bandwidth must be non-negative", key="waveform.bandwidth")
        else:
            if not self.code:
                raise ConfigurationError("phase code must be non-empty", key="waveform.code")
            if any(c not in (1, -1) for c in self.code):
                raise ConfigurationError("phase code chips must be +1 or -1", key="waveform.code")
            if self.n_samples % len(self.code) or self.n_samples < len(self.code):
                raise ConfigurationError(
                    f"{self.n_samples} samples do not divide into {len(self.code)} chips",
                    key="waveform.duration")
        return self


@dataclass(frozen=True)
class BasebandPulse:
    samples: np.ndarray = field(repr=False)
    sample_rate: float

    def __len__(self):
        return len(self.samples)

    @property
    def energy(self):
        return float(np.sum(np.abs(self.samples) ** 2))


def phase_code_spec(code=BARKER_13, samples_per_chip=1, sample_rate=1e6, amplitude=1.0):
    """Build a :class:`PulseSpec` for a phase code from its chip count."""
    if samples_per_chip < 1 or int(samples_per_chip) != samples_per_chip:
        raise ConfigurationError("samples_per_chip must be a positive integer",
                                 key="waveform.samples_per_chip")
    n = len(code) * int(samples_per_chip)
    return PulseSpec(kind="phase_code", duration=n / sample_rate, sample_rate=sample_rate,
                     code=tuple(int(c) for c in code), amplitude=amplitude)


def generate_lfm(spec):
    """Linear FM chirp with constant modulus ``spec.amplitude``.

    Instantaneous phase is ``pi * (B / T) * (t - T/2)**2`` with ``t = n / fs``,
    so the chirp is symmetric about the pulse centre.
    """
    if spec.kind != "lfm":
        raise ConfigurationError("generate_lfm needs an lfm spec", key="waveform.kind")
    spec.validate()
    n = spec.n_samples
    t = np.arange(n) / spec.sample_rate
    T = spec.duration
    phase = np.pi * (spec.bandwidth / T) * (t - T / 2) ** 2
    return BasebandPulse(spec.amplitude * np.exp(1j * phase), spec.sample_rate)


def generate_phase_code(spec):
    """Binary phase code; chip ``-1`` maps to phase pi."""
    if spec.kind != "phase_code":
        raise ConfigurationError("generate_phase_code needs a phase_code spec", key="waveform.kind")
    spec.validate()
    per_chip = spec.n_samples // len(spec.code)
    chips = np.repeat(np.asarray(spec.code, dtype=float), per_chip)
    return BasebandPulse((spec.amplitude * chips).astype(np.complex128), spec.sample_rate)


def generate(spec):
    if spec.kind == "lfm":
        return generate_lfm(spec)
    return generate_phase_code(spec)


def matched_reference(pulse):
    """Conjugated, time-reversed copy of ``pulse`` (the matched filter)."""
    return BasebandPulse(np.conj(pulse.samples[::-1]).copy(), pulse.sample_rate)
