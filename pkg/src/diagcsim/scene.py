"""Receiver-input synthesis for one dwell of PRTs.

Scatterer positions are range-bin indices. Distributed clutter is a run of
identical echoes at consecutive bins, summed coherently with the pulse
replica. Receiver noise is circular Gaussian, drawn from a generator seeded
by ``(rng_seed, prt_index)`` so every PRT is reproducible on its own.
"""
from dataclasses import dataclass, field, replace
from typing import List, Tuple

import numpy as np

from ._validation import check_int_range, check_positive
from .exceptions import ConfigurationError, ContractViolation, ScenarioError


@dataclass(frozen=True)
class Scatterer:
    range_bin: int
    amplitude: float
    extent_bins: int = 1
    doppler_hz: float = 0.0
    azimuth_deg: float = 0.0
    elevation_deg: float = 0.0


@dataclass(frozen=True)
class Scenario:
    prf_hz: float
    prts_per_dwell: int
    range_bins: int
    scatterers: Tuple[Scatterer, ...] = ()
    beam: Tuple[float, float] = (0.0, 0.0)
    beamwidth_deg: float = 1.0
    noise_rms: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "scatterers", tuple(self.scatterers))
        object.__setattr__(self, "beam", tuple(self.beam))

    def in_beam(self, s):
        half = self.beamwidth_deg / 2
        return (abs(s.azimuth_deg - self.beam[0]) <= half
                and abs(s.elevation_deg - self.beam[1]) <= half)


@dataclass(frozen=True)
class PrtSamples:
    prt_index: int
    samples: np.ndarray = field(repr=False)


def validate_scenario(scenario, pulse_len):
    """Raise :class:`ScenarioError` if the scenario cannot be synthesized."""
    check_positive(scenario.prf_hz, "scenario.prf_hz")
    check_int_range(scenario.prts_per_dwell, "scenario.prts_per_dwell", lo=3)
    check_int_range(scenario.range_bins, "scenario.range_bins", lo=pulse_len)
    if scenario.noise_rms < 0:
        raise ConfigurationError("must be non-negative", key="scenario.noise_rms")
    for i, s in enumerate(scenario.scatterers):
        key = f"scatterer[{i}]"
        if s.range_bin < 0 or int(s.range_bin) != s.range_bin:
            raise ScenarioError("range_bin must be a non-negative integer", key=key + ".range_bin")
        if s.extent_bins < 1 or int(s.extent_bins) != s.extent_bins:
            raise ScenarioError("extent_bins must be an integer >= 1", key=key + ".extent_bins")
        if s.amplitude < 0:
            raise ScenarioError("amplitude must be non-negative", key=key + ".amplitude")
        if s.range_bin + s.extent_bins + pulse_len > scenario.range_bins:
            raise ScenarioError(
                f"echo ends past the receive window ({s.range_bin} + {s.extent_bins} + "
                f"{pulse_len} > {scenario.range_bins})", key=key + ".range_bin")
    return scenario


def _clutter_kernel(pulse_samples, extent):
    # coherent sum of `extent` replicas at consecutive bins
    return np.convolve(np.ones(extent), pulse_samples)


def synthesize_prt(scenario, pulse, prt_index):
    """Receiver-input samples for PRT ``prt_index`` (1-based) of the dwell."""
    if not 1 <= prt_index <= scenario.prts_per_dwell:
        raise ContractViolation(
            f"prt_index {prt_index} outside 1..{scenario.prts_per_dwell}")
    p = np.asarray(pulse.samples, dtype=np.complex128)
    validate_scenario(scenario, len(p))
    n = scenario.range_bins
    out = np.zeros(n, dtype=np.complex128)
    for s in scenario.scatterers:
        if not scenario.in_beam(s) or s.amplitude == 0:
            continue
        echo = _clutter_kernel(p, s.extent_bins)
        rot = np.exp(2j * np.pi * s.doppler_hz * (prt_index - 1) / scenario.prf_hz)
        out[s.range_bin:s.range_bin + len(echo)] += s.amplitude * rot * echo
    if scenario.noise_rms > 0:
        rng = np.random.default_rng([scenario.rng_seed, prt_index])
        noise = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        out += noise * (scenario.noise_rms / np.sqrt(2))
    return PrtSamples(prt_index, out)


def synthesize_dwell(scenario, pulse):
    return [synthesize_prt(scenario, pulse, k) for k in range(1, scenario.prts_per_dwell + 1)]


def inject_bite(scenario, range_bin, power_db_rel_fullscale, doppler_hz=0.0):
    """Return a copy of ``scenario`` with an RF BITE point target appended.

    The BITE target is placed on the scenario's beam so it is never gated out.
    """
    if not 0 <= range_bin < scenario.range_bins:
        raise ScenarioError(f"bin {range_bin} outside 0..{scenario.range_bins - 1}",
                            key="bite.range_bin")
    bite = Scatterer(range_bin=int(range_bin), amplitude=10 ** (power_db_rel_fullscale / 20),
                     extent_bins=1, doppler_hz=doppler_hz,
                     azimuth_deg=scenario.beam[0], elevation_deg=scenario.beam[1])
    return replace(scenario, scatterers=scenario.scatterers + (bite,))


def tapered_zone(range_bin, extent_bins, taper_bins, amplitude, **kwargs) -> List[Scatterer]:
    """Nested clutter runs whose sum rises linearly over ``taper_bins`` bins.

    The zone spans ``extent_bins`` bins and reaches ``amplitude`` per bin on
    its plateau. ``taper_bins = 0`` gives a single hard-edged run. Used to
    model hill returns, which rise and fall over several range bins.
    """
    if taper_bins == 0:
        return [Scatterer(range_bin, amplitude, extent_bins, **kwargs)]
    if extent_bins <= 2 * taper_bins:
        raise ScenarioError("extent_bins must exceed twice taper_bins", key="scatterer.taper_bins")
    step = amplitude / taper_bins
    return [Scatterer(range_bin + k, step, extent_bins - 2 * k, **kwargs)
            for k in range(taper_bins)]
