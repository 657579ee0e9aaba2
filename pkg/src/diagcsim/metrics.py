"""Measurements on compressed pulses, canceller residues and receiver traces."""
import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .sigproc import pulse_compress
from .waveform import matched_reference

FLOOR_DB = -300.0


@dataclass
class MetricsReport:
    pulse_width_bins: float
    peak_sidelobe_db: float
    residue_power_db: float
    saturation_counts: List[int] = field(default_factory=list)
    gain_control_depth_db: float = 0.0
    detections_count: int = 0


@dataclass(frozen=True)
class SweepRow:
    step_db: float
    pulse_width_bins: float
    peak_sidelobe_db: float


def _db20(ratio):
    return 20 * math.log10(ratio) if ratio > 0 else FLOOR_DB


def pulse_width(magnitudes, level_db=-3.0):
    """Width between the two ``level_db`` crossings around the global peak.

    Crossings are linearly interpolated between samples; a main lobe
    narrower than one sample reports 1 bin.
    """
    m = np.abs(np.asarray(magnitudes, dtype=float))
    k = int(np.argmax(m))
    peak = m[k]
    if peak == 0:
        return 1.0
    lvl = peak * 10 ** (level_db / 20)
    i = k
    while i > 0 and m[i - 1] >= lvl:
        i -= 1
    left = float(i) if i == 0 else (i - 1) + (lvl - m[i - 1]) / (m[i] - m[i - 1])
    j = k
    while j < len(m) - 1 and m[j + 1] >= lvl:
        j += 1
    right = float(j) if j == len(m) - 1 else j + (m[j] - lvl) / (m[j] - m[j + 1])
    return max(1.0, right - left)


def peak_sidelobe(magnitudes, mainlobe_exclusion_bins=None):
    """Largest magnitude outside the main lobe, in dB relative to the peak.

    The default exclusion is ``ceil(pulse_width)`` bins either side of the
    peak. Returns :data:`FLOOR_DB` when nothing lies outside the main lobe.
    """
    m = np.abs(np.asarray(magnitudes, dtype=float))
    k = int(np.argmax(m))
    if m[k] == 0:
        return FLOOR_DB
    if mainlobe_exclusion_bins is None:
        mainlobe_exclusion_bins = math.ceil(pulse_width(m))
    idx = np.abs(np.arange(len(m)) - k) > mainlobe_exclusion_bins
    if not idx.any():
        return FLOOR_DB
    return _db20(m[idx].max() / m[k])


def residue_power(residuals, clip_level=1.0, bins=None):
    """Mean residue power over ``bins`` (all bins if None), dB re ``clip_level**2``."""
    r = np.asarray(residuals)
    if r.ndim == 1:
        r = r[None, :]
    if bins is not None:
        r = r[:, bins]
    if r.size == 0:
        return FLOOR_DB
    p = float(np.mean(np.abs(r) ** 2))
    return 10 * math.log10(p / clip_level ** 2) if p > 0 else FLOOR_DB


def saturation_occupancy(traces, stage):
    """Clipped-bin count at ``stage`` for each PRT's trace."""
    return [int(np.count_nonzero(t.flags[stage])) for t in traces]


def gain_control_depth(schedules):
    """Largest attenuation in dB across a dwell's schedules."""
    depth = 0.0
    for s in schedules:
        db = np.asarray(getattr(s, "db", s), dtype=float)
        if db.size:
            depth = max(depth, float(db.max()))
    return depth


def step_profile(n, step_db, ramp_db_per_bin):
    """Attenuation rising from 0 dB at ``ramp_db_per_bin`` until ``step_db``."""
    return np.minimum(step_db, ramp_db_per_bin * np.arange(n, dtype=float))


def sweep_step_distortion(pulse, steps_db, ramp_db_per_bin=2.0) -> List[SweepRow]:
    """Compressed width and peak side-lobe under step attenuation of one echo.

    The attenuation ramp starts at the echo's leading edge; the echo is
    compressed with the undistorted matched reference.
    """
    p = np.asarray(pulse.samples, dtype=np.complex128)
    n = len(p)
    ref = matched_reference(pulse)
    rows = []
    for step in steps_db:
        echo = p * 10 ** (-step_profile(n, step, ramp_db_per_bin) / 20)
        window = np.zeros(3 * n, dtype=np.complex128)
        window[n:2 * n] = echo
        mag = np.abs(pulse_compress(window, ref).samples)
        rows.append(SweepRow(float(step), pulse_width(mag), peak_sidelobe(mag)))
    return rows
