"""Baseline gain-control techniques: STC range laws, a first-order AGC loop
in the dB domain, and pulse-to-pulse IAGC power subtraction."""
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import ConfigurationError

STC_RATES = (6.0, 9.0, 12.0)


@dataclass(frozen=True)
class StcLaw:
    db_per_octave: float = 12.0
    cutoff_range_bins: int = 256
    max_atten_db: float = 40.0

    def __post_init__(self):
        if self.db_per_octave not in STC_RATES:
            raise ConfigurationError(f"db_per_octave must be one of {STC_RATES}",
                                     key="legacy.stc.db_per_octave")
        if self.cutoff_range_bins <= 0:
            raise ConfigurationError("cutoff must be positive", key="legacy.stc.cutoff_range_bins")


def stc_attenuation(range_bin, law):
    """Attenuation in dB at ``range_bin``; zero at and beyond the cutoff."""
    r = np.asarray(range_bin, dtype=float)
    if np.any(r < 1):
        raise ConfigurationError("range_bin must be >= 1", key="legacy.stc")
    a = law.db_per_octave * np.log2(law.cutoff_range_bins / r)
    a = np.where(r >= law.cutoff_range_bins, 0.0, np.minimum(law.max_atten_db, a))
    return float(a) if a.ndim == 0 else a


def stc_profile(range_bins, law):
    """Per-bin STC attenuation for a receive window; bin 0 takes bin 1's value."""
    r = np.maximum(np.arange(range_bins), 1)
    return stc_attenuation(r, law)


@dataclass(frozen=True)
class AgcState:
    gain_db: float = 0.0
    setpoint_db: float = 0.0
    mu: float = 0.5

    def __post_init__(self):
        if not self.mu > 0:
            raise ConfigurationError("mu must be positive", key="legacy.agc.mu")


def agc_step(state, measured_avg_db):
    return replace(state, gain_db=state.gain_db - state.mu * (measured_avg_db - state.setpoint_db))


def agc_run(prt_average_levels_db, initial):
    """One gain value per PRT.

    ``prt_average_levels_db`` are the levels each PRT would show at unity
    gain; the loop sees them through its current gain, so the output error
    evolves as ``e[n+1] = (1 - mu) * e[n]`` for a constant input.
    """
    state = initial
    gains = []
    for level in prt_average_levels_db:
        state = agc_step(state, level + state.gain_db)
        gains.append(state.gain_db)
    return np.asarray(gains, dtype=float)


def iagc_subtract(prev_power, curr_power):
    return np.asarray(curr_power, dtype=float) - np.asarray(prev_power, dtype=float)
