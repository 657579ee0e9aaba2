"""Functional model of the DIAGC card.

The card sees the sense-path ADC codes of every PRT. PRTs 1 and 2 of a dwell
pass through an 8-bin moving average into a dual-port dwell memory (PRT 1
writes, PRT 2 reads back, averages and writes). From PRT 3 on the frozen
memory is read each PRT and turned into 6-bit attenuation words by the
threshold logic, slew limited and shifted by the calibrated response lag.

Everything on the card side is integer arithmetic; the only dB mapping is a
precomputed code -> word lookup table.
"""
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import List, Optional

import numpy as np

from ._validation import as_codes, check_int_range, check_positive
from .exceptions import ConfigurationError, ContractViolation

ADC_MAX_CODE = 16383
WORD_BITS = 6


@dataclass(frozen=True)
class TimingSignals:
    dwell_index: int
    prt_index: int
    range_bin: int = 0


@dataclass(frozen=True)
class DiagcConfig:
    """Card parameters.

    ``target_level`` is the ADC count the controller regulates toward; None
    means "derive from the receiver" (half the clip code, 6 dB headroom).
    ``lead_bins`` advances the schedule on top of ``latency_bins`` so each
    word lines up with the centre of the averaging window that produced it.
    """

    window_bins: int = 8
    target_level: Optional[int] = None
    lsb_db: float = 0.5
    max_word: int = 32
    slew_db_per_bin: float = 2.0
    latency_bins: int = 0
    lead_bins: int = 0
    enabled: bool = True

    @property
    def step_words(self):
        return int(np.floor(self.slew_db_per_bin / self.lsb_db + 1e-9))

    def validate(self, range_bins=None):
        check_int_range(self.window_bins, "diagc.window_bins", lo=1)
        check_int_range(self.max_word, "diagc.max_word", lo=1, hi=(1 << WORD_BITS) - 1)
        check_positive(self.lsb_db, "diagc.lsb_db")
        check_positive(self.slew_db_per_bin, "diagc.slew_db_per_bin")
        check_int_range(self.latency_bins, "diagc.latency_bins", lo=0)
        check_int_range(self.lead_bins, "diagc.lead_bins", lo=0)
        if self.target_level is not None:
            check_int_range(self.target_level, "diagc.target_level", lo=1, hi=ADC_MAX_CODE)
        if range_bins is not None and self.latency_bins + self.lead_bins >= range_bins:
            raise ConfigurationError("latency_bins + lead_bins must be below range_bins",
                                     key="diagc.latency_bins")
        return self

    def resolved(self, receiver):
        """Copy with ``target_level`` filled in from ``receiver``."""
        if self.target_level is not None:
            return self
        return replace(self, target_level=max(1, receiver.clip_code() // 2))


@dataclass(frozen=True)
class DwellMemory:
    stored: Optional[np.ndarray] = field(default=None, repr=False)
    phase: str = "empty"  # empty | after_prt1 | frozen


@dataclass(frozen=True)
class AttenSchedule:
    words: np.ndarray = field(repr=False)
    lsb_db: float = 0.5

    @property
    def db(self):
        return self.words * self.lsb_db

    @classmethod
    def zeros(cls, n, lsb_db=0.5):
        return cls(np.zeros(n, dtype=np.int64), lsb_db)


def moving_average(codes, window_bins=8):
    """Trailing ``window_bins`` average, zero pre-filled, floored.

    ``out[i] = floor(sum(codes[i-w+1 .. i]) / w)``; samples before bin 0 count
    as zero, like a shift register coming out of reset.
    """
    c = as_codes(codes)
    w = check_int_range(window_bins, "diagc.window_bins", lo=1)
    acc = np.concatenate(([0], np.cumsum(c, dtype=np.int64)))
    i = np.arange(len(c))
    lo = np.maximum(0, i - w + 1)
    return (acc[i + 1] - acc[lo]) // w


def update_dwell_memory(memory, averaged, prt_index):
    """Write PRT 1's averages, or fold PRT 2's in and freeze."""
    avg = as_codes(averaged, "averaged")
    if prt_index == 1:
        if memory.phase != "empty":
            raise ContractViolation(f"PRT 1 write into {memory.phase} memory")
        return DwellMemory(avg.copy(), "after_prt1")
    if prt_index == 2:
        if memory.phase != "after_prt1":
            raise ContractViolation(f"PRT 2 update of {memory.phase} memory")
        if len(avg) != len(memory.stored):
            raise ContractViolation("averaged length differs from stored length")
        return DwellMemory((memory.stored + avg) // 2, "frozen")
    raise ContractViolation(f"dwell memory is read-only at PRT {prt_index}")


@lru_cache(maxsize=32)
def _word_table(target_level, lsb_db, max_word, max_code):
    codes = np.arange(max_code + 1, dtype=float)[:, None]
    w = np.arange(max_word + 1)[None, :]
    ok = codes * 10 ** (-w * lsb_db / 20) <= target_level
    # first word meeting the target; clamp where none does
    table = np.where(ok.any(axis=1), ok.argmax(axis=1), max_word).astype(np.int64)
    table.setflags(write=False)
    return table


def word_table(config, max_code=ADC_MAX_CODE):
    """Code -> attenuation word lookup for the threshold logic."""
    if config.target_level is None:
        raise ConfigurationError("target_level is unresolved", key="diagc.target_level")
    return _word_table(int(config.target_level), float(config.lsb_db), int(config.max_word),
                       int(max_code))


def threshold_logic(stored, config):
    """Smallest word that brings each stored value down to the target level.

    ``word = 0`` at or below ``target_level``; above it the word is
    ``ceil(20*log10(stored/T) / lsb_db)`` clamped to ``max_word``.
    """
    s = as_codes(stored, "stored")
    table = word_table(config, max_code=max(ADC_MAX_CODE, int(s.max(initial=0))))
    return table[s]


def slew_limit(words, config):
    """Cap word-to-word steps at ``step_words`` without raising any word.

    A forward pass limits rises, a backward pass limits falls. The result is
    the largest compliant schedule that never exceeds the input.
    """
    out = as_codes(words, "words").copy()
    step = config.step_words
    for i in range(1, len(out)):
        if out[i] > out[i - 1] + step:
            out[i] = out[i - 1] + step
    for i in range(len(out) - 2, -1, -1):
        if out[i] > out[i + 1] + step:
            out[i] = out[i + 1] + step
    return out


def latency_correct(words, latency_bins):
    """Advance a schedule by ``latency_bins``; the tail holds its last word."""
    w = as_codes(words, "words")
    n = len(w)
    if latency_bins < 0 or latency_bins >= max(n, 1):
        raise ConfigurationError(f"latency_bins {latency_bins} must be in 0..{n - 1}",
                                 key="diagc.latency_bins")
    idx = np.minimum(np.arange(n) + latency_bins, n - 1)
    return w[idx]


def schedule_from_memory(stored, config):
    words = threshold_logic(stored, config)
    words = slew_limit(words, config)
    words = latency_correct(words, config.latency_bins + config.lead_bins)
    return AttenSchedule(words, config.lsb_db)


@dataclass
class CardTrace:
    prt_index: int
    adc_code: np.ndarray
    moving_avg: np.ndarray
    stored: np.ndarray
    words: np.ndarray
    lsb_db: float

    @property
    def db(self):
        return self.words * self.lsb_db


class DiagcCard:
    """PRT-sequential state machine for one dwell at a time.

    Per PRT call :meth:`schedule` before the PRT is received, then
    :meth:`observe` with the sense codes it produced.
    """

    def __init__(self, config, range_bins):
        if config.target_level is None:
            raise ConfigurationError("target_level is unresolved", key="diagc.target_level")
        self.config = config.validate(range_bins)
        self.range_bins = range_bins
        self.dwell_index = 0
        self.reset()

    def reset(self, dwell_index=None):
        if dwell_index is not None:
            self.dwell_index = dwell_index
        self.memory = DwellMemory()
        self.timing = TimingSignals(self.dwell_index, 0)
        self._frozen_schedule = None
        self.traces: List[CardTrace] = []

    def schedule(self, prt_index):
        expected = self.timing.prt_index + 1
        if prt_index != expected:
            raise ContractViolation(f"PRT {prt_index} presented, expected PRT {expected}")
        self.timing = TimingSignals(self.dwell_index, prt_index)
        if prt_index <= 2 or not self.config.enabled:
            return AttenSchedule.zeros(self.range_bins, self.config.lsb_db)
        if self._frozen_schedule is None:
            self._frozen_schedule = schedule_from_memory(self.memory.stored, self.config)
        return self._frozen_schedule

    def observe(self, prt_index, codes):
        if prt_index != self.timing.prt_index:
            raise ContractViolation(f"codes for PRT {prt_index} while PRT "
                                    f"{self.timing.prt_index} is current")
        codes = as_codes(codes)
        avg = moving_average(codes, self.config.window_bins)
        if prt_index <= 2:
            self.memory = update_dwell_memory(self.memory, avg, prt_index)
            words = np.zeros(self.range_bins, dtype=np.int64)
        else:
            words = self.schedule_words()
        self.traces.append(CardTrace(prt_index, codes, avg, self.memory.stored.copy(),
                                     words, self.config.lsb_db))

    def schedule_words(self):
        if not self.config.enabled or self.timing.prt_index <= 2:
            return np.zeros(self.range_bins, dtype=np.int64)
        return self._frozen_schedule.words


def process_dwell(sense_codes_per_prt, config):
    """Attenuation schedule for each PRT of a dwell, given its sense codes.

    The schedule of PRT ``k`` only depends on the codes of PRTs 1 and 2, so
    the codes of later PRTs are accepted but do not change the result.
    """
    rows = list(sense_codes_per_prt)
    if len(rows) < 3:
        raise ContractViolation(f"a dwell needs at least 3 PRTs, got {len(rows)}")
    card = DiagcCard(config, len(rows[0]))
    out = []
    for k, codes in enumerate(rows, start=1):
        out.append(card.schedule(k))
        card.observe(k, codes)
    return out
