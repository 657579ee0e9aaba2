"""Back end: pulse compression, delay-line MTI and fixed-threshold detection."""
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from ._validation import as_complex_1d
from .exceptions import ConfigurationError, ContractViolation

# binomial delay-line canceller weights, oldest PRT first
CANCELLER_WEIGHTS = {2: (-1.0, 1.0), 3: (1.0, -2.0, 1.0)}


@dataclass(frozen=True)
class CompressedPrt:
    prt_index: int
    samples: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class DetectionReport:
    dwell_index: int
    detections: Tuple[Tuple[int, float], ...] = ()

    @property
    def bins(self):
        return [b for b, _ in self.detections]

    def __len__(self):
        return len(self.detections)


def pulse_compress(samples, reference, prt_index=0):
    """Correlate one PRT with the matched reference.

    Output is aligned so that an echo whose leading edge is at bin ``k``
    peaks at bin ``k``; the length equals the input length.
    """
    x = as_complex_1d(getattr(samples, "samples", samples))
    h = as_complex_1d(getattr(reference, "samples", reference), "reference")
    if len(h) > len(x):
        raise ConfigurationError(f"reference ({len(h)}) longer than the PRT ({len(x)})",
                                 key="waveform")
    full = np.convolve(x, h)
    start = len(h) - 1
    return CompressedPrt(prt_index, full[start:start + len(x)])


def mti_cancel(prts, order=2, skip_first=0):
    """Delay-line canceller across PRTs.

    ``order=2`` gives ``x[k+1] - x[k]``, ``order=3`` gives
    ``x[k+2] - 2 x[k+1] + x[k]``. The first ``skip_first`` PRTs are dropped
    before cancelling.
    """
    if order not in CANCELLER_WEIGHTS:
        raise ConfigurationError(f"canceller order must be 2 or 3, got {order}",
                                 key="sigproc.order")
    if skip_first < 0:
        raise ConfigurationError("skip_first must be non-negative", key="sigproc.skip_first")
    rows = [np.asarray(getattr(p, "samples", p), dtype=np.complex128) for p in prts][skip_first:]
    if len(rows) < order:
        raise ContractViolation(
            f"{len(rows)} PRTs left after skipping {skip_first}; order {order} needs {order}")
    w = CANCELLER_WEIGHTS[order]
    out = []
    for k in range(len(rows) - order + 1):
        y = np.zeros_like(rows[k])
        for j, wj in enumerate(w):
            y = y + wj * rows[k + j]
        out.append(y)
    return out


def integrate(residuals):
    """Non-coherent dwell integration: per-bin sum of residual magnitudes."""
    return np.sum(np.abs(np.asarray(residuals)), axis=0)


def detect(residuals, threshold, dwell_index=0):
    """Report every bin whose integrated residual magnitude exceeds ``threshold``."""
    if len(residuals) == 0:
        return DetectionReport(dwell_index)
    s = integrate(residuals)
    bins = np.flatnonzero(s > threshold)
    return DetectionReport(dwell_index, tuple((int(b), float(s[b])) for b in bins))


def runs(bins: Sequence[int]) -> List[List[int]]:
    """Split sorted bin indices into runs of consecutive bins."""
    out = []
    for b in bins:
        if out and b == out[-1][-1] + 1:
            out[-1].append(b)
        else:
            out.append([b])
    return out
