"""scikit-learn style wrappers around the DIAGC card and the MTI canceller.

``DiagcController`` learns the per-bin clutter estimate from the sense codes
of PRTs 1 and 2 (``fit``), then ``transform`` maps any subsequent PRT rows to
their attenuation (dB) schedule. Since the schedule is frozen for the dwell,
every output row is the same.
"""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .diagc import (ADC_MAX_CODE, DiagcConfig, DwellMemory, moving_average,
                    schedule_from_memory, update_dwell_memory)
from .sigproc import CANCELLER_WEIGHTS


class DiagcController(TransformerMixin, BaseEstimator):
    """Per-range-bin attenuation controller.

    Parameters mirror :class:`diagcsim.diagc.DiagcConfig`; ``target_level``
    is required here because no receiver is attached to resolve it.
    """

    def __init__(self, target_level=1298, window_bins=8, lsb_db=0.5, max_word=32,
                 slew_db_per_bin=2.0, latency_bins=0, lead_bins=0):
        self.target_level = target_level
        self.window_bins = window_bins
        self.lsb_db = lsb_db
        self.max_word = max_word
        self.slew_db_per_bin = slew_db_per_bin
        self.latency_bins = latency_bins
        self.lead_bins = lead_bins

    def _config(self, n_bins):
        return DiagcConfig(window_bins=self.window_bins, target_level=self.target_level,
                           lsb_db=self.lsb_db, max_word=self.max_word,
                           slew_db_per_bin=self.slew_db_per_bin,
                           latency_bins=self.latency_bins,
                           lead_bins=self.lead_bins).validate(n_bins)

    def fit(self, X, y=None):
        """X: ADC sense codes of PRTs 1 and 2, shape (2, n_bins)."""
        X = check_array(X, dtype=np.int64)
        if X.shape[0] != 2:
            raise ValueError(f"fit expects the two estimation PRTs, got {X.shape[0]} rows")
        if X.min() < 0 or X.max() > ADC_MAX_CODE:
            raise ValueError("sense codes must lie in [0, 16383]")
        cfg = self._config(X.shape[1])
        mem = DwellMemory()
        for k, row in enumerate(X, start=1):
            mem = update_dwell_memory(mem, moving_average(row, cfg.window_bins), k)
        self.stored_ = mem.stored
        self.words_ = schedule_from_memory(mem.stored, cfg).words
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        """Attenuation in dB for each row (PRT 3 onward) of ``X``."""
        check_is_fitted(self, "words_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} bins, got {X.shape[1]}")
        return np.tile(self.words_ * self.lsb_db, (X.shape[0], 1))


class MtiCanceller(TransformerMixin, BaseEstimator):
    """Binomial delay-line canceller over the rows (PRTs) of a complex matrix."""

    def __init__(self, order=2):
        self.order = order

    def fit(self, X, y=None):
        if self.order not in CANCELLER_WEIGHTS:
            raise ValueError(f"order must be 2 or 3, got {self.order}")
        self.weights_ = np.asarray(CANCELLER_WEIGHTS[self.order])
        self.n_features_in_ = np.shape(X)[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "weights_")
        X = np.asarray(X)
        if X.ndim != 2 or X.shape[0] < self.order:
            raise ValueError(f"need a 2-D array with at least {self.order} rows")
        m = X.shape[0] - self.order + 1
        return sum(w * X[j:j + m] for j, w in enumerate(self.weights_))
