"""Small input-checking helpers shared by the modules."""
import numpy as np

from .exceptions import ConfigurationError, ContractViolation


def check_positive(value, key):
    if not np.isfinite(value) or value <= 0:
        raise ConfigurationError(f"must be positive, got {value!r}", key=key)
    return value


def check_int_range(value, key, lo=None, hi=None):
    if int(value) != value:
        raise ConfigurationError(f"must be an integer, got {value!r}", key=key)
    value = int(value)
    if lo is not None and value < lo:
        raise ConfigurationError(f"must be >= {lo}, got {value}", key=key)
    if hi is not None and value > hi:
        raise ConfigurationError(f"must be <= {hi}, got {value}", key=key)
    return value


def as_complex_1d(samples, name="samples"):
    arr = np.asarray(samples)
    if arr.ndim != 1:
        raise ContractViolation(f"{name} must be one-dimensional, got shape {arr.shape}")
    return arr.astype(np.complex128, copy=False)


def as_codes(codes, name="codes"):
    """Return ``codes`` as a 1-D int64 array, refusing non-integral input."""
    arr = np.asarray(codes)
    if arr.ndim != 1:
        raise ContractViolation(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.dtype.kind not in "iu":
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ContractViolation(f"{name} must hold integers")
    return arr.astype(np.int64)


def check_length(arr, n, name):
    if len(arr) != n:
        raise ContractViolation(f"{name} has length {len(arr)}, expected {n}")
