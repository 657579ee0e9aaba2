import numpy as np
import pytest

from diagcsim.exceptions import ConfigurationError, ContractViolation

from diagcsim.sigproc import CompressedPrt, detect, integrate, mti_cancel, pulse_compress, runs
from diagcsim.waveform import generate, matched_reference, phase_code_spec


def brute_correlate(x, p):
    # y[n] = sum_k x[n + k] conj(p[k]); peak lands on the echo's first bin
    return np.array([sum(x[n + k] * np.conj(p[k]) for k in range(len(p)) if n + k < len(x))
                     for n in range(len(x))])


def test_compression_matches_brute_force():
    rng = np.random.default_rng(5)
    p = generate(phase_code_spec(samples_per_chip=2))
    x = rng.normal(size=80) + 1j * rng.normal(size=80)
    got = pulse_compress(x, matched_reference(p)).samples
    assert np.allclose(got, brute_correlate(x, p.samples))


def test_compressed_peak_at_echo_start():
    p = generate(phase_code_spec())
    x = np.zeros(64, complex)
    x[20:33] = p.samples
    y = abs(pulse_compress(x, matched_reference(p)).samples)
    assert int(np.argmax(y)) == 20


def mk(rows):
    return [CompressedPrt(i, np.asarray(r, complex)) for i, r in enumerate(rows, 1)]


def test_mti_weights():
    rows = mk([[1, 0], [2, 0], [4, 1]])
    r2 = mti_cancel(rows, order=2)
    assert np.allclose(r2[0], [1, 0]) and np.allclose(r2[1], [2, 1])
    r3 = mti_cancel(rows, order=3)
    assert len(r3) == 1 and np.allclose(r3[0], [1, 1])


def test_mti_skip_first():
    rows = mk([[9], [9], [1], [1], [3]])
    r = mti_cancel(rows, order=2, skip_first=2)
    assert [complex(v[0]) for v in r] == [0, 2]


def test_mti_needs_enough_prts():
    with pytest.raises(ContractViolation):
        mti_cancel(mk([[1], [2]]), order=3)
    with pytest.raises(ConfigurationError):
        mti_cancel(mk([[1], [2]]), order=4)


def test_detect_threshold():
    res = [np.array([0.0, 3.0, 1.0]), np.array([0.0, -3j, 1.0])]
    assert list(integrate(res)) == [0.0, 6.0, 2.0]
    rep = detect(res, 5.0, dwell_index=4)
    assert rep.dwell_index == 4 and rep.bins == [1] and len(rep) == 1


def test_runs_groups_contiguous_bins():
    assert runs([3, 4, 5, 9, 11, 12]) == [[3, 4, 5], [9], [11, 12]]
    assert runs([]) == []
