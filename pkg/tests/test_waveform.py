import numpy as np
import pytest

from diagcsim.exceptions import ConfigurationError
from diagcsim.metrics import peak_sidelobe, pulse_width
from diagcsim.waveform import (BARKER_13, PulseSpec, generate, matched_reference,
                               phase_code_spec)


def brute_autocorr(x):
    n = len(x)
    return np.array([sum(x[i] * np.conj(x[i - lag]) for i in range(n) if 0 <= i - lag < n)
                     for lag in range(-(n - 1), n)])


def test_barker13_autocorrelation_matches_brute_force():
    p = generate(phase_code_spec())
    ref = matched_reference(p)
    fast = np.convolve(p.samples, ref.samples)
    assert np.allclose(fast, brute_autocorr(p.samples))
    assert abs(fast).max() == pytest.approx(13.0)
    # every sidelobe of a Barker code has unit magnitude
    side = np.delete(abs(fast), 12)
    assert np.all(side <= 1.0 + 1e-12)


def test_barker13_psl_value():
    p = generate(phase_code_spec())
    mags = abs(np.convolve(p.samples, matched_reference(p).samples))
    assert peak_sidelobe(mags) == pytest.approx(-22.28, abs=0.05)
    assert pulse_width(mags) >= 1.0


def test_samples_per_chip_repeats_chips():
    p = generate(phase_code_spec(samples_per_chip=3))
    assert len(p) == 39
    assert np.array_equal(p.samples.real[::3], np.asarray(BARKER_13, float))
    assert p.energy == pytest.approx(39.0)


def test_lfm_zero_bandwidth_is_a_plain_tone_burst():
    p = generate(PulseSpec(kind="lfm", duration=10e-6, sample_rate=1e6, bandwidth=0.0))
    assert len(p) == 10
    assert np.allclose(p.samples, 1.0)


def test_lfm_quadratic_phase():
    T, fs, B = 20e-6, 4e6, 1e6
    p = generate(PulseSpec(kind="lfm", duration=T, sample_rate=fs, bandwidth=B))
    t = np.arange(80) / fs
    assert np.allclose(p.samples, np.exp(1j * np.pi * B / T * (t - T / 2) ** 2))


@pytest.mark.parametrize("spec", [
    PulseSpec(kind="lfm", duration=0.0, sample_rate=1e6, bandwidth=1e5),
    PulseSpec(kind="lfm", duration=1e-5, sample_rate=-1.0, bandwidth=1e5),
    PulseSpec(kind="chirp", duration=1e-5, sample_rate=1e6),
])
def test_invalid_pulse_specs_raise(spec):
    with pytest.raises(ConfigurationError):
        spec.validate()
