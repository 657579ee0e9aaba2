import numpy as np
import pytest

from diagcsim.exceptions import ScenarioError
from diagcsim.scene import (Scatterer, Scenario, inject_bite, synthesize_dwell, synthesize_prt,
                            tapered_zone)
from diagcsim.waveform import generate, phase_code_spec

PULSE = generate(phase_code_spec())


def scen(scatterers=(), **kw):
    base = dict(prf_hz=1000.0, prts_per_dwell=4, range_bins=128)
    base.update(kw)
    return Scenario(scatterers=tuple(scatterers), **base)


def test_point_target_echo_and_doppler():
    sc = scen([Scatterer(10, 2.0, doppler_hz=250.0)])
    d = synthesize_dwell(sc, PULSE)
    assert np.allclose(d[0].samples[10:23], 2.0 * PULSE.samples)
    assert np.allclose(d[1].samples[10:23], 2.0j * PULSE.samples)
    assert np.all(d[0].samples[:10] == 0) and np.all(d[0].samples[23:] == 0)


def test_extended_clutter_is_coherent_sum():
    sc = scen([Scatterer(5, 1.0, extent_bins=3)])
    x = synthesize_prt(sc, PULSE, 1).samples
    ref = sum(np.pad(PULSE.samples, (5 + k, 128 - 18 - k)) for k in range(3))
    assert np.allclose(x, ref)


def test_out_of_beam_scatterer_is_gated():
    sc = scen([Scatterer(10, 1.0, azimuth_deg=5.0)])
    assert np.all(synthesize_prt(sc, PULSE, 1).samples == 0)


def test_noise_is_seeded_per_prt():
    sc = scen(noise_rms=0.1, rng_seed=7)
    a = synthesize_prt(sc, PULSE, 2).samples
    assert np.array_equal(a, synthesize_prt(sc, PULSE, 2).samples)
    assert not np.array_equal(a, synthesize_prt(sc, PULSE, 3).samples)
    big = synthesize_prt(scen(noise_rms=0.1, range_bins=20000), PULSE, 1).samples
    assert np.sqrt(np.mean(abs(big) ** 2)) == pytest.approx(0.1, rel=0.03)


def test_echo_past_window_is_rejected():
    with pytest.raises(ScenarioError) as e:
        synthesize_prt(scen([Scatterer(120, 1.0)]), PULSE, 1)
    assert e.value.key == "scatterer[0].range_bin"


def test_bite_injection():
    sc = inject_bite(scen(), 40, -6.0)
    assert sc.scatterers[-1].amplitude == pytest.approx(10 ** (-0.3))
    with pytest.raises(ScenarioError):
        inject_bite(scen(), 500, 0.0)


def test_tapered_zone_profile():
    runs = tapered_zone(10, 20, 4, 1.0)
    prof = np.zeros(40)
    for s in runs:
        prof[s.range_bin:s.range_bin + s.extent_bins] += s.amplitude
    assert np.allclose(prof[10:14], [0.25, 0.5, 0.75, 1.0])
    assert np.allclose(prof[14:26], 1.0)
    assert prof[9] == 0
    assert np.allclose(prof[26:31], [1.0, 0.75, 0.5, 0.25, 0.0])
    with pytest.raises(ScenarioError):
        tapered_zone(0, 8, 4, 1.0)
