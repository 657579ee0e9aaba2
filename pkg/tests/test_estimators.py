import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from diagcsim.diagc import DiagcConfig, process_dwell
from diagcsim.estimators import DiagcController, MtiCanceller


def test_controller_matches_card():
    rng = np.random.default_rng(1)
    codes = rng.integers(0, 16384, size=(2, 96))
    est = DiagcController(target_level=1298, lead_bins=4).fit(codes)
    out = est.transform(np.zeros((3, 96)))
    card = process_dwell(list(codes) + [np.zeros(96, int)], DiagcConfig(target_level=1298,
                                                                        lead_bins=4))
    assert out.shape == (3, 96)
    assert np.array_equal(out[0], card[2].db)


def test_controller_params_and_clone():
    est = DiagcController(max_word=20)
    assert est.get_params()["max_word"] == 20
    c = clone(est.set_params(lsb_db=1.0))
    assert c.lsb_db == 1.0 and not hasattr(c, "words_")


def test_controller_input_checks():
    with pytest.raises(NotFittedError):
        DiagcController().transform(np.zeros((1, 4)))
    with pytest.raises(ValueError):
        DiagcController().fit(np.zeros((3, 16)))
    with pytest.raises(ValueError):
        DiagcController().fit(np.full((2, 16), 20000))
    est = DiagcController().fit(np.zeros((2, 16)))
    with pytest.raises(ValueError):
        est.transform(np.zeros((1, 8)))


def test_canceller_null_and_weights():
    X = np.tile(np.exp(1j * np.arange(8.0)), (5, 1))
    assert not MtiCanceller(3).fit_transform(X).any()
    Y = np.arange(4.0)[:, None] ** 2 * np.ones((1, 2))
    assert np.allclose(MtiCanceller(3).fit_transform(Y), 2.0)
    with pytest.raises(ValueError):
        MtiCanceller(5).fit(Y)
