import numpy as np
import pytest
from sklearn.base import clone

from spikeloc import (
    ProblemParams,
    Spike,
    SpikeMeasure,
    SpikeLocalizer,
    as_signal,
    derive_periodic,
    sample_periodic,
    sample_real,
)


def spike_measure(x=0.1, domain="periodic"):
    return SpikeMeasure(spikes=(Spike(x, 1.0),), domain=domain)


def test_fit_periodic_signal_object():
    sig = sample_periodic(spike_measure(0.1), 12)
    est = SpikeLocalizer(beta=0.5, omega=0.1, k_max=12).fit(sig)
    assert est.n_intervals_ == 1
    assert est.predict(0.1) is True
    assert est.predict(-0.4) is False


def test_fit_periodic_complex_array():
    sig = sample_periodic(spike_measure(0.1), 12)
    est = SpikeLocalizer(beta=0.5, omega=0.1, k_max=12).fit(sig.values)
    assert est.intervals_.contains_point(0.1)


def test_fit_periodic_re_im_matrix():
    sig = sample_periodic(spike_measure(-0.2), 8)
    X = np.column_stack([sig.values.real, sig.values.imag])
    est = SpikeLocalizer(beta=0.4, omega=0.0, k_max=8).fit(X)
    assert est.intervals_.contains_point(-0.2)


def test_fit_real_k_re_im_matrix():
    m = spike_measure(0.25, "real")
    sig = sample_real(m, 8.0, 1.0 / 256)
    X = np.column_stack([sig.k, sig.values.real, sig.values.imag])
    est = SpikeLocalizer(beta=0.5, omega=0.0, k_max=8.0, setting="real").fit(X)
    assert est.intervals_.contains_point(0.25)


def test_predict_vector_and_score_samples():
    sig = sample_periodic(spike_measure(0.1), 12)
    est = SpikeLocalizer(beta=0.5, omega=0.1, k_max=12).fit(sig)
    got = est.predict([0.1, 0.11, -0.3])
    assert got.tolist() == [True, True, False]
    dp = derive_periodic(ProblemParams(K=12, beta=0.5, omega=0.1))
    vals = est.score_samples([0.1, -0.3])
    assert vals[0] > dp.threshold > vals[1]
    assert est.threshold_ == dp.threshold


def test_sklearn_params_contract():
    est = SpikeLocalizer(beta=0.3, omega=0.05, k_max=9)
    params = est.get_params()
    assert params["beta"] == 0.3 and params["k_max"] == 9
    twin = clone(est)
    assert twin.get_params() == params
    est.set_params(beta=0.4)
    assert est.beta == 0.4


def test_unfitted_raises():
    with pytest.raises(RuntimeError, match="not fitted"):
        SpikeLocalizer().predict(0.0)


def test_input_validation():
    with pytest.raises(ValueError, match="expected 25"):
        SpikeLocalizer(k_max=12).fit(np.ones(7, complex))
    with pytest.raises(ValueError, match="non-finite"):
        SpikeLocalizer(k_max=2).fit(np.array([1, 1, np.nan, 1, 1], complex))
    with pytest.raises(ValueError, match="match setting"):
        as_signal(sample_real(spike_measure(0.0, "real"), 4.0, 0.125), "periodic", 4)
    with pytest.raises(ValueError, match="uniform"):
        bad = np.column_stack([np.array([0.0, 0.1, 0.5]), np.ones(3), np.zeros(3)])
        as_signal(bad, "real", 0.5)
    with pytest.raises(ValueError, match="cover"):
        k = np.linspace(-3.0, 3.0, 31)
        as_signal(np.column_stack([k, np.ones(31), np.zeros(31)]), "real", 4.0)


def test_invalid_problem_params_surface_at_fit():
    sig = sample_periodic(spike_measure(), 8)
    with pytest.raises(ValueError, match="omega"):
        SpikeLocalizer(beta=0.3, omega=0.4, k_max=8).fit(sig)


def test_fit_predict_shortcut():
    sig = sample_periodic(spike_measure(0.1), 12)
    got = SpikeLocalizer(beta=0.5, omega=0.1, k_max=12).fit_predict(sig, [0.1, 0.4])
    assert got.tolist() == [True, False]
