import math

import numpy as np
import pytest

import causalnm as cn


def test_identity_pdm_spectrum():
    pdm = cn.pdm_two_point(cn.QubitState.maximally_mixed(), cn.KrausChannel.identity())
    np.testing.assert_allclose(pdm.eigenvalues, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)
    assert cn.causality_F(pdm) == pytest.approx(1.0)
    assert cn.is_causal(pdm)
    assert pdm.matrix.shape == (4, 4)


def test_amplitude_damping_matches_closed_form():
    ground = cn.QubitState.pure(math.pi / 2)
    for r in (0.0, 0.19, 0.7):
        pdm = cn.pdm_two_point(ground, cn.amplitude_damping(r))
        s = math.sqrt(1 - r)
        np.testing.assert_allclose(pdm.eigenvalues, [-s / 2, 0.0, s / 2, 1.0], atol=1e-12)
        assert cn.causality_F(pdm) == pytest.approx(math.log2(1 + s))


def test_routes_agree_for_custom_channel():
    rng = np.random.default_rng(3)
    z = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
    q, _ = np.linalg.qr(z)
    channel = cn.KrausChannel([q[:2], q[2:]])
    rho = cn.QubitState(np.array([[0.7, 0.1 - 0.2j], [0.1 + 0.2j, 0.3]]))
    a = cn.pdm_two_point(rho, channel).matrix
    b = cn.pdm_from_correlators(rho, channel).matrix
    np.testing.assert_allclose(a, b, atol=1e-12)
    assert cn.choi_negativity(channel) == pytest.approx(
        cn.causality_F(cn.pdm_two_point(cn.QubitState.maximally_mixed(), channel)), abs=1e-10)


def test_invalid_inputs_raise():
    with pytest.raises(ValueError):
        cn.KrausChannel([0.5 * np.eye(2)])
    with pytest.raises(ValueError):
        cn.ADParams(-1.0, 1.0)
    with pytest.raises(ValueError):
        cn.QubitState(np.eye(2))


def test_measures_on_both_regimes():
    grid = cn.TimeGrid(0.0, 10.0, 1e-2)
    markov = cn.nm_measure(cn.ad_family(cn.ADParams(0.6, 3.0)), grid, n_theta=8, n_phi=2)
    nm = cn.nm_measure(cn.ad_family(cn.ADParams(3.0, 0.6)), grid, n_theta=8, n_phi=2)
    assert markov["M"] <= 1e-9
    assert nm["M"] > 0.01
    assert nm["argmax"][0] == pytest.approx(math.pi / 2, abs=1e-3)
    assert nm["hcla"] > 0
    assert cn.nm_measure(cn.gad_family(3.0), grid, n_theta=8, n_phi=1)["hcla"] is None


def test_curves_and_rates():
    params = cn.ADParams(3.0, 0.6)
    grid = cn.TimeGrid(0.0, 4.0, 1e-2)
    curve = cn.f_curve(cn.ad_family(params), cn.QubitState.pure(math.pi / 2), grid)
    g = np.array([cn.decoherence_G(params, t) for t in curve["t"]])
    np.testing.assert_allclose(curve["values"], np.log2(1 + np.abs(g)), atol=1e-12)
    root = 2 * (math.pi - math.atan(3.0)) / 1.8
    assert cn.decay_rate(params, root) is None
    assert cn.decay_rate(params, 1.0) > 0
    assert cn.intermediate_map_witness(cn.ad_family(params), 2.2, 0.1) < -1e-6
