from math import comb

import numpy as np
import pytest

from errors import NumericalGuardError
from fockchannel import (FockDensityMatrix, PureState, beamsplitter_expansion, binomial_row, coherent_state,
                         fidelity_pure_mixed, kraus_operators, loss_channel, truncation_dim)


def test_identity_channel():
    psi = PureState.normalized([1., 0.5j, -0.3, 0.2])
    np.testing.assert_allclose(loss_channel(psi, 1.).entries, psi.density().entries, atol=1e-15)


@pytest.mark.parametrize("eta", [0., 0.3, 0.5, 1.])
def test_single_photon_loses_to_vacuum(eta):
    rho = loss_channel(PureState.number(1), eta)
    np.testing.assert_allclose(rho.entries, np.diag([1 - eta, eta]), atol=1e-15)
    assert fidelity_pure_mixed(PureState.number(1), rho) == pytest.approx(eta)


@pytest.mark.parametrize("eta", [0., 0.4, 1.])
def test_vacuum_is_invariant(eta):
    vacuum = PureState.number(0, dim=5)
    assert fidelity_pure_mixed(vacuum, loss_channel(vacuum, eta)) == pytest.approx(1.)


@pytest.mark.parametrize("alpha", [0.5, 1.3j, 2. * np.exp(0.7j)])
@pytest.mark.parametrize("eta", [0.2, 0.81])
def test_coherent_state_is_attenuated(alpha, eta):
    rho = loss_channel(coherent_state(alpha, 30), eta)
    assert rho.mean_amplitude() == pytest.approx(np.sqrt(eta) * alpha, abs=1e-8)
    assert rho.photon_number() == pytest.approx(eta * abs(alpha) ** 2, abs=1e-7)
    attenuated = coherent_state(np.sqrt(eta) * alpha, 30)
    assert fidelity_pure_mixed(attenuated, rho) == pytest.approx(1., abs=1e-8)


def test_kraus_and_beamsplitter_constructions_agree(random_state, rng):
    for dim in (2, 5, 9, 12):
        psi = random_state(dim)
        eta = rng.uniform()
        np.testing.assert_allclose(loss_channel(psi, eta).entries, beamsplitter_expansion(psi, eta).entries,
                                   atol=1e-12)


def test_channel_preserves_trace(random_state, rng):
    for dim in range(1, 13):
        rho = loss_channel(random_state(dim), rng.uniform())
        assert rho.trace() == pytest.approx(1., abs=1e-10)
        rho.validate()


def test_kraus_operators_are_complete():
    kraus = kraus_operators(8, 0.37)
    total = np.einsum('kmn,kml->nl', kraus, kraus)
    np.testing.assert_allclose(total, np.eye(8), atol=1e-12)


def test_losses_compose(random_state):
    psi = random_state(8)
    twice = loss_channel(loss_channel(psi, 0.7), 0.6)
    np.testing.assert_allclose(twice.entries, loss_channel(psi, 0.42).entries, atol=1e-10)


def test_mixed_and_pure_paths_agree(random_state):
    psi = random_state(6)
    np.testing.assert_allclose(loss_channel(psi.density(), 0.55).entries, loss_channel(psi, 0.55).entries,
                               atol=1e-13)


def test_fidelity_grows_with_transmission():
    etas = np.linspace(0., 1., 21)
    for seed in range(100):
        rng = np.random.default_rng(seed)
        psi = PureState.normalized(rng.standard_normal(4) + 1j * rng.standard_normal(4))
        fidelities = [fidelity_pure_mixed(psi, loss_channel(psi, eta)) for eta in etas]
        assert np.all(np.diff(fidelities) >= -1e-12)


@pytest.mark.parametrize("n", [5, 20, 21, 40, 64])
def test_binomials(n):
    exact = np.array([comb(n, k) for k in range(n + 1)], dtype=float)
    np.testing.assert_allclose(binomial_row(n), exact, rtol=1e-11)


def test_truncation_keeps_coherent_norm():
    alpha = 2.5
    dim = truncation_dim(alpha)
    assert dim == int(np.ceil(alpha ** 2 + 8 * alpha + 10))
    n = np.arange(dim)
    log_weights = -alpha ** 2 + 2 * n * np.log(alpha) - np.cumsum(np.log(np.maximum(n, 1)))
    assert 1 - np.exp(log_weights).sum() < 1e-8


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        FockDensityMatrix(np.ones((2, 3)))
    with pytest.raises(ValueError):
        FockDensityMatrix(np.diag([0.5, 0.6])).validate()
    with pytest.raises(ValueError):
        FockDensityMatrix(np.diag([1.2, -0.2])).validate()
    with pytest.raises(ValueError):
        FockDensityMatrix(np.array([[0.5, 0.1], [0.2, 0.5]])).validate()


def test_state_must_be_normalized():
    with pytest.raises(ValueError):
        PureState([1., 1.])


@pytest.mark.parametrize("eta", [-0.1, 1.1])
def test_transmission_out_of_range(eta):
    with pytest.raises(ValueError):
        loss_channel(PureState.number(1), eta)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        fidelity_pure_mixed(PureState.number(1), loss_channel(PureState.number(2), 0.5))


def test_non_hermitian_overlap_trips_guard():
    rho = FockDensityMatrix(np.array([[0.5, 0.5j], [0.5j, 0.5]]))
    with pytest.raises(NumericalGuardError):
        fidelity_pure_mixed(PureState.normalized([1., 1.]), rho)
