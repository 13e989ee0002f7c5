import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqgen.mps import (
    MPSState,
    StateVector,
    bond_dimensions,
    fidelity,
    mps_evaluate,
    random_mps,
    state_to_mps,
)

from conftest import dense_mps_oracle, dense_schmidt_ranks, ghz_state, random_state, w_state


def ghz_mps(n):
    site = np.stack([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    bound = np.ones(2) / np.sqrt(2)
    return MPSState((site,) * n, phi_I=bound, phi_F=bound)


def test_state_vector_validation():
    with pytest.raises(ValueError, match="not normalized"):
        StateVector([1.0, 1.0])
    with pytest.raises(ValueError, match="2\\*\\*n"):
        StateVector([1.0, 0.0, 0.0])
    assert StateVector([1.0, 1.0], normalized=False).normalize().norm == pytest.approx(1)
    assert StateVector.basis([0, 1, 0]).amps[2] == 1


def test_evaluate_single_site():
    m = MPSState((np.array([[[1.0]], [[0.0]]]),), phi_I=[1.0], phi_F=[1.0])
    np.testing.assert_array_equal(mps_evaluate(m).amps, [1, 0])


def test_evaluate_ghz_by_hand_n2():
    # <phi_F| V^{i2} V^{i1} |phi_I> is 1/2 when i1 = i2, else 0
    psi = mps_evaluate(ghz_mps(2))
    np.testing.assert_allclose(psi.amps, [0.5, 0, 0, 0.5], atol=1e-15)


@pytest.mark.parametrize("n", range(1, 7))
def test_evaluate_ghz(n):
    psi = mps_evaluate(ghz_mps(n)).normalize()
    assert fidelity(psi, ghz_state(n)) == pytest.approx(1, abs=1e-14)


def test_evaluate_matches_per_amplitude_oracle():
    m = random_mps(5, 3, seed=11)
    assert np.abs(mps_evaluate(m).amps - dense_mps_oracle(m)).max() < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(1, 4), st.integers(0, 10**6))
def test_evaluate_oracle_property(n, D, seed):
    m = random_mps(n, D, seed)
    assert np.abs(mps_evaluate(m).amps - dense_mps_oracle(m)).max() < 1e-12


def test_dimension_mismatch():
    site = np.zeros((2, 2, 3))
    with pytest.raises(ValueError, match="dimension mismatch"):
        MPSState((site,), phi_I=np.ones(2), phi_F=np.ones(2))
    with pytest.raises(ValueError, match="dimension mismatch"):
        MPSState((site,), phi_I=np.ones(3), phi_F=np.ones(3))


def test_state_to_mps_product_state():
    m = state_to_mps(StateVector.basis([0, 1, 0]))
    assert bond_dimensions(m) == [1, 1, 1, 1]
    assert fidelity(mps_evaluate(m), StateVector.basis([0, 1, 0])) == pytest.approx(1)


@pytest.mark.parametrize("n", [2, 3, 5, 8, 10])
@pytest.mark.parametrize("make", [ghz_state, w_state])
def test_state_to_mps_structured(n, make):
    psi = make(n)
    dims = bond_dimensions(state_to_mps(psi))
    assert dims == dense_schmidt_ranks(psi)
    assert dims == [1] + [2] * (n - 1) + [1]


def test_state_to_mps_rejects_unnormalized():
    with pytest.raises(ValueError):
        StateVector([3.0, 4.0])
    m = state_to_mps(StateVector([3.0, 4.0], normalized=False))
    np.testing.assert_allclose(mps_evaluate(m).amps, [3, 4], atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.integers(0, 10**6))
def test_round_trip_and_ranks(n, seed):
    psi = random_state(np.random.default_rng(seed), n)
    m = state_to_mps(psi)
    assert fidelity(mps_evaluate(m), psi) >= 1 - 1e-10
    dims = bond_dimensions(m)
    assert dims == dense_schmidt_ranks(psi)
    assert all(d <= min(2**k, 2 ** (n - k)) for k, d in enumerate(dims))


def test_random_mps_seeding():
    a, b, c = random_mps(4, 3, 5), random_mps(4, 3, 5), random_mps(4, 3, 6)
    assert all(np.array_equal(x, y) for x, y in zip(a.tensors, b.tensors))
    assert not np.allclose(a.tensors[0], c.tensors[0])
    assert bond_dimensions(a) == [3, 3, 3, 3, 3]
    psi = mps_evaluate(a).normalize()
    assert psi.norm == pytest.approx(1)


def test_fidelity(rng):
    psi = random_state(rng, 3)
    assert fidelity(psi, psi) == pytest.approx(1)
    assert fidelity(StateVector([1, 0]), StateVector([0, 1])) == 0
    theta = rng.uniform(0, 2 * np.pi)
    assert fidelity(psi, StateVector(np.exp(1j * theta) * psi.amps)) == pytest.approx(1)
    with pytest.raises(ValueError, match="size mismatch"):
        fidelity(psi, random_state(rng, 2))
