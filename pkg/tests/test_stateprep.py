import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isosynth.bounds import stateprep_count
from isosynth.linalg import random_state
from isosynth.stateprep import prepare_state, schmidt_split

seeds = st.integers(0, 2**32 - 1)


@given(seeds, st.integers(1, 7))
@settings(max_examples=30, deadline=None)
def test_prepare_random_state(seed, n):
    psi = random_state(n, seed)
    c, report = prepare_state(psi)
    assert report.cnot_count == stateprep_count(n)
    out = c.apply(np.eye(2**n, 1, dtype=complex))[:, 0]
    assert abs(abs(np.vdot(out, psi)) - 1) < 1e-9


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_schmidt_split(n):
    psi = random_state(n, n)
    phi, u_a, iso_b = schmidt_split(psi, n)
    n_a = n // 2
    assert np.all(np.diff(phi.real) <= 1e-12)
    # psi = sum_i phi_i |u_i>_A |b_i>_B with A on the high qubits
    rebuilt = sum(phi[i] * np.kron(u_a[:, i], iso_b[:, i]) for i in range(2**n_a))
    assert np.linalg.norm(rebuilt - psi) < 1e-12


def test_basis_state_is_free():
    psi = np.zeros(16)
    psi[0] = 1
    _, report = prepare_state(psi)
    assert report.cnot_count == 0


def test_product_state_skips_entangler():
    a = random_state(2, 1)
    b = random_state(2, 2)
    _, report = prepare_state(np.kron(a, b))
    assert report.cnot_count == 2


def test_ghz():
    psi = np.zeros(8)
    psi[0] = psi[7] = 1 / np.sqrt(2)
    c, report = prepare_state(psi)
    assert report.residual < 1e-12
    assert report.cnot_count <= 3


def test_rejects_unnormalized():
    with pytest.raises(ValueError):
        prepare_state([1, 1])
