import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isosynth.linalg import (
    Isometry,
    IsometryError,
    apply_1q,
    apply_cnot,
    complete_to_unitary,
    embed,
    haar_unitary,
    is_unitary,
    phase_aligned_distance,
    random_isometry,
    rotate_to_basis,
    zyz_decompose,
    zyz_matrix,
)

seeds = st.integers(0, 2**32 - 1)


def test_isometry_accepts_state_vector():
    v = Isometry([1, 0, 0, 0])
    assert (v.m, v.n) == (0, 2)


@pytest.mark.parametrize(
    "mat",
    [np.ones((3, 1)), np.ones((4, 4)), np.eye(2, 4), np.array([[np.nan], [0]])],
)
def test_isometry_rejects_bad_input(mat):
    with pytest.raises(IsometryError):
        Isometry(mat)


def test_isometry_declared_size_mismatch():
    with pytest.raises(IsometryError):
        Isometry(np.eye(4, 2), m=1, n=3)


def test_isometry_matrix_is_read_only():
    v = random_isometry(1, 2, 0)
    with pytest.raises(ValueError):
        v.matrix[0, 0] = 1


@given(seeds, st.integers(1, 4))
@settings(max_examples=30, deadline=None)
def test_haar_unitary_is_unitary(seed, n):
    assert is_unitary(haar_unitary(2**n, np.random.default_rng(seed)))


def test_random_isometry_seeded():
    a = random_isometry(1, 3, 5).matrix
    b = random_isometry(1, 3, 5).matrix
    assert np.array_equal(a, b)


def test_phase_aligned_distance_ignores_global_phase():
    a = np.array([1, 1j]) / np.sqrt(2)
    assert phase_aligned_distance(a, np.exp(0.7j) * a) < 1e-15
    assert phase_aligned_distance(a, a[::-1]) > 0.1


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_zyz_roundtrip(seed):
    u = haar_unitary(2, np.random.default_rng(seed))
    alpha, beta, gamma, delta = zyz_decompose(u)
    assert 0 <= gamma <= np.pi + 1e-12
    assert np.linalg.norm(zyz_matrix(alpha, beta, gamma, delta) - u) < 1e-10


@pytest.mark.parametrize("u", [np.eye(2), np.array([[0, 1], [1, 0]]), np.diag([1, 1j])])
def test_zyz_degenerate(u):
    assert np.linalg.norm(zyz_matrix(*zyz_decompose(u)) - u) < 1e-12


@given(seeds, st.integers(0, 1))
@settings(max_examples=50, deadline=None)
def test_rotate_to_basis(seed, b):
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    u, r = rotate_to_basis(psi, b)
    assert abs(np.linalg.det(u) - 1) < 1e-12
    target = np.zeros(2)
    target[b] = r
    assert np.linalg.norm(u @ psi - target) < 1e-12


def test_rotate_to_basis_zero_vector():
    u, r = rotate_to_basis([0, 0], 1)
    assert r == 0 and np.allclose(u, np.eye(2))


def test_apply_1q_matches_kron():
    rng = np.random.default_rng(0)
    u = haar_unitary(2, rng)
    # qubit 1 of 3 is the middle tensor factor
    want = np.kron(np.eye(2), np.kron(u, np.eye(2)))
    assert np.allclose(apply_1q(np.eye(8, dtype=complex), u, 1, 3), want)


def test_apply_cnot_bit_order():
    state = np.zeros((4, 1), dtype=complex)
    state[1] = 1  # qubit 0 set
    out = apply_cnot(state, 0, 1, 2)
    assert out[3, 0] == 1


def test_embed_qubit_order():
    rng = np.random.default_rng(1)
    u = haar_unitary(4, rng)
    # qubits[0] is the low bit of the matrix
    assert np.allclose(embed(u, [0, 1], 2), u)
    swap = np.eye(4)[[0, 2, 1, 3]]
    assert np.allclose(embed(u, [1, 0], 2), swap @ u @ swap)


@given(seeds, st.integers(0, 3), st.integers(0, 3))
@settings(max_examples=30, deadline=None)
def test_complete_to_unitary(seed, m, extra):
    n = m + extra
    v = random_isometry(m, n, seed).matrix
    u = complete_to_unitary(v)
    assert is_unitary(u)
    assert np.array_equal(u[:, : 2**m], v)
