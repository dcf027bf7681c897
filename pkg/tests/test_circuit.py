import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isosynth.circuit import (
    Circuit,
    Cnot,
    Diagonal,
    Mcg,
    PhaseGate,
    Ucg,
    Ucr,
    Unitary,
    counts,
    emit_text,
    isometry_to_json,
    merge_single_qubit,
    parse_isometry,
    parse_text,
    unitary_of,
    verify_isometry,
)
from isosynth.linalg import H, X, haar_unitary, random_isometry, ry

seeds = st.integers(0, 2**32 - 1)


def random_lowered(width: int, length: int, seed: int) -> Circuit:
    rng = np.random.default_rng(seed)
    c = Circuit(width)
    for _ in range(length):
        if width > 1 and rng.random() < 0.4:
            a, b = rng.choice(width, 2, replace=False)
            c.cx(int(a), int(b))
        else:
            c.u(int(rng.integers(width)), haar_unitary(2, rng))
    return c


def test_bell_circuit():
    c = Circuit(2).u(0, H).cx(0, 1)
    out = c.apply(np.eye(4, 1, dtype=complex))
    assert np.allclose(out[:, 0], [1 / np.sqrt(2), 0, 0, 1 / np.sqrt(2)])
    assert counts(c) == (1, 1)


def test_cnot_matrix():
    # control qubit 0 is the low bit
    want = np.eye(4)[[0, 3, 2, 1]]
    assert np.allclose(unitary_of(Circuit(2, [Cnot(0, 1)])), want)


def test_cnot_rejects_equal_wires():
    with pytest.raises(ValueError):
        Cnot(1, 1)


def test_width_check():
    with pytest.raises(ValueError):
        Circuit(2).cx(0, 2)


def test_counts_needs_lowered():
    with pytest.raises(ValueError):
        counts(Circuit(1, [PhaseGate(0, 0.3)]))


def test_ucg_matrix_block_order():
    blocks = (np.eye(2), X)
    g = Ucg((1,), 0, blocks)
    # control on qubit 1 set flips qubit 0
    assert np.allclose(unitary_of(Circuit(2, [g])), np.eye(4)[[0, 1, 3, 2]])


def test_ucr_matches_ucg():
    r = Ucr("y", (1, 2), 0, (0.1, 0.2, 0.3, 0.4))
    g = r.as_ucg()
    assert np.allclose(g.blocks[2], ry(0.3))
    assert np.allclose(unitary_of(Circuit(3, [r])), unitary_of(Circuit(3, [g])))


def test_mcg_polarity():
    g = Mcg(((1, 0),), 0, X)
    assert np.allclose(unitary_of(Circuit(2, [g])), np.eye(4)[[1, 0, 2, 3]])
    assert np.allclose(unitary_of(Circuit(2, [g.as_ucg()])), unitary_of(Circuit(2, [g])))


def test_diagonal_and_phase_gate():
    d = Diagonal((0, 1), (0.0, 0.1, 0.2, 0.3))
    assert np.allclose(unitary_of(Circuit(2, [d])), np.diag(np.exp(1j * np.array([0, 0.1, 0.2, 0.3]))))
    with pytest.raises(ValueError):
        Diagonal((0,), (0.0,))
    assert np.allclose(PhaseGate(0, 0.5).matrix(), np.diag([np.exp(0.5j), 1]))


def test_unitary_macro_low_bit():
    u = haar_unitary(4, np.random.default_rng(2))
    assert np.allclose(unitary_of(Circuit(2, [Unitary((0, 1), u)])), u)


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_inverse(seed):
    rng = np.random.default_rng(seed)
    c = Circuit(
        3,
        [
            Ucg((1, 2), 0, tuple(haar_unitary(2, rng) for _ in range(4))),
            Mcg(((0, 1), (2, 0)), 1, haar_unitary(2, rng)),
            Diagonal((2,), (0.4, -1.0)),
            Unitary((2, 0), haar_unitary(4, rng)),
            Cnot(2, 1),
        ],
    )
    assert np.allclose(unitary_of(c) @ unitary_of(c.inverse()), np.eye(8))


@given(seeds, seeds, st.integers(1, 4))
@settings(max_examples=20, deadline=None)
def test_concatenation(s1, s2, width):
    a = random_lowered(width, 8, s1)
    b = random_lowered(width, 8, s2)
    ab = a.copy().extend(b)
    assert np.allclose(unitary_of(ab), unitary_of(b) @ unitary_of(a))


@given(seeds, st.integers(1, 4))
@settings(max_examples=20, deadline=None)
def test_emit_parse_roundtrip(seed, width):
    c = random_lowered(width, 12, seed)
    again = parse_text(emit_text(c))
    assert counts(again) == counts(c)
    u, w = unitary_of(c), unitary_of(again)
    ph = np.vdot(w.reshape(-1), u.reshape(-1))
    assert np.linalg.norm(u - ph / abs(ph) * w) < 1e-10


@given(seeds, st.integers(1, 4))
@settings(max_examples=20, deadline=None)
def test_merge_single_qubit_preserves_unitary(seed, width):
    c = random_lowered(width, 15, seed)
    merged = merge_single_qubit(c)
    assert len(merged.ops) <= len(c.ops)
    assert np.allclose(unitary_of(merged), unitary_of(c))
    assert counts(merged)[0] == counts(c)[0]


def test_parse_text_errors():
    with pytest.raises(ValueError):
        parse_text("cx q[0] q[1]\n")
    with pytest.raises(ValueError):
        parse_text("qubits 2\nswap q[0] q[1]\n")


def test_verify_isometry():
    c = Circuit(1).u(0, X)
    assert verify_isometry(c, np.array([0, 1])) < 1e-15
    with pytest.raises(ValueError):
        verify_isometry(c, np.eye(4, 1))


def test_isometry_json_roundtrip():
    v = random_isometry(1, 2, 3)
    w = parse_isometry(isometry_to_json(v))
    assert np.allclose(v.matrix, w.matrix)


@pytest.mark.parametrize(
    "text",
    [
        "{not json",
        '{"m": 0, "n": 1}',
        '{"m": 0, "n": 1, "matrix": [[1, 0]]}',
        '{"m": 0, "n": 1, "matrix": [1, 0]}',
        '{"m": 0, "n": 1, "matrix": [[1, 0], [1, 0]]}',
    ],
)
def test_parse_isometry_errors(text):
    with pytest.raises(ValueError):
        parse_isometry(text)
