"""State preparation by recursive Schmidt halving.

The register splits into an upper half A (floor(n/2) qubits) and a lower
half B. Writing psi = sum_j s_j |u_j>_A |v_j>_B, the circuit prepares
sum_j s_j |j>_A on A, copies the index into B with a CNOT ladder, then
rotates |j>_A -> |u_j> and |j>_B -> |v_j> independently. The A-side unitary
is cut to an input diagonal which slides back through the ladder controls
into the A-side preparation.
"""

from __future__ import annotations

import numpy as np

from .circuit import Circuit, Cnot, SingleQubit
from .csd import isometry_ops
from .kak import isometry_1to2_ops
from .linalg import ZERO_TOL, Isometry, dagger, rotate_to_basis
from .report import SynthesisReport, finish


def _b_side_ops(iso: np.ndarray, qs: list[int]) -> list:
    """Isometry from len(A) qubits into the B register."""
    rows, cols = iso.shape
    if rows == 2:
        return [SingleQubit(qs[0], iso)]
    if cols == 2 and rows == 4:
        return isometry_1to2_ops(iso, qs[0], qs[1])
    ops, _ = isometry_ops(iso, qs)
    return ops


def schmidt_split(psi: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``psi = (u_a x iso_b) . ladder . (phi x |0>)`` with A the upper floor(n/2) qubits.

    Returns ``(phi, u_a, iso_b)``: the Schmidt coefficients as a state on A,
    the A-side unitary and the isometry from A-sized indices into B.
    """
    n_a = n // 2
    mat = np.asarray(psi, dtype=complex).reshape(2**n_a, 2 ** (n - n_a))
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    return s.astype(complex), u, vh.T


def ladder_ops(qubits: list[int]) -> list:
    """CNOTs copying the A index into the low bits of B."""
    n = len(qubits)
    n_a = n // 2
    n_b = n - n_a
    return [Cnot(qubits[n_b + j], qubits[j]) for j in range(n_a)]


def state_ops(psi: np.ndarray, qubits: list[int]) -> list:
    """Lowered gates mapping |0...0> on ``qubits`` to ``psi`` up to global phase."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    n = len(qubits)
    if n == 1:
        u, _ = rotate_to_basis(psi, 0)
        return [SingleQubit(qubits[0], dagger(u))]
    n_a = n // 2
    n_b = n - n_a
    qa, qb = qubits[n_b:], qubits[:n_b]
    phi, u, iso_b = schmidt_split(psi, n)
    if abs(phi[1]) < ZERO_TOL:
        # product state: prepare the halves separately
        return state_ops(u[:, 0], qa) + state_ops(iso_b[:, 0], qb)
    if n_a == 1:
        ops_a = [SingleQubit(qa[0], u)]
    else:
        ops_a, d = isometry_ops(u, qa, input_diagonal=True)
        # d acts on the two lowest qubits of A
        phi = phi * d[np.arange(2**n_a) & 3]
    return state_ops(phi, qa) + ladder_ops(qubits) + ops_a + _b_side_ops(iso_b, qb)


def prepare_state(psi) -> tuple[Circuit, SynthesisReport]:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1) > ZERO_TOL:
        raise ValueError(f"state is not normalized (norm {norm:.12g})")
    v = Isometry(psi.reshape(-1, 1))
    if v.n < 1:
        raise ValueError("state preparation needs at least one qubit")
    return finish("sp", Circuit(v.n, state_ops(psi, list(range(v.n)))), v)


__all__ = ["ladder_ops", "prepare_state", "schmidt_split", "state_ops"]
