"""Two-qubit synthesis through the magic-basis canonical decomposition.

Inside this module a 4x4 matrix is read as ``kron(A, B)`` where ``A`` acts on
the more significant qubit ``a`` and ``B`` on the less significant qubit ``b``.
"""

from __future__ import annotations

import numpy as np

from .circuit import Circuit, Cnot, Diagonal, SingleQubit, merge_single_qubit
from .linalg import X, Y, Z, complete_to_unitary, dagger, is_unitary, rx, ry, rz

_B = np.array(
    [[1, 0, 0, 1j], [0, 1j, 1, 0], [0, 1j, -1, 0], [1, 0, 0, -1j]],
    dtype=complex,
) / np.sqrt(2)
_XX = np.kron(X, X)
_YY = np.kron(Y, Y)
_ZZ = np.kron(Z, Z)
# eigenvalue patterns of XX, YY, ZZ in the magic basis
_PATTERN = np.real(np.array([np.diag(dagger(_B) @ p @ _B) for p in (_XX, _YY, _ZZ)]))
_SOLVE = np.linalg.inv(np.vstack([_PATTERN, np.ones(4)]).T)
_S = np.diag([1, 1j])
_K = rx(np.pi / 2)


def canonical_gate(a: float, b: float, c: float) -> np.ndarray:
    """exp(i (a XX + b YY + c ZZ))."""
    vals = np.exp(1j * (_PATTERN.T @ np.array([a, b, c])))
    return _B @ np.diag(vals) @ dagger(_B)


def _split_local(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Factor ``m = kron(A, B)`` by a rank-one SVD of the realigned matrix."""
    r = m.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    u, s, vh = np.linalg.svd(r)
    a = np.sqrt(s[0]) * u[:, 0].reshape(2, 2)
    b = np.sqrt(s[0]) * vh[0].reshape(2, 2)
    return a, b


def _real_orthogonal_eig(m2: np.ndarray) -> np.ndarray:
    """Real orthogonal P with P^T m2 P diagonal, for a symmetric unitary m2."""
    re, im = m2.real, m2.imag
    for r in (0.0, 1.0, 0.6180339887, 2.718281828, -1.41421356, 3.3, 0.1234):
        _, p = np.linalg.eigh(re + r * im)
        d = p.T @ m2 @ p
        if np.linalg.norm(d - np.diag(np.diag(d))) < 1e-9:
            if np.linalg.det(p) < 0:
                p[:, 0] = -p[:, 0]
            return p
    raise np.linalg.LinAlgError("failed to diagonalise the magic-basis symmetric matrix")


def kak_decompose(u: np.ndarray):
    """Return (phase, (A1, B1), (a, b, c), (A2, B2)) with
    ``u = phase * kron(A1, B1) @ canonical_gate(a, b, c) @ kron(A2, B2)``."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (4, 4) or not is_unitary(u, 1e-8):
        raise ValueError("kak_decompose expects a 4x4 unitary")
    det = np.linalg.det(u)
    g = det ** 0.25
    su = u / g
    up = dagger(_B) @ su @ _B
    m2 = up.T @ up
    p = _real_orthogonal_eig(m2)
    lam2 = np.diag(p.T @ m2 @ p)
    lam = np.sqrt(lam2)
    if np.real(np.prod(lam)) < 0:
        lam[0] = -lam[0]
    k1 = up @ p @ np.diag(1 / lam)
    k2 = p.T
    theta = np.angle(lam)
    a, b, c, _ = _SOLVE @ theta
    left = _B @ k1 @ dagger(_B)
    right = _B @ k2 @ dagger(_B)
    a1, b1 = _split_local(left)
    a2, b2 = _split_local(right)
    # the rank-one splits lose a scalar, so read the phase off the reconstruction
    rec = np.kron(a1, b1) @ canonical_gate(a, b, c) @ np.kron(a2, b2)
    ip = np.vdot(rec, u)
    phase = ip / abs(ip)
    return phase, (a1, b1), (float(a), float(b), float(c)), (a2, b2)


def _template3(a: float, b: float, c: float, qa: int, qb: int) -> list:
    """Three-CNOT circuit for canonical_gate(a, b, c) up to global phase."""
    return [
        SingleQubit(qb, rz(np.pi / 2)),
        Cnot(qb, qa),
        SingleQubit(qa, rz(np.pi / 2 - 2 * c)),
        SingleQubit(qb, ry(np.pi / 2 - 2 * a)),
        Cnot(qa, qb),
        SingleQubit(qb, ry(2 * b - np.pi / 2)),
        Cnot(qb, qa),
        SingleQubit(qa, rz(-np.pi / 2)),
    ]


def _template2(a: float, c: float, qa: int, qb: int) -> list:
    """canonical_gate(a, 0, c) exactly, two CNOTs."""
    return [Cnot(qa, qb), SingleQubit(qa, rx(-2 * a)), SingleQubit(qb, rz(-2 * c)), Cnot(qa, qb)]


def _with_locals(inner: list, left, right, qa: int, qb: int) -> list:
    return [SingleQubit(qa, right[0]), SingleQubit(qb, right[1])] + inner + [
        SingleQubit(qa, left[0]),
        SingleQubit(qb, left[1]),
    ]


def _pow_local(p: np.ndarray, k: int) -> np.ndarray:
    return np.linalg.matrix_power(p, k % 4)


def _two_cnot_ops(u: np.ndarray, qa: int, qb: int) -> list:
    """Two-CNOT circuit for a u whose canonical class has a coordinate on the pi/2 lattice."""
    _, left, coords, right = kak_decompose(u)
    dist = [abs(x / (np.pi / 2) - round(x / (np.pi / 2))) for x in coords]
    slot = int(np.argmin(dist))
    k = int(round(coords[slot] / (np.pi / 2)))
    a, b, c = coords
    # exp(i k pi/2 P) is i^k P^k, a local gate up to phase
    paulis = (X, Y, Z)
    lp = _pow_local(paulis[slot], k)
    right = (lp @ right[0], lp @ right[1])
    if slot == 1:
        inner = _template2(a, c, qa, qb)
    elif slot == 0:
        # S x S swaps XX and YY
        ss, ssd = _S, dagger(_S)
        inner = [SingleQubit(qa, ssd), SingleQubit(qb, ssd)] + _template2(b, c, qa, qb) + [
            SingleQubit(qa, ss),
            SingleQubit(qb, ss),
        ]
    else:
        # Rx(pi/2) x Rx(pi/2) swaps YY and ZZ
        kk, kkd = _K, dagger(_K)
        inner = [SingleQubit(qa, kkd), SingleQubit(qb, kkd)] + _template2(a, b, qa, qb) + [
            SingleQubit(qa, kk),
            SingleQubit(qb, kk),
        ]
    return _with_locals(inner, left, right, qa, qb)


def _diag_for_real_trace(u: np.ndarray) -> np.ndarray:
    """Diagonal D (values) making tr(gamma(D u)) real, so D u needs two CNOTs."""
    su = u / np.linalg.det(u) ** 0.25
    m = su @ _YY @ su.T
    phi = np.arctan2(np.imag(m[1, 2] - m[0, 3]), np.real(m[0, 3] + m[1, 2]))
    return np.exp(0.5j * phi * np.array([1, -1, -1, 1]))


def kak_ops(u: np.ndarray, q0: int, q1: int) -> list:
    """Three-CNOT lowering of a two-qubit unitary on (q0, q1); q0 is the low bit of ``u``."""
    _, left, coords, right = kak_decompose(u)
    return _with_locals(_template3(*coords, q1, q0), left, right, q1, q0)


def kak_up_to_diagonal_ops(u: np.ndarray, q0: int, q1: int) -> tuple[list, np.ndarray]:
    """Two CNOTs: returns (ops, d) with ``diag(d) @ unitary(ops) = u`` up to global phase."""
    d = _diag_for_real_trace(u)
    ops = _two_cnot_ops(d[:, None] * u, q1, q0)
    return ops, np.conj(d)


def kak_input_diagonal_ops(u: np.ndarray, q0: int, q1: int) -> tuple[list, np.ndarray]:
    """Two CNOTs: returns (ops, d) with ``unitary(ops) @ diag(d) = u`` up to global phase."""
    ops, d = kak_up_to_diagonal_ops(dagger(u), q0, q1)
    return [op.inverse() for op in reversed(ops)], np.conj(d)


def isometry_1to2_ops(v: np.ndarray, q0: int, q1: int) -> list:
    """Two CNOTs for a one-qubit to two-qubit isometry whose input sits on q0 (q1 starts in |0>)."""
    v = np.asarray(v, dtype=complex)
    if v.shape != (4, 2):
        raise ValueError("isometry_1to2_ops expects a 4x2 matrix")
    ops, d = kak_input_diagonal_ops(complete_to_unitary(v), q0, q1)
    # with q1 in |0> the input diagonal reduces to diag(d0, d1) on q0
    return [SingleQubit(q0, np.diag(d[:2]))] + ops


def kak_two_qubit(u: np.ndarray, up_to_diagonal: bool = False) -> tuple[Circuit, Diagonal | None]:
    u = np.asarray(u, dtype=complex)
    if u.shape != (4, 4) or not is_unitary(u, 1e-8):
        raise ValueError("kak_two_qubit expects a 4x4 unitary")
    if up_to_diagonal:
        ops, d = kak_up_to_diagonal_ops(u, 0, 1)
        return merge_single_qubit(Circuit(2, ops)), Diagonal.from_values((0, 1), d)
    return merge_single_qubit(Circuit(2, kak_ops(u, 0, 1))), None


__all__ = [
    "canonical_gate",
    "kak_decompose",
    "kak_input_diagonal_ops",
    "kak_ops",
    "kak_two_qubit",
    "kak_up_to_diagonal_ops",
    "isometry_1to2_ops",
]
