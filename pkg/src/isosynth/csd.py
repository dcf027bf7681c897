"""Cosine-sine decomposition synthesis for isometries and unitaries.

Recursion (top qubit = most significant of the current register):

* unitary: ``U = (A0 + A1) CS (B0 + B1)``; both multiplexed factors are
  demultiplexed into two half-size unitaries around a multiplexed R_z, and
  the CS block is a multiplexed R_y on the top qubit.
* isometry with the top qubit starting in ``|0>``: only ``B0`` acts, so it
  becomes a plain sub-isometry on the lower register.

Two savings are applied. Each multiplexed R_y is built from CZs and its last
CZ is folded into the following multiplexed factor. Every two-qubit block
except the first is lowered with two CNOTs up to an input-side diagonal,
which is pushed back into the preceding block.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .bounds import RegimeError
from .circuit import Circuit, SingleQubit, Unitary
from .kak import kak_input_diagonal_ops, kak_ops
from .linalg import ACCEPT_TOL, Isometry, Z, complete_to_unitary, is_unitary
from .primitives import demultiplex_single_control, ucr_ops
from .report import SynthesisReport, finish


class CsdError(np.linalg.LinAlgError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


def csd_factor(u: np.ndarray):
    """``u = (a0 + a1) [[C, -S], [S, C]] (b0 + b1)`` with C = cos(angles), S = sin(angles)."""
    u = np.asarray(u, dtype=complex)
    dim = u.shape[0]
    if u.shape != (dim, dim) or dim < 2 or dim & (dim - 1) or not is_unitary(u, 1e-8):
        raise ValueError("csd_factor expects a 2**n x 2**n unitary with n >= 1")
    half = dim // 2
    (a0, a1), theta, (b0, b1) = scipy.linalg.cossin(u, p=half, q=half, separate=True)
    c, s = np.diag(np.cos(theta)), np.diag(np.sin(theta))
    rec = scipy.linalg.block_diag(a0, a1) @ np.block([[c, -s], [s, c]]) @ scipy.linalg.block_diag(b0, b1)
    res = float(np.linalg.norm(rec - u))
    if res > ACCEPT_TOL:
        raise CsdError(f"cosine-sine reconstruction residual {res:.3e}", res)
    return a0, a1, np.asarray(theta, dtype=float), b0, b1


def _ry_layer(theta: np.ndarray, qs: list[int]) -> list:
    """Multiplexed R_y on the top qubit with its last CZ left out."""
    return ucr_ops("y", qs[:-1], qs[-1], 2 * theta, cz=True, drop_last=True)


def _fold_cz(a1: np.ndarray) -> np.ndarray:
    # the dropped CZ acts as Z on the lower register's top qubit when the top qubit is 1
    return a1 @ np.kron(Z, np.eye(a1.shape[0] // 2))


def _demux_macro(u0: np.ndarray, u1: np.ndarray, qs: list[int]) -> list:
    v, angles, w = demultiplex_single_control(u0, u1)
    lower = qs[:-1]
    return _unitary_macro(w, lower) + ucr_ops("z", lower, qs[-1], angles) + _unitary_macro(v, lower)


def _unitary_macro(u: np.ndarray, qs: list[int]) -> list:
    """Gates for ``u`` with two-qubit blocks left as pending Unitary macros."""
    if len(qs) == 1:
        return [SingleQubit(qs[0], u)]
    if len(qs) == 2:
        return [Unitary(tuple(qs), u)]
    a0, a1, theta, b0, b1 = csd_factor(u)
    return _demux_macro(b0, b1, qs) + _ry_layer(theta, qs) + _demux_macro(a0, _fold_cz(a1), qs)


def _isometry_macro(v: np.ndarray, qs: list[int]) -> list:
    w = len(qs)
    cols = v.shape[1]
    if cols == 2**w or w <= 2:
        return _unitary_macro(complete_to_unitary(v), qs)
    a0, a1, theta, b0, _ = csd_factor(complete_to_unitary(v))
    return _isometry_macro(b0[:, :cols], qs[:-1]) + _ry_layer(theta, qs) + _demux_macro(a0, _fold_cz(a1), qs)


def _finalize(ops: list, input_diagonal: bool) -> tuple[list, np.ndarray | None]:
    """Lower pending two-qubit blocks back to front, pushing diagonals earlier."""
    out: list = []
    carry = None
    blocks = [i for i, op in enumerate(ops) if isinstance(op, Unitary)]
    first = blocks[0] if blocks else None
    for i in range(len(ops) - 1, -1, -1):
        op = ops[i]
        if not isinstance(op, Unitary):
            out.append(op)
            continue
        q0, q1 = op.qubits
        mat = op.matrix if carry is None else carry[:, None] * op.matrix
        if i == first and not input_diagonal:
            sub = kak_ops(mat, q0, q1)
            carry = None
        else:
            sub, carry = kak_input_diagonal_ops(mat, q0, q1)
        out.extend(reversed(sub))
    out.reverse()
    return out, carry


def isometry_ops(v: np.ndarray, qubits: list[int], input_diagonal: bool = False):
    """Lowered gates for the isometry ``v`` on ``qubits`` (qubits[0] least significant).

    With ``input_diagonal`` the first two-qubit block is also cut to two CNOTs
    and ``(ops, d)`` is returned, where ``unitary(ops) @ diag(d on qubits[:2])``
    realizes ``v``; otherwise ``(ops, None)``.
    """
    v = np.asarray(v, dtype=complex)
    ops = _isometry_macro(v, list(qubits))
    return _finalize(ops, input_diagonal and len(qubits) >= 2)


def unitary_ops(u: np.ndarray, qubits: list[int]) -> list:
    ops, _ = isometry_ops(u, qubits)
    return ops


def synthesize_csd(v: Isometry) -> tuple[Circuit, SynthesisReport]:
    if v.m < 2:
        raise RegimeError(f"CSD synthesis needs m >= 2, got m={v.m}")
    ops, _ = isometry_ops(v.matrix, list(range(v.n)))
    return finish("csd", Circuit(v.n, ops), v)


__all__ = ["CsdError", "csd_factor", "isometry_ops", "synthesize_csd", "unitary_ops"]
