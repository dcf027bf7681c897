"""Column-by-column synthesis of isometries.

Column k of the (already partially reduced) isometry is driven to |k> one
qubit at a time. At stage s a multiplexed gate on qubit s, controlled by the
qubits above it, rotates every amplitude pair into bit k_s; when k_s = 0 and
the lower bits of k are not all zero, a multi-controlled gate first clears
the one pair the multiplexer is not allowed to touch. All gates leave the
earlier basis states |0>..|k-1> fixed up to phase, and the leftover phases
are cleared at the end by a diagonal on the m least significant qubits.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable

import numpy as np

from .bounds import mcg_budget
from .circuit import Circuit, Mcg, Ucg
from .linalg import ZERO_TOL, Isometry, rotate_to_basis
from .primitives import diagonal_ops, mcg_ops, ucg_up_to_diagonal_ops
from .report import SynthesisReport, finish
from .stateprep import state_ops

_I2 = np.eye(2, dtype=complex)


class PreconditionError(ValueError):
    def __init__(self, message: str, index: int, magnitude: float):
        super().__init__(message)
        self.index = index
        self.magnitude = magnitude


def _bit(x: int, q: int) -> int:
    return (x >> q) & 1


def _pair(state: np.ndarray, c: int, s: int, b: int) -> tuple[int, int]:
    """Row indices of the pair with upper value c, qubit s free and lower bits b."""
    i0 = (2 * c) * 2**s + b
    return i0, i0 + 2**s


def _check_support(state: np.ndarray, k: int, s: int) -> None:
    """Column k at stage s lives on rows >= k whose lowest s bits equal those of k."""
    b = k % 2**s
    idx = np.arange(state.shape[0])
    bad = ((idx % 2**s) != b) | (idx < k)
    mags = np.abs(state.reshape(-1))
    mags = np.where(bad, mags, 0.0)
    j = int(np.argmax(mags))
    if mags[j] > 1e-8:
        raise PreconditionError(f"column {k} at stage {s} has weight {mags[j]:.2e} on row {j}", j, float(mags[j]))


def disentangle_step(state: np.ndarray, k: int, s: int) -> tuple[Ucg, np.ndarray]:
    """Multiplexed gate on qubit s moving every pair into bit k_s without touching |0>..|k-1>."""
    state = np.asarray(state, dtype=complex).reshape(-1, 1)
    n = state.shape[0].bit_length() - 1
    _check_support(state, k, s)
    b, ks, c = k % 2**s, _bit(k, s), k >> (s + 1)
    blocks = []
    for cc in range(2 ** (n - 1 - s)):
        i0, i1 = _pair(state, cc, s, b)
        if cc < c:
            blocks.append(_I2)
        elif cc == c and (ks == 1 or b != 0):
            if ks == 0 and abs(state[i1, 0]) > 1e-8:
                raise PreconditionError(f"entry {i1} must be cleared before stage {s}", i1, float(abs(state[i1, 0])))
            blocks.append(_I2)
        else:
            u, _ = rotate_to_basis(state[[i0, i1], 0], ks)
            blocks.append(u)
    g = Ucg(tuple(range(s + 1, n)), s, tuple(blocks))
    return g, g.apply(state, n)


def _low_controls(k: int, s: int) -> tuple[int, ...] | None:
    """Smallest set of qubits below s separating k from every j < k, if k < 2**(s+1)."""
    if k >> (s + 1):
        return None
    for size in range(1, s + 1):
        for sub in combinations(range(s), size):
            if all(any(_bit(j, q) != _bit(k, q) for q in sub) for j in range(k)):
                return sub
    return None


def zeroing_mcg(state: np.ndarray, k: int, s: int, low: bool = False) -> tuple[Mcg | None, np.ndarray]:
    """Multi-controlled SU(2) gate on qubit s clearing row k + 2**s.

    Returns ``(None, state)`` when the row is already zero. With ``low`` the
    controls are cut down to a few qubits below s where that is still safe.
    """
    state = np.asarray(state, dtype=complex).reshape(-1, 1)
    n = state.shape[0].bit_length() - 1
    if _bit(k, s) != 0 or k % 2**s == 0:
        raise ValueError(f"no zeroing gate is needed for k={k}, s={s}")
    i0, i1 = k, k + 2**s
    if abs(state[i1, 0]) < ZERO_TOL:
        return None, state
    u, _ = rotate_to_basis(state[[i0, i1], 0], 0)
    sub = _low_controls(k, s) if low else None
    if sub is None:
        sub = tuple(q for q in range(n) if q != s)
    g = Mcg(tuple((q, _bit(k, q)) for q in sub), s, u)
    return g, g.apply(state, n)


def mcg_sites(m: int, n: int) -> list[tuple[int, int]]:
    """The (k, s) pairs that may need a zeroing gate."""
    return [
        (k, s)
        for k in range(1, 2**m)
        for s in range(1, n)
        if _bit(k, s) == 0 and k % 2 ** (s + 1) != 0
    ]


Emit = Callable[[object, np.ndarray], tuple[list, np.ndarray]]


def _exact_emit(g, state):
    n = state.shape[0].bit_length() - 1
    return [g], g.apply(state, n)


def _run_column(state: np.ndarray, k: int, n: int, emit: Emit, low: bool) -> tuple[list, np.ndarray, int]:
    ops: list = []
    mcgs = 0
    for s in range(n):
        if s > 0 and _bit(k, s) == 0 and k % 2**s != 0:
            g, _ = zeroing_mcg(state, k, s, low)
            if g is not None:
                sub, state = emit(g, state)
                ops += sub
                mcgs += 1
        g, _ = disentangle_step(state, k, s)
        if any(not np.allclose(u, _I2, atol=1e-14) for u in g.blocks):
            sub, state = emit(g, state)
            ops += sub
    return ops, state, mcgs


def synthesize_column(state: np.ndarray, k: int, n: int) -> Circuit:
    """Macro circuit G_k mapping ``state`` to e^{i phi}|k> while fixing |0>..|k-1> up to phase."""
    state = np.asarray(state, dtype=complex).reshape(-1, 1)
    if np.any(np.abs(state[:k, 0]) > 1e-8):
        raise PreconditionError("column is not orthogonal to earlier basis states", 0, float(np.max(np.abs(state[:k, 0]))))
    ops, _, _ = _run_column(state, k, n, _exact_emit, low=False)
    return Circuit(n, ops)


def _lowered_emit(n: int, mcg_as_ucg: bool, su2: bool | None) -> Emit:
    def emit(g, state):
        if isinstance(g, Mcg) and not mcg_as_ucg:
            ops = mcg_ops(g.controls, g.target, g.u, n, su2=su2)
        else:
            ucg = g.as_ucg() if isinstance(g, Mcg) else g
            ops, _ = ucg_up_to_diagonal_ops(ucg.blocks, ucg.controls, ucg.target)
        return ops, Circuit(n, ops).apply(state)

    return emit


def column_circuit(v: Isometry, low_mcg: bool = False) -> tuple[Circuit, int]:
    """Lowered circuit for ``v``; returns the circuit and the number of zeroing gates used."""
    n, m = v.n, v.m
    cols = np.array(v.matrix)
    sp = state_ops(cols[:, 0], list(range(n)))
    g0 = Circuit(n, sp).inverse()
    work = g0.apply(cols)
    emit = _lowered_emit(n, mcg_as_ucg=low_mcg, su2=None if n >= 8 else False)
    columns: list[list] = []
    mcgs = 0
    for k in range(1, 2**m):
        ops, _, used = _run_column(work[:, [k]], k, n, emit, low=low_mcg)
        mcgs += used
        work = Circuit(n, ops).apply(work)
        columns.append(ops)
    ops: list = []
    if m > 0:
        phases = np.angle(work[np.arange(2**m), np.arange(2**m)])
        ops += diagonal_ops(list(range(m)), phases - phases[0])
    for col in reversed(columns):
        ops += [op.inverse() for op in reversed(col)]
    ops += sp
    return Circuit(n, ops), mcgs


def synthesize_ccd(v: Isometry) -> tuple[Circuit, SynthesisReport]:
    c, mcgs = column_circuit(v)
    return finish("ccd", c, v, mcg_count=mcgs)


def mcg_budget_enumerated(m: int, n: int) -> int:
    return len(mcg_sites(m, n))


__all__ = [
    "PreconditionError",
    "column_circuit",
    "disentangle_step",
    "mcg_budget",
    "mcg_budget_enumerated",
    "mcg_sites",
    "synthesize_ccd",
    "synthesize_column",
    "zeroing_mcg",
]
