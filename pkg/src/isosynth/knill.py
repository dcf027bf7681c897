"""Knill-style synthesis: a unitary extension of V as a product of rank-one phase gates.

Each factor ``I + (e^{i theta} - 1)|chi><chi|`` is written as
``W C(P) W^dag`` where the multi-controlled phase acts on |1...1> and
``W = SP(chi) X^{(x)n}`` for a Schmidt-halving preparation of chi. The
preparation unitaries of neighbouring factors are merged, so between two
phase gates there is one preparation on the upper half, its inverse, two
CNOT ladders and one unitary on each half.
"""

from __future__ import annotations

import numpy as np

from .bounds import RegimeError
from .circuit import Circuit, SingleQubit
from .csd import unitary_ops
from .linalg import X, ZERO_TOL, Isometry, complete_to_unitary, dagger
from .primitives import mcg_ops
from .report import SynthesisReport, finish
from .stateprep import ladder_ops, schmidt_split, state_ops


class KnillError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


def knill_factors(v: Isometry) -> list[tuple[float, np.ndarray]]:
    """Pairs (theta_i, chi_i) with ``prod_i (I + (e^{i theta_i} - 1)|chi_i><chi_i|)`` extending V.

    The product is taken in list order (the first factor is leftmost).
    Factors that would be the identity are dropped.
    """
    w = np.array(v.matrix)
    factors = []
    for i in range(2**v.m):
        a = w[:, i]
        b = np.zeros_like(a)
        b[i] = 1
        z = np.vdot(b, a)
        diff = b - a
        norm = np.linalg.norm(diff)
        if norm < ZERO_TOL:
            continue
        chi = diff / norm
        phase = -(1 - np.conj(z)) / (1 - z)
        # R = I + (phase - 1)|chi><chi| maps column i onto |i>
        w = w + (phase - 1) * np.outer(chi, np.conj(chi) @ w)
        factors.append((-float(np.angle(phase)), chi))
    res = float(np.linalg.norm(w - np.eye(*w.shape)))
    if res > 1e-9:
        raise KnillError(f"greedy phase selection left residual {res:.3e}", res)
    return factors


class _Prep:
    """Full unitary W with W|1...1> = chi, in Schmidt-halving form."""

    def __init__(self, chi: np.ndarray, n: int):
        self.n = n
        self.n_a = n // 2
        self.n_b = n - self.n_a
        phi, u_a, iso_b = schmidt_split(chi, n)
        self.qubits = list(range(n))
        self.qa = self.qubits[self.n_b :]
        self.qb = self.qubits[: self.n_b]
        self.sp_a = state_ops(phi, self.qa)
        self.u_a = u_a
        self.u_b = complete_to_unitary(iso_b)

    def front(self) -> list:
        """Gates before the two half unitaries: X layer, SP on A, ladder."""
        xs = [SingleQubit(q, X) for q in self.qubits]
        return xs + self.sp_a + ladder_ops(self.qubits)

    def back_inverse(self) -> list:
        return [op.inverse() for op in reversed(self.front())]


def _half_unitary_ops(u: np.ndarray, qs: list[int]) -> list:
    return unitary_ops(u, qs) if len(qs) > 1 else [SingleQubit(qs[0], u)]


def _halves(left: _Prep | None, right: _Prep | None) -> list:
    """Gates for ``left^dag right`` restricted to the half-unitary layer."""
    p = left or right
    u_a = np.eye(2**p.n_a, dtype=complex)
    u_b = np.eye(2**p.n_b, dtype=complex)
    if right is not None:
        u_a, u_b = right.u_a, right.u_b
    if left is not None:
        u_a, u_b = dagger(left.u_a) @ u_a, dagger(left.u_b) @ u_b
    return _half_unitary_ops(u_a, p.qa) + _half_unitary_ops(u_b, p.qb)


def synthesize_knill(v: Isometry) -> tuple[Circuit, SynthesisReport]:
    n = v.n
    if n < 2:
        raise RegimeError("Knill synthesis needs n >= 2")
    factors = knill_factors(v)
    preps = [_Prep(chi, n) for _, chi in factors]
    controls = [(q, 1) for q in range(1, n)]
    ops: list = []
    # the rightmost factor acts first
    order = list(range(len(factors) - 1, -1, -1))
    prev: _Prep | None = None
    for i in order:
        cur = preps[i]
        if prev is not None:
            ops += prev.front()
        ops += _halves(cur, prev) + cur.back_inverse()
        theta = factors[i][0]
        ops += mcg_ops(controls, 0, np.diag([1, np.exp(1j * theta)]), n, su2=False)
        prev = cur
    if prev is not None:
        ops += prev.front() + _halves(None, prev)
    return finish("knill", Circuit(n, ops), v)


__all__ = ["KnillError", "knill_factors", "synthesize_knill"]
