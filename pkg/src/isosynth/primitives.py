"""Lowering passes from macro gates to single-qubit gates and CNOTs."""

from __future__ import annotations

from typing import Sequence

import numpy as np
import scipy.linalg

from .circuit import (
    Circuit,
    Cnot,
    Diagonal,
    Mcg,
    PhaseGate,
    SingleQubit,
    Ucg,
    Ucr,
    Unitary,
    merge_single_qubit,
)
from .linalg import (
    H,
    I2,
    X,
    dagger,
    is_unitary,
    rot,
    rotate_to_basis,
    ry,
    rz,
    zyz_decompose,
)

__all__ = [
    "demultiplex_single_control",
    "lower",
    "lower_diagonal",
    "lower_mc_not",
    "lower_mcg_general",
    "lower_mcg_su2",
    "lower_ucg_up_to_diagonal",
    "lower_ucr",
    "mcg_ops",
    "mcx_ops",
    "rotate_to_basis",
    "ucg_up_to_diagonal_ops",
    "ucr_ops",
    "zyz_decompose",
]

Ops = list


# ---------------------------------------------------------------- rotations


def _gray(i: int) -> int:
    return i ^ (i >> 1)


def _trailing_zeros(x: int) -> int:
    return (x & -x).bit_length() - 1


def ucr_ops(
    axis: str,
    controls: Sequence[int],
    target: int,
    angles: Sequence[float],
    cz: bool = False,
    drop_last: bool = False,
) -> Ops:
    """Gray-code lowering of a uniformly controlled rotation with ``2**k`` CNOTs.

    With ``cz`` the CNOTs are replaced by CZs (valid for R_y only); with
    ``drop_last`` the final CZ, which is controlled by ``controls[-1]``, is
    left for the caller to absorb.
    """
    if axis not in ("y", "z"):
        raise ValueError("only y and z multiplexed rotations are supported")
    if cz and axis != "y":
        raise ValueError("CZ lowering needs R_y rotations")
    k = len(controls)
    angles = np.asarray(angles, dtype=float)
    if k == 0:
        return [SingleQubit(target, rot(axis, angles[0]))]
    size = 2**k
    g = np.array([_gray(i) for i in range(size)])
    x = np.arange(size)
    sign = np.array([[(-1) ** bin(int(xx) & int(gg)).count("1") for gg in g] for xx in x], dtype=float)
    theta = sign.T @ angles / size
    ops: Ops = []
    for i in range(size):
        ops.append(SingleQubit(target, rot(axis, theta[i])))
        c = controls[k - 1] if i == size - 1 else controls[_trailing_zeros(i + 1)]
        if i == size - 1 and drop_last:
            break
        if cz:
            ops += [SingleQubit(target, H), Cnot(c, target), SingleQubit(target, H)]
        else:
            ops.append(Cnot(c, target))
    return ops


def lower_ucr(g: Ucr, cz: bool = False) -> Circuit:
    width = max(g.qubits) + 1
    c = Circuit(width, ucr_ops(g.axis, g.controls, g.target, g.angles, cz=cz))
    return merge_single_qubit(c)


# ----------------------------------------------------------- UCG up to diag

_OMEGA = np.exp(0.25j * np.pi)


def _demux_pair(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (p, u, v) with a = diag(p) u D v and b = u D^dag v, D = diag(w, w*)."""
    x = a @ dagger(b)
    phi = float(np.angle(np.linalg.det(x)))
    if abs(x[0, 0]) > 1e-12:
        delta = float(np.angle(-x[1, 1] / x[0, 0]))
    else:
        delta = 0.0
    p = np.exp(0.5j * np.array([phi - delta, phi + delta]))
    y = np.conj(p)[:, None] * x
    vals, vecs = np.linalg.eig(y)
    j = int(np.argmin(np.abs(vals - 1j)))
    e0 = vecs[:, j] / np.linalg.norm(vecs[:, j])
    u = np.column_stack([e0, [-np.conj(e0[1]), np.conj(e0[0])]])
    dd = np.array([_OMEGA, np.conj(_OMEGA)])
    v = np.conj(dd)[:, None] * (dagger(u) @ (np.conj(p)[:, None] * a))
    return p, u, v


def ucg_up_to_diagonal_ops(
    blocks: Sequence[np.ndarray], controls: Sequence[int], target: int
) -> tuple[Ops, np.ndarray]:
    """Lower a UCG with ``2**k - 1`` CNOTs.

    Returns ``(ops, d)`` where ``d`` holds the diagonal over qubits
    ``[target] + controls`` and ``diag(d) @ unitary(ops) == UCG``.
    """
    k = len(controls)
    if k == 0:
        return [SingleQubit(target, blocks[0])], np.ones(2, dtype=complex)
    half = 2 ** (k - 1)
    top = controls[-1]
    ps, us, vs = [], [], []
    for i in range(half):
        p, u, v = _demux_pair(np.asarray(blocks[i]), np.asarray(blocks[i + half]))
        ps.append(p)
        us.append(u)
        vs.append(v)
    ops_v, d_v = ucg_up_to_diagonal_ops(vs, controls[:-1], target)
    us = [us[i] @ np.diag(d_v[2 * i : 2 * i + 2]) for i in range(half)]
    ops_u, d_u = ucg_up_to_diagonal_ops(us, controls[:-1], target)
    # exp(i pi/4 Z_top Z_t) = CZ . (diag(1,-i)_top x diag(w, w*)_t)
    gadget = [
        SingleQubit(target, H @ np.diag([_OMEGA, np.conj(_OMEGA)])),
        Cnot(top, target),
        SingleQubit(target, H),
    ]
    d = np.concatenate([np.concatenate(ps), np.ones(2 * half, dtype=complex)])
    d = d * np.concatenate([d_u, d_u])
    d[2 * half :] *= -1j
    return ops_v + gadget + ops_u, d


def lower_ucg_up_to_diagonal(g: Ucg) -> tuple[Circuit, Diagonal]:
    width = max(g.qubits) + 1
    ops, d = ucg_up_to_diagonal_ops(g.blocks, g.controls, g.target)
    return merge_single_qubit(Circuit(width, ops)), Diagonal.from_values(g.qubits, d)


# ------------------------------------------------------------------ diagonal


def diagonal_ops(qubits: Sequence[int], phases: Sequence[float]) -> Ops:
    """Exact diagonal with at most ``2**q - 2`` CNOTs."""
    qubits = list(qubits)
    phases = np.asarray(phases, dtype=float)
    ops: Ops = []
    while len(qubits) > 1:
        even, odd = phases[0::2], phases[1::2]
        ops += ucr_ops("z", qubits[1:], qubits[0], odd - even)
        phases = (even + odd) / 2
        qubits = qubits[1:]
    ops.append(SingleQubit(qubits[0], np.diag(np.exp(1j * phases))))
    return ops


def lower_diagonal(g: Diagonal) -> Circuit:
    width = max(g.qubits) + 1
    return merge_single_qubit(Circuit(width, diagonal_ops(g.qubits, g.phases)))


# ------------------------------------------------------------ demultiplexing


def demultiplex_single_control(u0: np.ndarray, u1: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``u0 + u1 = (I x v) . Ucr_z(control; angles) . (I x w)``.

    The returned angles drive an R_z on the control qubit, multiplexed by the
    lower register's basis index.
    """
    u0 = np.asarray(u0, dtype=complex)
    u1 = np.asarray(u1, dtype=complex)
    if u0.shape != u1.shape or not is_unitary(u0, 1e-8) or not is_unitary(u1, 1e-8):
        raise ValueError("demultiplexing needs two unitaries of equal size")
    prod = u0 @ dagger(u1)
    t, v = scipy.linalg.schur(prod, output="complex")
    off = float(np.linalg.norm(np.triu(t, 1)))
    if off > 1e-8:
        raise np.linalg.LinAlgError(f"Schur form of u0 u1^dag is not diagonal (off-diagonal norm {off:.2e})")
    d = np.sqrt(np.diag(t).astype(complex))
    w = d[:, None] * (dagger(v) @ u1)
    angles = -2 * np.angle(d)
    return v, angles, w


# ------------------------------------------------------ controlled unitaries


def _abc(u: np.ndarray) -> tuple[float, np.ndarray, np.ndarray, np.ndarray]:
    """``u = e^{i alpha} A X B X C`` with ``ABC = I`` and A, B, C in SU(2)."""
    alpha, beta, gamma, delta = zyz_decompose(u)
    a = rz(beta) @ ry(gamma / 2)
    b = ry(-gamma / 2) @ rz(-(delta + beta) / 2)
    c = rz((delta - beta) / 2)
    return alpha, a, b, c


def controlled_ops(control: int, target: int, u: np.ndarray) -> Ops:
    """C(U) with two CNOTs."""
    alpha, a, b, c = _abc(u)
    ops = [SingleQubit(target, c), Cnot(control, target), SingleQubit(target, b), Cnot(control, target), SingleQubit(target, a)]
    if abs(alpha) > 1e-15:
        ops.append(SingleQubit(control, np.diag([1.0, np.exp(1j * alpha)])))
    return ops


def _sqrt_u2(u: np.ndarray) -> np.ndarray:
    vals, vecs = scipy.linalg.schur(np.asarray(u, dtype=complex), output="complex")
    return vecs @ np.diag(np.sqrt(np.diag(vals))) @ dagger(vecs)


def cc_u_ops(c1: int, c2: int, target: int, u: np.ndarray) -> Ops:
    """Doubly controlled U with six CNOTs, via V with V^2 = U."""
    v = _sqrt_u2(u)
    delta, a, b, c = _abc(v)
    e = np.diag([1.0, np.exp(1j * delta)])
    t = target
    return [
        SingleQubit(c2, e),
        SingleQubit(t, c),
        Cnot(c2, t),
        SingleQubit(t, b),
        Cnot(c1, t),
        Cnot(c1, c2),
        SingleQubit(c2, dagger(e)),
        SingleQubit(t, dagger(b)),
        Cnot(c1, c2),
        Cnot(c2, t),
        SingleQubit(t, b),
        Cnot(c1, t),
        SingleQubit(t, a),
        SingleQubit(c1, e),
    ]


# ------------------------------------------------------------ Toffoli family

_TG = np.diag([1.0, np.exp(0.25j * np.pi)])
_TDG = dagger(_TG)
_A = ry(np.pi / 4)
_ADG = ry(-np.pi / 4)


def toffoli_ops(c1: int, c2: int, t: int) -> Ops:
    """Exact Toffoli with six CNOTs."""
    return [
        SingleQubit(t, H),
        Cnot(c2, t),
        SingleQubit(t, _TDG),
        Cnot(c1, t),
        SingleQubit(t, _TG),
        Cnot(c2, t),
        SingleQubit(t, _TDG),
        Cnot(c1, t),
        SingleQubit(c2, _TG),
        SingleQubit(t, H @ _TG),
        Cnot(c1, c2),
        SingleQubit(c1, _TG),
        SingleQubit(c2, _TDG),
        Cnot(c1, c2),
    ]


def _half_open(c1: int, c2: int, t: int) -> Ops:
    return [SingleQubit(t, _ADG), Cnot(c2, t), SingleQubit(t, _ADG), Cnot(c1, t)]


def _half_close(c1: int, c2: int, t: int) -> Ops:
    return [Cnot(c1, t), SingleQubit(t, _A), Cnot(c2, t), SingleQubit(t, _A)]


def toffoli_up_to_diagonal_ops(c1: int, c2: int, t: int) -> Ops:
    """Toffoli times a diagonal, three CNOTs; maps |c1=0,c2=1,t=0> to minus itself."""
    return _half_open(c1, c2, t) + [SingleQubit(t, _A), Cnot(c2, t), SingleQubit(t, _A)]


def _chain(xs: Sequence[int], anc: Sequence[int], j: int, target: int) -> Ops:
    """Optimised V-chain of relative-phase Toffolis computing AND(x_1..x_j) into ``target``.

    ``xs`` and ``anc`` are 0-based lists; the chain for level ``j`` uses the
    Toffoli T(x_j, a_{j-2} -> target) around the chain for level ``j - 1``.
    """
    if j == 2:
        return toffoli_up_to_diagonal_ops(xs[0], xs[1], target)
    a_prev = anc[j - 3]
    return _half_open(a_prev, xs[j - 1], target) + _chain(xs, anc, j - 1, a_prev) + _half_close(a_prev, xs[j - 1], target)


def _ladder_parts(controls: Sequence[int], target: int, anc: Sequence[int]) -> tuple[Ops, Ops]:
    """Return (T, R) with C_k(X) = T R T R in time order."""
    k = len(controls)
    t_ops = toffoli_ops(anc[k - 3], controls[k - 1], target)
    r_ops = _chain(controls, anc, k - 1, anc[k - 3])
    return t_ops, r_ops


def _x_conj(controls: Sequence[tuple[int, int]]) -> Ops:
    return [SingleQubit(q, X) for q, p in controls if p == 0]


def mcx_ops(controls: Sequence[int], target: int, free: Sequence[int], up_to_diagonal: bool = False) -> Ops:
    """Multi-controlled NOT with dirty ancillas taken from ``free``."""
    controls = list(controls)
    free = [q for q in free if q != target and q not in controls]
    k = len(controls)
    if k == 0:
        return [SingleQubit(target, X)]
    if k == 1:
        return [Cnot(controls[0], target)]
    if k == 2:
        if up_to_diagonal:
            return toffoli_up_to_diagonal_ops(controls[0], controls[1], target)
        return toffoli_ops(controls[0], controls[1], target)
    if len(free) >= k - 2:
        t_ops, r_ops = _ladder_parts(controls, target, free[: k - 2])
        return t_ops + r_ops + t_ops + r_ops
    if free:
        return _split_mcx_ops(controls, target, free[0])
    # no spare wire: fall back to the square-root recursion
    return mcg_general_ops(controls, target, X, [])


def _halve_controls(controls: Sequence[int], width: int) -> tuple[list[int], list[int]]:
    k2 = (width + 1) // 2
    k1 = width - k2 - 1
    return list(controls[:k1]), list(controls[k1:])


def _split_mcx_ops(controls: Sequence[int], target: int, f: int) -> Ops:
    width = len(controls) + 2
    g1, g2 = _halve_controls(controls, width)
    p = mcx_ops(g1, f, g2)
    q = mcx_ops(g2 + [f], target, g1)
    return p + q + p + q


def lower_mc_not(
    k: int, n: int, polarity: Sequence[int] | None = None, up_to_diagonal: bool = False
) -> Circuit:
    """C_k(X) on ``n`` wires: target qubit 0, controls 1..k, the rest dirty ancillas."""
    if k < 0 or n < k + 1:
        raise ValueError(f"unsupported combination k={k}, n={n}")
    if k >= 3 and k > (n + 1) // 2 and k != n - 2 and k != n - 1:
        raise ValueError(f"unsupported combination k={k}, n={n}")
    pol = list(polarity) if polarity is not None else [1] * k
    if len(pol) != k:
        raise ValueError("one polarity per control")
    controls = list(range(1, k + 1))
    pairs = list(zip(controls, pol))
    ops = _x_conj(pairs) + mcx_ops(controls, 0, range(k + 1, n), up_to_diagonal) + _x_conj(pairs)
    return merge_single_qubit(Circuit(n, ops))


# ------------------------------------------------------- multi-controlled U


def mcg_general_ops(controls: Sequence[int], target: int, u: np.ndarray, free: Sequence[int]) -> Ops:
    """C_k(U) by the square-root recursion, all controls on |1>."""
    controls = list(controls)
    k = len(controls)
    u = np.asarray(u, dtype=complex)
    if k == 0:
        return [SingleQubit(target, u)]
    if k == 1:
        return controlled_ops(controls[0], target, u)
    if k == 2:
        return cc_u_ops(controls[0], controls[1], target, u)
    v = _sqrt_u2(u)
    last, rest = controls[-1], controls[:-1]
    mcx = mcx_ops(rest, last, [target] + list(free))
    return (
        controlled_ops(last, target, v)
        + mcx
        + controlled_ops(last, target, dagger(v))
        + mcx
        + mcg_general_ops(rest, target, v, list(free) + [last])
    )


def _mcx_su2_halves(g: Sequence[int], target: int, f: int) -> tuple[Ops, Ops]:
    """Pieces of the one-ancilla split C_{n-2}(X) used by the SU(2) construction.

    Returns (first, second) where ``first`` is the MCX with its final chain
    removed and ``second`` its inverse with the leading chain removed.
    """
    width = len(g) + 2
    g1, g2 = _halve_controls(g, width)
    k1 = len(g1)
    if k1 >= 3:
        p_fwd = _chain(g1, g2, k1, f) + _chain(g1, g2, k1 - 1, g2[k1 - 3])
        p_bwd = [op.inverse() for op in reversed(p_fwd)]
    elif k1 == 2:
        p_fwd = toffoli_up_to_diagonal_ops(g1[0], g1[1], f)
        p_bwd = [op.inverse() for op in reversed(p_fwd)]
    else:
        p_fwd = p_bwd = mcx_ops(g1, f, g2)
    qc = g2 + [f]
    if len(qc) >= 3:
        t_ops, r_ops = _ladder_parts(qc, target, g1)
        q_full = t_ops + r_ops + t_ops + r_ops
        q_open = t_ops + r_ops + t_ops
    else:
        q_full = q_open = mcx_ops(qc, target, g1)
    first = p_fwd + q_full + p_bwd + q_open
    inv = [op.inverse() for op in reversed(p_fwd + q_full + p_bwd + q_full)]
    second = inv[len(q_full) - len(q_open) :]
    return first, second


def mcg_ops(controls: Sequence[tuple[int, int]], target: int, u: np.ndarray, width: int, su2: bool | None = None) -> Ops:
    """Lower an Mcg; ``su2`` selects the SU(2) construction (default: when eligible)."""
    ctrl = [q for q, _ in controls]
    free = [q for q in range(width) if q != target and q not in ctrl]
    u = np.asarray(u, dtype=complex)
    if np.allclose(u, I2, atol=1e-14):
        return []
    use_su2 = su2 if su2 is not None else len(ctrl) + 1 >= 8
    if use_su2:
        body = _mcg_su2_body(ctrl, target, u)
    else:
        body = mcg_general_ops(ctrl, target, u, free)
    conj = _x_conj(controls)
    return conj + body + conj


def _mcg_su2_body(ctrl: Sequence[int], target: int, u: np.ndarray) -> Ops:
    det = np.linalg.det(u)
    if abs(det - 1) > 1e-10:
        raise ValueError("SU(2) construction needs det(u) = 1")
    _, a, b, c = _abc(u)
    f = ctrl[-1]
    first, second = _mcx_su2_halves(list(ctrl[:-1]), target, f)
    return (
        controlled_ops(f, target, c)
        + first
        + controlled_ops(f, target, b)
        + second
        + controlled_ops(f, target, a)
    )


def lower_mcg_general(g: Mcg, width: int | None = None) -> Circuit:
    width = width if width is not None else max(g.qubits) + 1
    return merge_single_qubit(Circuit(width, mcg_ops(g.controls, g.target, g.u, width, su2=False)))


def lower_mcg_su2(g: Mcg, width: int | None = None) -> Circuit:
    width = width if width is not None else max(g.qubits) + 1
    n = len(g.controls) + 1
    if abs(np.linalg.det(g.u) - 1) > 1e-10:
        raise ValueError("lower_mcg_su2 needs a special unitary")
    return merge_single_qubit(Circuit(width, mcg_ops(g.controls, g.target, g.u, width, su2=n >= 8)))


# --------------------------------------------------------------- lowering


def lower(c: Circuit) -> Circuit:
    """Exact lowering of every macro gate (UCGs are lowered with their diagonal)."""
    from .kak import kak_ops

    ops: Ops = []
    n = c.width
    for op in c.ops:
        if isinstance(op, (SingleQubit, Cnot)):
            ops.append(op)
        elif isinstance(op, Ucr):
            ops += ucr_ops(op.axis, op.controls, op.target, op.angles)
        elif isinstance(op, Ucg):
            sub, d = ucg_up_to_diagonal_ops(op.blocks, op.controls, op.target)
            ops += sub + diagonal_ops(op.qubits, np.angle(d))
        elif isinstance(op, Mcg):
            ops += mcg_ops(op.controls, op.target, op.u, n)
        elif isinstance(op, Diagonal):
            ops += diagonal_ops(op.qubits, op.phases)
        elif isinstance(op, PhaseGate):
            ops.append(SingleQubit(op.target, op.matrix()))
        elif isinstance(op, Unitary):
            if len(op.qubits) == 1:
                ops.append(SingleQubit(op.qubits[0], op.matrix))
            elif len(op.qubits) == 2:
                ops += kak_ops(op.matrix, op.qubits[0], op.qubits[1])
            else:
                from .csd import unitary_ops

                ops += unitary_ops(op.matrix, list(op.qubits))
        else:
            raise TypeError(f"cannot lower {type(op).__name__}")
    return merge_single_qubit(Circuit(n, ops))
