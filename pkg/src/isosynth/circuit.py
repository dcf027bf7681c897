"""Gate IR: primitive gates, macro gates, circuits, simulation and text I/O."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

import numpy as np

from .linalg import (
    Isometry,
    IsometryError,
    apply_1q,
    apply_cnot,
    apply_diagonal,
    apply_matrix,
    dagger,
    phase_aligned_distance,
    rot,
    zyz_decompose,
    zyz_matrix,
)


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SingleQubit:
    target: int
    u: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "u", _frozen(self.u))

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)

    def apply(self, state: np.ndarray, n: int) -> np.ndarray:
        return apply_1q(state, self.u, self.target, n)

    def inverse(self) -> "SingleQubit":
        return SingleQubit(self.target, dagger(self.u))

    def remap(self, qmap) -> "SingleQubit":
        return SingleQubit(qmap[self.target], self.u)


@dataclass(frozen=True)
class Cnot:
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise ValueError("CNOT control equals target")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, self.target)

    def apply(self, state: np.ndarray, n: int) -> np.ndarray:
        return apply_cnot(state, self.control, self.target, n)

    def inverse(self) -> "Cnot":
        return self

    def remap(self, qmap) -> "Cnot":
        return Cnot(qmap[self.control], qmap[self.target])


@dataclass(frozen=True, eq=False)
class Ucg:
    """Uniformly controlled gate; block index = sum_j bit(controls[j]) 2**j."""

    controls: tuple[int, ...]
    target: int
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple(self.controls))
        object.__setattr__(self, "blocks", tuple(_frozen(b) for b in self.blocks))
        if len(self.blocks) != 2 ** len(self.controls):
            raise ValueError("UCG needs 2**k blocks")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,) + self.controls

    def matrix(self) -> np.ndarray:
        k = len(self.controls)
        out = np.zeros((2 ** (k + 1), 2 ** (k + 1)), dtype=complex)
        for i, b in enumerate(self.blocks):
            out[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = b
        return out

    def apply(self, state: np.ndarray, n: int) -> np.ndarray:
        return apply_matrix(state, self.matrix(), list(self.qubits), n)

    def inverse(self) -> "Ucg":
        return Ucg(self.controls, self.target, tuple(dagger(b) for b in self.blocks))

    def remap(self, qmap) -> "Ucg":
        return Ucg(tuple(qmap[c] for c in self.controls), qmap[self.target], self.blocks)


@dataclass(frozen=True, eq=False)
class Ucr:
    """Uniformly controlled rotation about ``axis``."""

    axis: str
    controls: tuple[int, ...]
    target: int
    angles: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple(self.controls))
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))
        if len(self.angles) != 2 ** len(self.controls):
            raise ValueError("UCR needs 2**k angles")
        if self.axis not in ("x", "y", "z"):
            raise ValueError(f"unknown axis {self.axis!r}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,) + self.controls

    def as_ucg(self) -> Ucg:
        return Ucg(self.controls, self.target, tuple(rot(self.axis, a) for a in self.angles))

    def apply(self, state: np.ndarray, n: int) -> np.ndarray:
        return self.as_ucg().apply(state, n)

    def inverse(self) -> "Ucr":
        return Ucr(self.axis, self.controls, self.target, tuple(-a for a in self.angles))

    def remap(self, qmap) -> "Ucr":
        return Ucr(self.axis, tuple(qmap[c] for c in self.controls), qmap[self.target], self.angles)


@dataclass(frozen=True, eq=False)
class Mcg:
    """Multi-controlled gate; ``controls`` holds (qubit, polarity) pairs."""

    controls: tuple[tuple[int, int], ...]
    target: int
    u: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple((int(q), int(p)) for q, p in self.controls))
        object.__setattr__(self, "u", _frozen(self.u))

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,) + tuple(q for q, _ in self.controls)

    def active_index(self) -> int:
        return sum(p << j for j, (_, p) in enumerate(self.controls))

    def as_ucg(self) -> Ucg:
        k = len(self.controls)
        blocks = [np.eye(2, dtype=complex)] * 2**k
        blocks[self.active_index()] = self.u
        return Ucg(tuple(q for q, _ in self.controls), self.target, tuple(blocks))

    def apply(self, state: np.ndarray, n: int) -> np.ndarray:
        idx = np.arange(2**n)
        sel = np.ones(2**n, dtype=bool)
        for q, p in self.controls:
            sel &= ((idx >> q) & 1) == p
        sel &= ((idx >> self.target) & 1) == 0
        i0 = idx[sel]
        i1 = i0 | (1 << self.target)
        out = state.copy()
        a, b = state[i0], state[i1]
        out[i0] = self.u[0, 0] * a + self.u[0, 1] * b
        out[i1] = self.u[1, 0] * a + self.u[1, 1] * b
        return out

    def inverse(self) -> "Mcg":
        return Mcg(self.controls, self.target, dagger(self.u))

    def remap(self, qmap) -> "Mcg":
        return Mcg(tuple((qmap[q], p) for q, p in self.controls), qmap[self.target], self.u)


@dataclass(frozen=True, eq=False)
class Diagonal:
    """Diagonal gate ``exp(i*phases[j])`` with j = sum_p bit(qubits[p]) 2**p."""

    qubits: tuple[int, ...]
    phases: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))
        if len(self.phases) != 2 ** len(self.qubits):
            raise ValueError("diagonal needs 2**q phases")

    def values(self) -> np.ndarray:
        return np.exp(1j * np.asarray(self.phases))

    def apply(self, state: np.ndarray, n: int) -> np.ndarray:
        return apply_diagonal(state, np.asarray(self.phases), list(self.qubits), n)

    def inverse(self) -> "Diagonal":
        return Diagonal(self.qubits, tuple(-p for p in self.phases))

    def remap(self, qmap) -> "Diagonal":
        return Diagonal(tuple(qmap[q] for q in self.qubits), self.phases)

    @classmethod
    def from_values(cls, qubits, values) -> "Diagonal":
        return cls(tuple(qubits), tuple(np.angle(np.asarray(values, dtype=complex))))


@dataclass(frozen=True)
class PhaseGate:
    """P(theta) = e^{i theta}|0><0| + |1><1|."""

    target: int
    theta: float

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)

    def matrix(self) -> np.ndarray:
        return np.diag([np.exp(1j * self.theta), 1.0]).astype(complex)

    def apply(self, state: np.ndarray, n: int) -> np.ndarray:
        return apply_1q(state, self.matrix(), self.target, n)

    def inverse(self) -> "PhaseGate":
        return PhaseGate(self.target, -self.theta)

    def remap(self, qmap) -> "PhaseGate":
        return PhaseGate(qmap[self.target], self.theta)


@dataclass(frozen=True, eq=False)
class Unitary:
    """Dense unitary on ``qubits`` (qubits[0] is the least significant bit of the matrix)."""

    qubits: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "matrix", _frozen(self.matrix))
        if self.matrix.shape != (2 ** len(self.qubits),) * 2:
            raise ValueError("unitary size does not match qubit count")

    def apply(self, state: np.ndarray, n: int) -> np.ndarray:
        return apply_matrix(state, self.matrix, list(self.qubits), n)

    def inverse(self) -> "Unitary":
        return Unitary(self.qubits, dagger(self.matrix))

    def remap(self, qmap) -> "Unitary":
        return Unitary(tuple(qmap[q] for q in self.qubits), self.matrix)


Gate = Union[SingleQubit, Cnot]
MacroGate = Union[Ucg, Ucr, Mcg, Diagonal, PhaseGate, Unitary]
Op = Union[Gate, MacroGate]


def _op_qubits(op: Op) -> tuple[int, ...]:
    return tuple(op.qubits)


@dataclass(eq=False)
class Circuit:
    """Ordered gate list in temporal order (first op acts first)."""

    width: int
    ops: list = field(default_factory=list)

    def __post_init__(self):
        self.ops = list(self.ops)
        for op in self.ops:
            self._check(op)

    def _check(self, op: Op) -> None:
        for q in _op_qubits(op):
            if not 0 <= q < self.width:
                raise ValueError(f"qubit {q} outside width {self.width}")

    def append(self, op: Op) -> "Circuit":
        self._check(op)
        self.ops.append(op)
        return self

    def extend(self, ops: Iterable[Op] | "Circuit") -> "Circuit":
        if isinstance(ops, Circuit):
            ops = ops.ops
        for op in ops:
            self.append(op)
        return self

    def u(self, target: int, mat: np.ndarray) -> "Circuit":
        return self.append(SingleQubit(target, mat))

    def cx(self, control: int, target: int) -> "Circuit":
        return self.append(Cnot(control, target))

    def __iter__(self) -> Iterator[Op]:
        return iter(self.ops)

    def __len__(self) -> int:
        return len(self.ops)

    @property
    def lowered(self) -> bool:
        return all(isinstance(op, (SingleQubit, Cnot)) for op in self.ops)

    def copy(self) -> "Circuit":
        return Circuit(self.width, list(self.ops))

    def inverse(self) -> "Circuit":
        return Circuit(self.width, [op.inverse() for op in reversed(self.ops)])

    def remap(self, qmap, width: int) -> "Circuit":
        """Relabel qubit ``q`` as ``qmap[q]`` inside a circuit of the given width."""
        return Circuit(width, [op.remap(qmap) for op in self.ops])

    def apply(self, state: np.ndarray) -> np.ndarray:
        s = np.asarray(state, dtype=complex)
        vec = s.ndim == 1
        if vec:
            s = s.reshape(-1, 1)
        for op in self.ops:
            s = op.apply(s, self.width)
        return s[:, 0] if vec else s

    def cnot_count(self) -> int:
        return sum(isinstance(op, Cnot) for op in self.ops)

    def __repr__(self) -> str:
        return f"Circuit(width={self.width}, ops={len(self.ops)}, cnots={self.cnot_count()})"


def unitary_of(c: Circuit) -> np.ndarray:
    return c.apply(np.eye(2**c.width, dtype=complex))


def counts(c: Circuit) -> tuple[int, int]:
    if not c.lowered:
        raise ValueError("counts() needs a lowered circuit")
    cx = sum(isinstance(op, Cnot) for op in c.ops)
    return cx, len(c.ops) - cx


def verify_isometry(c: Circuit, v: Isometry | np.ndarray) -> float:
    mat = v.matrix if isinstance(v, Isometry) else np.asarray(v, dtype=complex)
    if mat.ndim == 1:
        mat = mat.reshape(-1, 1)
    if mat.shape[0] != 2**c.width:
        raise ValueError(f"circuit width {c.width} does not match isometry with {mat.shape[0]} rows")
    cols = mat.shape[1]
    start = np.eye(2**c.width, cols, dtype=complex)
    return phase_aligned_distance(c.apply(start), mat)


def merge_single_qubit(c: Circuit) -> Circuit:
    """Peephole pass fusing runs of single-qubit gates on the same wire."""
    out: list = []
    pending: dict[int, int] = {}
    for op in c.ops:
        if isinstance(op, SingleQubit):
            j = pending.get(op.target)
            if j is not None:
                out[j] = SingleQubit(op.target, op.u @ out[j].u)
            else:
                pending[op.target] = len(out)
                out.append(op)
            continue
        for q in _op_qubits(op):
            pending.pop(q, None)
        out.append(op)
    keep = [op for op in out if not (isinstance(op, SingleQubit) and _is_phase_identity(op.u))]
    return Circuit(c.width, keep)


def _is_phase_identity(u: np.ndarray, tol: float = 1e-13) -> bool:
    return abs(u[0, 1]) < tol and abs(u[1, 0]) < tol and abs(u[0, 0] - u[1, 1]) < tol


def emit_text(c: Circuit) -> str:
    if not c.lowered:
        raise ValueError("emit_text needs a lowered circuit")
    lines = [f"qubits {c.width}"]
    for op in c.ops:
        if isinstance(op, Cnot):
            lines.append(f"cx q[{op.control}] q[{op.target}]")
        else:
            _, beta, gamma, delta = zyz_decompose(op.u)
            lines.append(f"u3 {gamma:.17g} {beta:.17g} {delta:.17g} q[{op.target}]")
    return "\n".join(lines) + "\n"


_U3 = re.compile(r"^u3\s+(\S+)\s+(\S+)\s+(\S+)\s+q\[(\d+)\]$")
_CX = re.compile(r"^cx\s+q\[(\d+)\]\s+q\[(\d+)\]$")


def parse_text(text: str) -> Circuit:
    """Inverse of :func:`emit_text` (global phase is not recorded)."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("qubits "):
        raise ValueError("missing 'qubits <width>' header")
    c = Circuit(int(lines[0].split()[1]))
    for ln in lines[1:]:
        if mt := _U3.match(ln):
            theta, phi, lam = (float(mt.group(i)) for i in (1, 2, 3))
            c.u(int(mt.group(4)), zyz_matrix(0.0, phi, theta, lam))
        elif mt := _CX.match(ln):
            c.cx(int(mt.group(1)), int(mt.group(2)))
        else:
            raise ValueError(f"cannot parse line {ln!r}")
    return c


def _pairs_to_complex(rows, where: str) -> np.ndarray:
    try:
        arr = np.asarray(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{where}: entries must be [re, im] pairs") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"{where}: entries must be [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def parse_isometry(text: str) -> Isometry:
    """Parse ``{"m", "n", "matrix": [[re, im], ...]}`` (row-major)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON: {exc}") from exc
    if not isinstance(data, dict) or not {"m", "n", "matrix"} <= data.keys():
        raise ValueError("isometry JSON needs keys m, n, matrix")
    m, n = int(data["m"]), int(data["n"])
    flat = _pairs_to_complex(data["matrix"], "matrix")
    if flat.size != 2**n * 2**m:
        raise ValueError(f"matrix has {flat.size} entries, expected {2**n * 2**m}")
    return Isometry(flat.reshape(2**n, 2**m), m, n)


def isometry_to_json(v: Isometry) -> str:
    flat = v.matrix.reshape(-1)
    return json.dumps({"m": v.m, "n": v.n, "matrix": [[z.real, z.imag] for z in flat]})


__all__ = [
    "Circuit",
    "Cnot",
    "Diagonal",
    "Isometry",
    "IsometryError",
    "Mcg",
    "PhaseGate",
    "SingleQubit",
    "Ucg",
    "Ucr",
    "Unitary",
    "counts",
    "emit_text",
    "isometry_to_json",
    "merge_single_qubit",
    "parse_isometry",
    "parse_text",
    "unitary_of",
    "verify_isometry",
]
