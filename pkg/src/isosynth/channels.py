"""CPTP maps via Stinespring dilation, with Choi-matrix verification.

A Kraus set {K_j} on m -> n qubits becomes the isometry
``V = sum_j |j>_E (x) K_j`` into n + e qubits, the environment E occupying
the most significant qubits. Tracing E out of the synthesized circuit
recovers the channel.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .bounds import lower_bound_channel
from .circuit import Circuit, _pairs_to_complex
from .linalg import ZERO_TOL, Isometry
from .report import SynthesisReport


class ChannelError(ValueError):
    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True, eq=False)
class KrausSet:
    m: int
    n: int
    ops: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=complex) for k in self.ops)
        object.__setattr__(self, "ops", ops)
        if not 1 <= len(ops) <= 2 ** (self.n + self.m):
            raise ChannelError(f"need between 1 and {2 ** (self.n + self.m)} Kraus operators, got {len(ops)}")
        shape = (2**self.n, 2**self.m)
        for k in ops:
            if k.shape != shape:
                raise ChannelError(f"Kraus operator shape {k.shape} differs from {shape}")
        res = completeness_residual(ops)
        if res > ZERO_TOL:
            raise ChannelError(f"sum K^dag K deviates from identity by {res:.3e}", res)


def completeness_residual(ops) -> float:
    total = sum(k.conj().T @ k for k in ops)
    return float(np.linalg.norm(total - np.eye(total.shape[0])))


def env_qubits(k: KrausSet) -> int:
    return (len(k.ops) - 1).bit_length()


def kraus_to_isometry(k: KrausSet) -> Isometry:
    e = env_qubits(k)
    blocks = list(k.ops) + [np.zeros_like(k.ops[0])] * (2**e - len(k.ops))
    return Isometry(np.vstack(blocks), k.m, k.n + e)


def _choi_from_kraus(ops, m: int) -> np.ndarray:
    # rho = (1/2^m) sum_j sum_{ab} |a><b| (x) K_j|a><b|K_j^dag, input A as the high factor
    dim_a = 2**m
    blocks = []
    for k in ops:
        # column a of vec is |a> (x) K|a>
        vec = np.concatenate([k[:, a] for a in range(dim_a)])
        blocks.append(vec)
    mat = np.array(blocks).T
    return mat @ mat.conj().T / dim_a


def choi_of(x, traced_qubits=None, m: int | None = None, n: int | None = None) -> np.ndarray:
    """Trace-one Choi matrix of a KrausSet, or of a circuit with environment ``traced_qubits``.

    The input system is the more significant tensor factor of the result.
    """
    if isinstance(x, KrausSet):
        return _choi_from_kraus(x.ops, x.m)
    if not isinstance(x, Circuit):
        raise TypeError("choi_of expects a KrausSet or a Circuit")
    traced = sorted(traced_qubits or [])
    width = x.width
    keep = [q for q in range(width) if q not in traced]
    if m is None or n is None:
        raise ValueError("circuit Choi needs m and n")
    if len(keep) != n or width != n + len(traced):
        raise ValueError("traced qubits do not match the output size")
    if keep != list(range(n)) or traced != list(range(n, width)):
        raise ValueError("environment must sit on the most significant qubits")
    cols = x.apply(np.eye(2**width, 2**m, dtype=complex))
    # cols[e * 2^n + b, a] is <e, b| V |a>, giving Kraus operators K_e = cols[e block]
    ops = [cols[e * 2**n : (e + 1) * 2**n] for e in range(2 ** len(traced))]
    return _choi_from_kraus(ops, m)


def synthesize_channel(k: KrausSet, scheme: str = "auto") -> tuple[Circuit, list[int], SynthesisReport]:
    from .dispatcher import synthesize

    v = kraus_to_isometry(k)
    circuit, report = synthesize(v, scheme)
    traced = list(range(k.n, v.n))
    report = replace(report, lower_bound=lower_bound_channel(k.m, k.n))
    return circuit, traced, report


def random_kraus(m: int, n: int, count: int, seed: int | None = None) -> KrausSet:
    """Kraus set from the columns of a random isometry (count operators)."""
    from .linalg import random_isometry

    e = (count - 1).bit_length()
    v = random_isometry(m, n + e, seed).matrix
    ops = [v[j * 2**n : (j + 1) * 2**n] for j in range(count)]
    # renormalize the truncated set so it stays trace preserving
    total = sum(op.conj().T @ op for op in ops)
    w, u = np.linalg.eigh(total)
    inv_sqrt = u @ np.diag(w**-0.5) @ u.conj().T
    return KrausSet(m, n, tuple(op @ inv_sqrt for op in ops))


def parse_kraus(text: str) -> KrausSet:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChannelError(f"malformed JSON: {exc}") from exc
    if not isinstance(data, dict) or not {"m", "n", "kraus"} <= data.keys():
        raise ChannelError("Kraus JSON needs keys m, n, kraus")
    m, n = int(data["m"]), int(data["n"])
    ops = []
    for j, entries in enumerate(data["kraus"]):
        flat = _pairs_to_complex(entries, f"kraus[{j}]")
        if flat.size != 2 ** (n + m):
            raise ChannelError(f"kraus[{j}] has {flat.size} entries, expected {2 ** (n + m)}")
        ops.append(flat.reshape(2**n, 2**m))
    return KrausSet(m, n, tuple(ops))


def kraus_to_json(k: KrausSet) -> str:
    return json.dumps(
        {
            "m": k.m,
            "n": k.n,
            "kraus": [[[float(z.real), float(z.imag)] for z in op.reshape(-1)] for op in k.ops],
        }
    )


__all__ = [
    "ChannelError",
    "KrausSet",
    "choi_of",
    "completeness_residual",
    "env_qubits",
    "kraus_to_isometry",
    "kraus_to_json",
    "parse_kraus",
    "random_kraus",
    "synthesize_channel",
]
