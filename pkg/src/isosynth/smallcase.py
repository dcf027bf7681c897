"""Hand-tuned circuits for isometries on at most four qubits.

* m = 0: state preparation.
* 1 -> 2: a two-CNOT template (unitary completion lowered up to an input
  diagonal, which collapses to a single-qubit phase on the input wire).
* 1 -> 3, 1 -> 4, 2 -> 4: column-by-column with each multi-controlled gate
  replaced by a multiplexed gate on a few low qubits, lowered up to diagonal.
* everything else: cosine-sine decomposition.
"""

from __future__ import annotations

from .bounds import SMALL_CASE_COUNTS, RegimeError
from .ccd import column_circuit
from .circuit import Circuit
from .csd import isometry_ops
from .kak import isometry_1to2_ops
from .linalg import Isometry
from .report import SynthesisReport, finish
from .stateprep import state_ops

COLUMN_CASES = {(1, 3), (1, 4), (2, 4)}


def synthesize_small(v: Isometry) -> tuple[Circuit, SynthesisReport]:
    m, n = v.m, v.n
    if not 1 <= n <= 4:
        raise RegimeError(f"small-case synthesis covers n <= 4, got n={n}")
    qubits = list(range(n))
    mcgs = None
    if m == 0:
        c = Circuit(n, state_ops(v.matrix[:, 0], qubits))
    elif (m, n) == (1, 2):
        c = Circuit(n, isometry_1to2_ops(v.matrix, 0, 1))
    elif (m, n) in COLUMN_CASES:
        c, mcgs = column_circuit(v, low_mcg=True)
    else:
        ops, _ = isometry_ops(v.matrix, qubits)
        c = Circuit(n, ops)
    return finish("small", c, v, mcg_count=mcgs)


__all__ = ["COLUMN_CASES", "SMALL_CASE_COUNTS", "synthesize_small"]
