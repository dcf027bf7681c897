"""Synthesis reports and the shared finish-and-verify step."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from fractions import Fraction

from .bounds import lower_bound_iso, upper_bound_or_none
from .circuit import Circuit, counts, merge_single_qubit, verify_isometry
from .linalg import ACCEPT_TOL, Isometry


class VerificationError(RuntimeError):
    """Raised when a synthesized circuit misses its target isometry."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class SynthesisReport:
    scheme: str
    cnot_count: int
    single_qubit_count: int
    lower_bound: int
    upper_bound: Fraction | None
    residual: float
    mcg_count: int | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        ub = self.upper_bound
        d["upper_bound"] = None if ub is None else (int(ub) if ub.denominator == 1 else float(ub))
        if self.mcg_count is None:
            d.pop("mcg_count")
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def finish(
    scheme: str,
    circuit: Circuit,
    v: Isometry,
    bound_scheme: str | None = None,
    mcg_count: int | None = None,
    tol: float = ACCEPT_TOL,
) -> tuple[Circuit, SynthesisReport]:
    """Peephole-merge single-qubit gates, verify against ``v`` and build the report."""
    if not circuit.lowered:
        raise ValueError("finish expects a lowered circuit")
    c = merge_single_qubit(circuit)
    residual = verify_isometry(c, v)
    if not residual <= tol:
        raise VerificationError(f"{scheme}: residual {residual:.3e} exceeds {tol:.0e}", residual)
    cx, sq = counts(c)
    report = SynthesisReport(
        scheme=scheme,
        cnot_count=cx,
        single_qubit_count=sq,
        lower_bound=lower_bound_iso(v.m, v.n),
        upper_bound=upper_bound_or_none(bound_scheme or scheme, v.m, v.n),
        residual=residual,
        mcg_count=mcg_count,
    )
    return c, report


__all__ = ["SynthesisReport", "VerificationError", "finish"]
