"""Scheme selection."""

from __future__ import annotations

from .bounds import RegimeError
from .ccd import synthesize_ccd
from .circuit import Circuit
from .csd import synthesize_csd
from .knill import synthesize_knill
from .linalg import Isometry
from .report import SynthesisReport
from .smallcase import synthesize_small
from .stateprep import prepare_state

SCHEME_CHOICES = ("auto", "ccd", "csd", "knill", "sp", "small", "all")


def _sp(v: Isometry):
    return prepare_state(v.matrix[:, 0])


_RUNNERS = {
    "ccd": synthesize_ccd,
    "csd": synthesize_csd,
    "knill": synthesize_knill,
    "sp": _sp,
    "small": synthesize_small,
}


def applicable(scheme: str, m: int, n: int) -> bool:
    if scheme == "ccd":
        return True
    if scheme == "csd":
        return m >= 2
    if scheme == "knill":
        return n >= 2
    if scheme == "sp":
        return m == 0
    if scheme == "small":
        return n <= 4
    raise ValueError(f"unknown scheme {scheme!r}")


def choose_scheme(m: int, n: int) -> str:
    """Fixed dispatch table: small cases, then state preparation, CSD near m = n, else CCD."""
    if n <= 4:
        return "small"
    if m == 0:
        return "sp"
    if m >= n - 1 and m >= 2:
        return "csd"
    return "ccd"


def auto_synthesize(v: Isometry) -> tuple[Circuit, SynthesisReport]:
    return _RUNNERS[choose_scheme(v.m, v.n)](v)


def synthesize(v: Isometry, scheme: str = "auto") -> tuple[Circuit, SynthesisReport]:
    if scheme == "auto":
        return auto_synthesize(v)
    if scheme == "all":
        results = [_RUNNERS[s](v) for s in _RUNNERS if applicable(s, v.m, v.n)]
        # ties go to the earlier scheme in the table, which starts with ccd
        return min(results, key=lambda r: r[1].cnot_count)
    if scheme not in _RUNNERS:
        raise ValueError(f"unknown scheme {scheme!r}")
    if not applicable(scheme, v.m, v.n):
        raise RegimeError(f"scheme {scheme} does not apply to m={v.m}, n={v.n}")
    return _RUNNERS[scheme](v)


__all__ = ["SCHEME_CHOICES", "applicable", "auto_synthesize", "choose_scheme", "synthesize"]
