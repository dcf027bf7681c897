"""Parameter counts, CNOT lower bounds and per-scheme upper-bound formulas.

Everything is evaluated in exact integer or rational arithmetic, so golden
values compare bit-exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

# parameter bookkeeping behind the isometry lower bound
PARAMS_PER_SINGLE_QUBIT_GATE = 3
PARAMS_PER_FRESH_QUBIT = 2
PARAMS_PER_CNOT = 4

# smallest known counts for m -> n <= 4, keyed by (m, n)
SMALL_CASE_COUNTS = {
    (0, 2): 1, (0, 3): 3, (0, 4): 8,
    (1, 2): 2, (1, 3): 9, (1, 4): 22,
    (2, 2): 3, (2, 3): 14, (2, 4): 54,
    (3, 3): 20, (3, 4): 73,
    (4, 4): 100,
}

SCHEMES = ("ccd", "csd", "knill", "sp", "small")


class RegimeError(ValueError):
    """Raised when a formula or scheme is queried outside its validity range."""


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _check_mn(m: int, n: int) -> None:
    if m < 0 or n < 0 or m > n:
        raise RegimeError(f"need 0 <= m <= n, got m={m}, n={n}")


def param_count(kind: str, m: int, n: int) -> int:
    """Real parameters of an m -> n isometry (``iso``) or a CPTP map (``cptp``)."""
    if kind == "iso":
        _check_mn(m, n)
        return 2 ** (n + m + 1) - 4**m - 1
    if kind == "cptp":
        if m < 0 or n < 0:
            raise RegimeError(f"need m, n >= 0, got m={m}, n={n}")
        return 4 ** (n + m) - 4**m
    raise ValueError(f"unknown parameter kind {kind!r}")


def lower_bound_iso(m: int, n: int) -> int:
    _check_mn(m, n)
    return max(0, _ceil(Fraction(2 ** (n + m + 1) - 4**m - 2 * n - m - 1, 4)))


def lower_bound_channel(m: int, n: int) -> int:
    if m < 0 or n < 0:
        raise RegimeError(f"need m, n >= 0, got m={m}, n={n}")
    return max(0, _ceil(Fraction(4**m * (4**n - 1), 4) - Fraction(3 * n, 4)))


def mcg_budget(m: int, n: int) -> int:
    """Number of multi-controlled gates the column-by-column scheme may need."""
    if m < 1 or m > n:
        raise RegimeError(f"mcg_budget needs 1 <= m <= n, got m={m}, n={n}")
    q = Fraction(2**m) * (n - Fraction(m, 2) - 1) - n + m + 1
    assert q.denominator == 1
    return int(q)


def mcg_general_count(n: int) -> int:
    """CNOT bound for an (n-1)-controlled arbitrary single-qubit gate, n >= 3."""
    return 16 * n * n - 60 * n + 42


def mcg_su2_count(n: int) -> int:
    """CNOT bound for an (n-1)-controlled SU(2) gate, n >= 8."""
    return 28 * n - 88 if n % 2 == 0 else 28 * n - 92


def unitary_count(n: int) -> Fraction:
    """Optimized quantum Shannon decomposition count for an n-qubit unitary."""
    if n == 1:
        return Fraction(0)
    return Fraction(23, 48) * 4**n - Fraction(3, 2) * 2**n + Fraction(4, 3)


def csd_count(m: int, n: int) -> Fraction:
    return (
        Fraction(23, 144) * (4**m + 2 * 4**n)
        - Fraction(2**m, 2)
        - 2**n
        + Fraction(m - n + 4, 3)
    )


@lru_cache(maxsize=None)
def stateprep_count(n: int) -> int:
    """Recursive halving count: SP on the top half, a CNOT ladder, two half-size isometries."""
    if n < 1:
        raise RegimeError(f"state preparation needs n >= 1, got {n}")
    base = {1: 0, 2: 1, 3: 3}
    if n in base:
        return base[n]
    a, b = n // 2, n - n // 2
    total = stateprep_count(a) + a + csd_count(a, a) + csd_count(a, b) - 1
    assert total.denominator == 1
    return int(total)


def stateprep_odd_count(n: int) -> Fraction:
    """Closed form for odd n >= 5."""
    return Fraction(23, 24) * 2**n - Fraction(3, 2) * 2 ** ((n + 1) // 2) + Fraction(4, 3)


def _ceil_minus_sqrt(r: Fraction, s: int) -> int:
    """Exact ceil(r - sqrt(s)) for a rational r and a non-negative integer s."""
    p, q = r.numerator, r.denominator
    # floor((sqrt(q^2 s) - p) / q) only depends on isqrt(q^2 s)
    t = math.isqrt(q * q * s)
    return -((t - p) // q)


def ccd_count(m: int, n: int) -> int:
    """Closed-form column-by-column count, valid for n >= 8."""
    r = (
        2 ** (m + n)
        - Fraction(2**n, 24)
        + 2**m * (28 * n * n + m * (44 - 14 * n) - 117 * n + 88)
        - 28 * n * n
        + m * (28 * n - 88)
        + 117 * n
        - 87
    )
    # 2 * 2^(n/2) = sqrt(2^(n+2))
    return _ceil_minus_sqrt(r, 2 ** (n + 2))


def knill_count(m: int, n: int) -> Fraction:
    lo, hi = n // 2, n - n // 2
    return (
        (2**m + 1) * (unitary_count(lo) + unitary_count(hi))
        + 2 ** (m + 1) * stateprep_count(lo)
        + mcg_general_count(n) * 2**m
    )


def upper_bound(scheme: str, m: int, n: int) -> Fraction:
    """Evaluate a scheme's CNOT upper-bound formula; raises RegimeError out of range."""
    _check_mn(m, n)
    if scheme == "ccd":
        if n < 8:
            raise RegimeError("ccd closed form needs n >= 8")
        return Fraction(ccd_count(m, n))
    if scheme == "csd":
        if m < 2:
            raise RegimeError("csd formula needs 2 <= m <= n")
        return csd_count(m, n)
    if scheme == "knill":
        if n < 5:
            raise RegimeError("knill formula needs n >= 5")
        return knill_count(m, n)
    if scheme == "sp":
        if m != 0 or n < 1:
            raise RegimeError("sp formula needs m = 0 and n >= 1")
        if n % 2 == 1 and n >= 5:
            return stateprep_odd_count(n)
        return Fraction(stateprep_count(n))
    if scheme == "small":
        if (m, n) not in SMALL_CASE_COUNTS:
            raise RegimeError("small-case table covers 2 <= n <= 4")
        return Fraction(SMALL_CASE_COUNTS[(m, n)])
    raise ValueError(f"unknown scheme {scheme!r}")


def upper_bound_or_none(scheme: str, m: int, n: int) -> Fraction | None:
    try:
        return upper_bound(scheme, m, n)
    except RegimeError:
        return None


__all__ = [
    "PARAMS_PER_CNOT",
    "PARAMS_PER_FRESH_QUBIT",
    "PARAMS_PER_SINGLE_QUBIT_GATE",
    "RegimeError",
    "SCHEMES",
    "SMALL_CASE_COUNTS",
    "ccd_count",
    "csd_count",
    "knill_count",
    "lower_bound_channel",
    "lower_bound_iso",
    "mcg_budget",
    "mcg_general_count",
    "mcg_su2_count",
    "param_count",
    "stateprep_count",
    "stateprep_odd_count",
    "unitary_count",
    "upper_bound",
    "upper_bound_or_none",
]
