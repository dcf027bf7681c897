"""Acceptance criteria, one test each; a pass/fail line per criterion is printed at the end of the run."""

from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from isosynth import bounds
from isosynth.bounds import (
    ccd_count,
    csd_count,
    lower_bound_iso,
    mcg_budget,
    mcg_general_count,
    upper_bound_or_none,
)
from isosynth.ccd import synthesize_ccd
from isosynth.channels import choi_of, random_kraus, synthesize_channel
from isosynth.circuit import Circuit, Diagonal, Mcg, SingleQubit, Ucg, Ucr, Unitary, counts, unitary_of
from isosynth.csd import synthesize_csd
from isosynth.dispatcher import applicable, synthesize
from isosynth.knill import synthesize_knill
from isosynth.linalg import ACCEPT_TOL, embed, haar_unitary, random_isometry, random_state
from isosynth.primitives import (
    lower_diagonal,
    lower_mc_not,
    lower_mcg_general,
    lower_mcg_su2,
    lower_ucg_up_to_diagonal,
    lower_ucr,
)
from isosynth.smallcase import synthesize_small
from isosynth.stateprep import prepare_state

RUNNERS = {
    "ccd": synthesize_ccd,
    "csd": synthesize_csd,
    "knill": synthesize_knill,
    "sp": lambda v: prepare_state(v.matrix[:, 0]),
    "small": synthesize_small,
}


@contextmanager
def criterion(log, number: int, title: str):
    notes: list[str] = []
    try:
        yield notes
    except BaseException:
        log.append(f"criterion {number} FAIL: {title} {'; '.join(notes)}".rstrip())
        raise
    log.append(f"criterion {number} PASS: {title} {'; '.join(notes)}".rstrip())


def _exact(circuit: Circuit, target: np.ndarray) -> float:
    return float(np.linalg.norm(unitary_of(circuit) - target))


def test_criterion_1_correctness_oracle(acceptance_log):
    with criterion(acceptance_log, 1, "every applicable scheme reproduces 25 random isometries per (m, n), n <= 6") as notes:
        worst = 0.0
        runs = 0
        for n in range(1, 7):
            for m in range(n + 1):
                for seed in range(25):
                    v = random_isometry(m, n, seed)
                    for name, run in RUNNERS.items():
                        if name == "knill" and n < 2:
                            continue
                        if not applicable(name, m, n):
                            continue
                        _, report = run(v)
                        worst = max(worst, report.residual)
                        runs += 1
                        assert report.residual <= ACCEPT_TOL, (name, m, n, seed, report.residual)
        notes.append(f"{runs} syntheses, worst residual {worst:.2e}")


GOLDEN = {
    (0, 2): 1, (0, 3): 3, (0, 4): 8, (1, 2): 2, (1, 3): 9, (2, 3): 14,
    (3, 3): 20, (1, 4): 22, (2, 4): 54, (3, 4): 73, (4, 4): 100,
}


def test_criterion_2_small_case_golden_counts(acceptance_log):
    with criterion(acceptance_log, 2, "small-case counts equal the known table") as notes:
        for (m, n), expected in sorted(bounds.SMALL_CASE_COUNTS.items()):
            seen = set()
            for seed in range(10):
                _, report = synthesize(random_isometry(m, n, 100 + seed))
                assert report.cnot_count <= expected, (m, n, report.cnot_count)
                seen.add(report.cnot_count)
            if (m, n) in GOLDEN:
                assert seen == {GOLDEN[(m, n)]}, (m, n, seen)
        notes.append(", ".join(f"({m},{n})={c}" for (m, n), c in sorted(GOLDEN.items())))


def test_criterion_3_csd_closed_form(acceptance_log):
    with criterion(acceptance_log, 3, "CSD counts equal the closed form") as notes:
        for m, n, expected in [(2, 2, 3), (2, 3, 14), (3, 3, 20), (3, 4, 73), (4, 4, 100)]:
            assert csd_count(m, n) == expected
            for seed in range(5):
                _, report = synthesize_csd(random_isometry(m, n, seed))
                assert report.cnot_count == expected, (m, n, report.cnot_count)
            notes.append(f"({m},{n})={expected}")


def test_criterion_4_ccd_regime_bound(acceptance_log):
    with criterion(acceptance_log, 4, "CCD at n = 8 stays within the closed form and the MCG budget") as notes:
        assert ccd_count(0, 8) == 215
        for m in (0, 1, 2):
            _, report = synthesize_ccd(random_isometry(m, 8, 7))
            limit = ccd_count(m, 8)
            assert report.residual <= ACCEPT_TOL
            assert report.cnot_count <= limit, (m, report.cnot_count, limit)
            if m >= 1:
                assert report.mcg_count <= mcg_budget(m, 8)
            notes.append(f"(m={m}) {report.cnot_count} <= {limit}")


def _ucg_target(g: Ucg, d: Diagonal, n: int) -> np.ndarray:
    return embed(g.matrix(), list(g.qubits), n), embed(np.diag(d.values()), list(d.qubits), n)


def test_criterion_5_primitive_counts(acceptance_log, rng):
    with criterion(acceptance_log, 5, "primitive gate counts with exact matrices") as notes:
        for k in range(6):
            n = k + 1
            g = Ucg(tuple(range(1, n)), 0, tuple(haar_unitary(2, rng) for _ in range(2**k)))
            c, d = lower_ucg_up_to_diagonal(g)
            want, diag = _ucg_target(g, d, n)
            assert counts(c)[0] == 2**k - 1
            assert np.linalg.norm(diag @ unitary_of(Circuit(n, c.ops)) - want) < 1e-9
            r = Ucr("y", tuple(range(1, n)), 0, tuple(rng.uniform(-np.pi, np.pi, 2**k)))
            cr = lower_ucr(r)
            assert counts(cr)[0] == (2**k if k else 0)
            assert _exact(Circuit(n, cr.ops), embed(r.as_ucg().matrix(), list(r.qubits), n)) < 1e-9
        for q in range(1, 6):
            dg = Diagonal(tuple(range(q)), tuple(rng.uniform(-np.pi, np.pi, 2**q)))
            cd = lower_diagonal(dg)
            assert counts(cd)[0] <= 2**q - 2
            got = unitary_of(Circuit(q, cd.ops))
            ph = np.vdot(got.diagonal(), dg.values())
            assert np.linalg.norm(got * (ph / abs(ph)) - np.diag(dg.values())) < 1e-9
        notes.append("UCG 2^k-1, UCR 2^k, diagonal <= 2^q-2")

        tof = lower_mc_not(2, 3)
        assert counts(tof)[0] == 6
        x = np.array([[0, 1], [1, 0]])
        mcx3 = Mcg(((1, 1), (2, 1)), 0, x)
        assert _exact(tof, unitary_of(Circuit(3, [mcx3]))) < 1e-9
        tod = lower_mc_not(2, 3, up_to_diagonal=True)
        assert counts(tod)[0] == 3
        rel = unitary_of(tod) @ unitary_of(Circuit(3, [mcx3])).conj().T
        assert np.linalg.norm(rel - np.diag(np.diag(rel))) < 1e-9
        # qubit c1 = 1 is bit 1, so |010> is row 2
        assert np.allclose(np.diag(rel), [1, 1, -1, 1, 1, 1, 1, 1])
        notes.append("Toffoli 6, Toffoli up to diagonal 3")

        worst_mcx = []
        for n in range(5, 10):
            for k in range(3, (n + 1) // 2 + 1):
                c = lower_mc_not(k, n)
                want = unitary_of(Circuit(n, [Mcg(tuple((q, 1) for q in range(1, k + 1)), 0, x)]))
                assert counts(c)[0] <= 8 * k - 6, (k, n, counts(c)[0])
                assert _exact(c, want) < 1e-9
                worst_mcx.append(counts(c)[0] - (8 * k - 6))
        notes.append(f"C_k(X) within 8k-6 (max slack use {max(worst_mcx)})")

        for n in range(3, 7):
            g = Mcg(tuple((q, 1) for q in range(1, n)), 0, haar_unitary(2, rng))
            c = lower_mcg_general(g, n)
            assert counts(c)[0] <= mcg_general_count(n)
            assert _exact(c, unitary_of(Circuit(n, [g]))) < 1e-9
        for n, limit in [(8, 136), (9, 160)]:
            u = haar_unitary(2, rng)
            u = u / np.sqrt(np.linalg.det(u))
            g = Mcg(tuple((q, 1) for q in range(1, n)), 0, u)
            c = lower_mcg_su2(g, n)
            assert counts(c)[0] <= limit, (n, counts(c)[0])
            assert _exact(c, unitary_of(Circuit(n, [g]))) < 1e-9
            notes.append(f"SU(2) MCG n={n}: {counts(c)[0]}")


def test_criterion_6_state_preparation(acceptance_log):
    with criterion(acceptance_log, 6, "state preparation counts 1/3/8/19 on 100 random states each") as notes:
        for n, expected in [(2, 1), (3, 3), (4, 8), (5, 19)]:
            worst = 0.0
            for seed in range(100):
                _, report = prepare_state(random_state(n, seed))
                assert report.cnot_count == expected, (n, report.cnot_count)
                worst = max(worst, report.residual)
            assert worst <= ACCEPT_TOL
            notes.append(f"n={n}: {expected} (residual {worst:.1e})")


def test_criterion_7_bounds_consistency(acceptance_log):
    with criterion(acceptance_log, 7, "lower bounds sit below measured counts and upper-bound formulas") as notes:
        assert [lower_bound_iso(0, 2), lower_bound_iso(2, 2), lower_bound_iso(2, 4)] == [1, 3, 26]
        checked = 0
        for n in range(2, 9):
            for m in range(0, min(n, 6) + 1):
                lb = lower_bound_iso(m, n)
                for scheme in bounds.SCHEMES:
                    ub = upper_bound_or_none(scheme, m, n)
                    if ub is not None:
                        assert Fraction(lb) <= ub, (scheme, m, n, lb, ub)
                        checked += 1
        measured = 0
        for n in range(2, 6):
            for m in range(n + 1):
                v = random_isometry(m, n, 55)
                lb = lower_bound_iso(m, n)
                for name, run in RUNNERS.items():
                    if applicable(name, m, n):
                        _, report = run(v)
                        assert lb <= report.cnot_count, (name, m, n, report.cnot_count, lb)
                        measured += 1
        notes.append(f"{checked} formula pairs, {measured} measured counts")


def test_criterion_8_channels(acceptance_log):
    with criterion(acceptance_log, 8, "Choi of synthesized channels matches the Kraus sets") as notes:
        rng = np.random.default_rng(8)
        worst = worst_env = 0.0
        for m, n in [(1, 1), (1, 2)]:
            for seed in range(20):
                count = int(rng.integers(1, 2 ** (m + n) + 1))
                k = random_kraus(m, n, count, seed)
                circuit, traced, _ = synthesize_channel(k)
                choi = choi_of(circuit, traced, m, n)
                worst = max(worst, float(np.linalg.norm(choi - choi_of(k))))
                if traced:
                    env = Circuit(circuit.width, list(circuit.ops))
                    for q in traced:
                        env.append(SingleQubit(q, haar_unitary(2, rng)))
                    if len(traced) >= 2:
                        env.append(Unitary(tuple(traced[:2]), haar_unitary(4, rng)))
                    worst_env = max(worst_env, float(np.linalg.norm(choi_of(env, traced, m, n) - choi)))
        assert worst <= ACCEPT_TOL
        assert worst_env <= 1e-12
        notes.append(f"Choi distance {worst:.1e}, environment invariance {worst_env:.1e}")


def test_criterion_9_ratio_to_lower_bound(acceptance_log):
    with criterion(acceptance_log, 9, "state preparation count / lower bound in (1, 2.6)") as notes:
        for n in (6, 7, 8):
            _, report = synthesize(random_isometry(0, n, 9))
            ratio = report.cnot_count / lower_bound_iso(0, n)
            assert 1 < ratio < 2.6, (n, ratio)
            notes.append(f"n={n}: {report.cnot_count}/{lower_bound_iso(0, n)} = {ratio:.2f}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
