import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isosynth.bounds import RegimeError, knill_count
from isosynth.knill import knill_factors, synthesize_knill
from isosynth.linalg import Isometry, random_isometry

seeds = st.integers(0, 2**32 - 1)


def product(factors, dim):
    out = np.eye(dim, dtype=complex)
    for theta, chi in factors:
        out = out @ (np.eye(dim) + (np.exp(1j * theta) - 1) * np.outer(chi, chi.conj()))
    return out


@given(seeds, st.integers(1, 4), st.data())
@settings(max_examples=25, deadline=None)
def test_factors_are_rank_one_and_extend(seed, n, data):
    m = data.draw(st.integers(0, n))
    v = random_isometry(m, n, seed)
    factors = knill_factors(v)
    assert len(factors) <= 2**m
    for theta, chi in factors:
        assert abs(np.linalg.norm(chi) - 1) < 1e-12
    # each factor is I + (e^{i theta} - 1)|chi><chi|; their product carries |i> to column i
    u = product(factors, 2**n)
    assert np.linalg.norm(u[:, : 2**m] - v.matrix) < 1e-9


def test_identity_needs_no_factors():
    assert knill_factors(Isometry(np.eye(4, 2))) == []


@pytest.mark.parametrize("m,n", [(0, 2), (1, 2), (1, 3), (2, 3), (0, 4), (2, 4), (1, 5)])
def test_synthesize_knill(m, n):
    _, report = synthesize_knill(random_isometry(m, n, 5))
    assert report.residual < 1e-9
    if n >= 5:
        assert report.cnot_count <= knill_count(m, n)


def test_knill_regime():
    with pytest.raises(RegimeError):
        synthesize_knill(random_isometry(0, 1, 0))
