import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qecsim.analysis import (
    REFERENCE_DEGRADING_COUNT,
    approx_params,
    encoded_noqec_fidelity,
    reference_locations,
    physical_fidelity,
    qec_period_fidelity,
    unit_failure,
)
from qecsim.errors import ConfigurationError

mpmath.mp.dps = 50

rates = st.floats(0.0, 0.75, allow_nan=False)
counts = st.integers(0, 5000).map(lambda k: 2 * k)


def oracle_physical(p, n):
    return (1 + (1 - mpmath.mpf(4) * p / 3) ** n) / 2


def oracle_qec(p, n, y, C, L):
    p = mpmath.mpf(p)
    failure = mpmath.mpf(C) / 3 * p * (1 - p) ** (L - 1)
    return (1 + (1 - failure) ** (n // (2 * y))) / 2


@pytest.mark.parametrize("p,n", [(1e-5, 4000), (1e-4, 1000), (1e-3, 2), (0.2, 10)])
def test_physical_against_high_precision(p, n):
    assert physical_fidelity(p, n) == pytest.approx(float(oracle_physical(p, n)), rel=1e-12)


def test_encoded_without_recovery():
    expected = (1 + (1 - mpmath.mpf(4) * 1e-4) ** 1000) / 2
    assert encoded_noqec_fidelity(1e-4, 1000) == pytest.approx(float(expected), rel=1e-12)


@pytest.mark.parametrize("y", [1, 50, 100, 200, 2000])
def test_qec_form_against_high_precision(y):
    params = approx_params(p=1e-5, n=4000, y=y)
    expected = oracle_qec(1e-5, 4000, y, REFERENCE_DEGRADING_COUNT, reference_locations(y))
    assert qec_period_fidelity(params) == pytest.approx(float(expected), rel=1e-12)


def test_default_locations():
    assert reference_locations(50) == 1148
    assert approx_params(p=0.0, n=2, y=50).locations == 1148
    assert approx_params(p=0.0, n=2, y=50, L=900).locations == 900


def test_trivial_inputs_give_one():
    assert physical_fidelity(0.0, 4000) == 1.0
    assert physical_fidelity(0.3, 0) == 1.0
    assert encoded_noqec_fidelity(0.0, 100) == 1.0
    assert qec_period_fidelity(approx_params(p=1e-3, n=4000, y=50, C=0)) == 1.0
    assert qec_period_fidelity(approx_params(p=0.0, n=4000, y=50)) == 1.0


def test_partial_unit_is_dropped():
    # 98 gates at y=50 is less than one full unit
    assert qec_period_fidelity(approx_params(p=1e-3, n=98, y=50)) == 1.0
    assert qec_period_fidelity(approx_params(p=1e-3, n=100, y=50)) < 1.0


def test_unit_failure():
    params = approx_params(p=1e-4, n=2, y=1, C=30, L=10)
    assert unit_failure(params) == pytest.approx(10 * 1e-4 * (1 - 1e-4) ** 9)


def test_encoding_without_recovery_is_worse():
    for p in (1e-5, 1e-4, 1e-3, 0.05):
        assert encoded_noqec_fidelity(p, 100) < physical_fidelity(p, 100)


@given(rates, counts)
def test_values_stay_in_range(p, n):
    for value in (physical_fidelity(p, n), encoded_noqec_fidelity(p, n)):
        assert 0.5 <= value <= 1.0


@given(rates, counts, st.integers(1, 500))
def test_qec_form_stays_in_range(p, n, y):
    value = qec_period_fidelity(approx_params(p=p, n=n, y=y))
    assert 0.5 <= value <= 1.0


@given(rates, counts)
def test_more_gates_never_help(p, n):
    assert physical_fidelity(p, n + 2) <= physical_fidelity(p, n) + 1e-15
    assert encoded_noqec_fidelity(p, n + 2) <= encoded_noqec_fidelity(p, n) + 1e-15
    longer = qec_period_fidelity(approx_params(p=p, n=n + 200, y=50))
    assert longer <= qec_period_fidelity(approx_params(p=p, n=n, y=50)) + 1e-15


def test_monotone_in_p():
    grid = np.linspace(0.0, 0.75, 301)
    for n in (2, 100, 4000):
        assert np.all(np.diff([physical_fidelity(p, n) for p in grid]) <= 1e-15)
    for n in (2, 100):
        assert np.all(np.diff([encoded_noqec_fidelity(p, n) for p in grid]) <= 1e-15)


def test_qec_form_is_monotone_up_to_one_over_l():
    # the one-fault probability peaks at p = 1/L, past which the first-order form no longer applies
    L = reference_locations(50)
    grid = np.linspace(0.0, 1.0 / L, 200)
    values = [qec_period_fidelity(approx_params(p=p, n=4000, y=50)) for p in grid]
    assert np.all(np.diff(values) <= 1e-15)


@pytest.mark.parametrize("p,n", [(0.8, 10), (-1e-3, 10), (1e-3, 3), (1e-3, -2)])
def test_bad_inputs(p, n):
    with pytest.raises(ConfigurationError):
        physical_fidelity(p, n)
    with pytest.raises(ConfigurationError):
        encoded_noqec_fidelity(p, n)


def test_qec_form_rejects_bad_params():
    with pytest.raises(ConfigurationError):
        approx_params(p=1e-3, n=3, y=50)
    with pytest.raises(ConfigurationError):
        approx_params(p=1e-3, n=2, y=0)
    with pytest.raises(ConfigurationError):
        approx_params(p=1e-3, n=2, y=1, C=10, L=3)
    with pytest.raises(ConfigurationError):
        qec_period_fidelity(approx_params(p=0.9, n=2, y=1))
