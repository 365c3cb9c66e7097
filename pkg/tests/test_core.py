import math
import pickle

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sqc_lab.core import (DEFAULT_TOLERANCE, INF, PlusInfinity, RngSeed, Tolerance, as_point, convex_combination,
                          ext_max, is_inf, sqc_rhs, squared_distance, to_extended)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
unit_open = st.floats(min_value=1e-6, max_value=1 - 1e-6)


def test_inf_is_singleton_and_survives_pickle():
    assert PlusInfinity() is INF
    assert pickle.loads(pickle.dumps(INF)) is INF
    assert repr(INF) == "INF" and str(INF) == "+inf"


@given(finite)
def test_inf_orders_above_every_real(x):
    assert INF > x and x < INF and not INF < x
    assert INF >= x and max(x, INF) is INF


def test_inf_refuses_arithmetic():
    for op in (lambda: INF + 1, lambda: 1 - INF, lambda: INF * 2, lambda: -INF):
        with pytest.raises(TypeError):
            op()


def test_to_extended():
    assert to_extended(np.inf) is INF
    assert to_extended(2.5) == 2.5
    for bad in (np.nan, -np.inf):
        with pytest.raises(ValueError):
            to_extended(bad)
    assert is_inf(INF) and not is_inf(math.inf)


def test_ext_max():
    assert ext_max(1.0, INF) is INF
    assert ext_max(INF, -3.0) is INF
    assert ext_max(1.0, 2.0) == 2.0


def test_as_point_validates_and_is_read_only():
    p = as_point([1, 2])
    assert p.dtype == float and p.shape == (2,)
    with pytest.raises(ValueError):
        p[0] = 3.0
    with pytest.raises(ValueError):
        as_point([[1, 2]])
    with pytest.raises(ValueError):
        as_point([np.nan])
    with pytest.raises(ValueError):
        as_point([1.0], dim=2)
    with pytest.raises(ValueError):
        as_point([])


def test_tolerance_bounds_and_slack():
    assert DEFAULT_TOLERANCE.slack(0.0) == pytest.approx(2e-9)
    assert DEFAULT_TOLERANCE.slack(1e3) == pytest.approx(1e-9 + 1e-6)
    np.testing.assert_allclose(DEFAULT_TOLERANCE.slack(np.array([0.0, -10.0])), [2e-9, 1.1e-8])
    with pytest.raises(ValueError):
        Tolerance(abs_eps=1e-2)
    with pytest.raises(ValueError):
        Tolerance(rel_eps=-1.0)
    with pytest.raises(ValueError):
        Tolerance(min_pair_distance=0.0)


def test_rng_streams_are_keyed_and_reproducible():
    a = RngSeed(7).generator(1, 2).random(5)
    b = RngSeed(7).generator(1, 2).random(5)
    c = RngSeed(7).generator(1, 3).random(5)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    with pytest.raises(ValueError):
        RngSeed(-1)


@given(st.lists(finite, min_size=3, max_size=3), st.lists(finite, min_size=3, max_size=3), unit_open)
def test_convex_combination_lies_on_segment(x, y, t):
    z = convex_combination(x, y, t)
    x, y = np.array(x), np.array(y)
    # distances along the segment add up
    d = math.sqrt(squared_distance(x, y))
    assert math.sqrt(squared_distance(x, z)) + math.sqrt(squared_distance(z, y)) == pytest.approx(d, abs=1e-6)
    assert not z.flags.writeable


def test_convex_combination_rejects_bad_input():
    with pytest.raises(ValueError):
        convex_combination([0.0], [1.0, 2.0], 0.5)
    for t in (0.0, 1.0, 1.5):
        with pytest.raises(ValueError):
            convex_combination([0.0], [1.0], t)


@given(finite, finite, st.floats(min_value=1e-3, max_value=10), unit_open, st.floats(min_value=0, max_value=100))
def test_sqc_rhs_never_exceeds_the_larger_value(fx, fy, gamma, t, d2):
    rhs = sqc_rhs(fx, fy, gamma, t, d2)
    assert rhs <= max(fx, fy)
    assert rhs == pytest.approx(max(fx, fy) - 0.5 * gamma * (1 - t) * t * d2)


def test_sqc_rhs_absorbs_infinity():
    assert sqc_rhs(INF, 0.0, 2.0, 0.5, 1.0) is INF
    assert sqc_rhs(0.0, INF, 2.0, 0.5, 1.0) is INF
    with pytest.raises(ValueError):
        sqc_rhs(0.0, 0.0, 0.0, 0.5, 1.0)
    with pytest.raises(ValueError):
        sqc_rhs(0.0, 0.0, 1.0, 1.0, 1.0)
