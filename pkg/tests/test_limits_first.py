import math

import numpy as np
import pytest

from boundcount import LimitName, make_builtin
from boundcount.limits_first import (first_limits, first_lower_regular, first_lower_regular_q,
                                     first_lower_singular, first_lower_tq, first_lower_ts,
                                     first_upper, first_upper_regular, lower_regular_at)


def test_hulthen_closed_forms():
    g = 2.5
    pot = make_builtin("hulthen", g)
    lt = math.log(math.tan(math.pi / (4 * g))) / math.pi
    assert first_upper(pot).raw == pytest.approx(g - lt + 0.5, rel=1e-9)
    assert first_lower_singular(pot).raw == pytest.approx(g + lt - 1.5, rel=1e-9)
    assert first_upper(pot).bound == 3
    assert first_lower_singular(pot).bound == 1


def test_square_well_first_type():
    g = 10.0
    pot = make_builtin("squarewell", g)
    assert first_upper(pot).raw == pytest.approx(g / math.pi + 0.5, rel=1e-10)
    assert first_lower_regular_q(pot).raw == pytest.approx(g / math.pi - 1, rel=1e-10)
    assert first_lower_regular(pot, s=1.0).raw == pytest.approx(g / math.pi - 0.5, rel=1e-10)


def test_poschl_teller_and_exponential_regular_forms():
    pt = make_builtin("poschlteller", 10.0)
    lg = math.log(math.sin(math.pi / 20)) / (2 * math.pi)
    assert first_upper_regular(pt).raw == pytest.approx(5 - lg + 0.5, rel=1e-9)
    assert first_lower_regular_q(pt).raw == pytest.approx(5 + lg - 1, rel=1e-9)
    ex = make_builtin("exponential", 10.0)
    le = math.log(40 / math.pi) / (2 * math.pi)
    assert first_upper_regular(ex).raw == pytest.approx(20 / math.pi + le + 0.5, rel=1e-9)
    lo = first_lower_regular_q(ex)
    assert lo.raw == pytest.approx(20 / math.pi - le - 1, rel=1e-9)
    assert lo.bound == 5 and lo.strict


def test_regular_upper_is_weaker_than_p_form():
    for kind in ("poschlteller", "exponential", "squarewell"):
        pot = make_builtin(kind, 8.0)
        assert first_upper(pot).raw <= first_upper_regular(pot).raw + 1e-12


def test_default_s_maximizes_regular_lower():
    pot = make_builtin("exponential", 10.0)
    best = first_lower_regular(pot).raw
    scan = [lower_regular_at(pot, s) for s in np.linspace(0.2, 12.0, 64)]
    assert best >= max(scan) - 1e-9
    assert best == pytest.approx(lower_regular_at(pot, 2 * math.log(40)), rel=1e-9)


def test_regular_forms_inapplicable_for_singular():
    pot = make_builtin("yukawa", 5.0)
    assert not first_upper_regular(pot).applicable
    assert not first_lower_regular(pot).applicable
    assert first_lower_ts(pot).applicable
    assert first_lower_tq(pot).applicable


def test_no_bound_state_short_circuit():
    pot = make_builtin("squarewell", 0.5)
    for lim in first_limits(pot):
        assert lim.bound == 0 or not lim.applicable
        assert not lim.boundary


def test_singular_lower_needs_p_below_q():
    # just past Phi = pi/2 the radii cross (q < p) and the estimate does not apply
    pot = make_builtin("poschlteller", 1.0000001)
    lim = first_lower_singular(pot)
    assert not lim.applicable
    assert first_upper(pot).bound == 0


def test_first_limits_order_and_names():
    names = [lim.name for lim in first_limits(make_builtin("stis", 10.0, 1.0, 1.0))]
    assert names == [LimitName.FIRST_UPPER, LimitName.FIRST_UPPER_REGULAR,
                     LimitName.FIRST_LOWER_REGULAR, LimitName.FIRST_LOWER_REGULAR_Q,
                     LimitName.FIRST_LOWER_SINGULAR, LimitName.FIRST_LOWER_TS,
                     LimitName.FIRST_LOWER_TQ]
