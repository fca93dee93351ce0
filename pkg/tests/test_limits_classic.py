import math

import pytest

from boundcount import Direction, LimitName, count_nodes, make_builtin
from boundcount.limits_classic import (bs_upper, c0_lower, c_lower, cc_upper, classic_limits,
                                       integerize, martin_upper, sufficient_one_state)


@pytest.mark.parametrize("raw, direction, bound, boundary", [
    (3.7, Direction.UPPER, 3, False),
    (3.2, Direction.LOWER, 4, False),
    (3.0 + 1e-11, Direction.UPPER, 3, True),
    (3.0 - 1e-11, Direction.UPPER, 3, True),
    (3.0 - 1e-11, Direction.LOWER, 3, True),
    (-2.3, Direction.LOWER, 0, False),
    (-1.5, Direction.UPPER, 0, False),
])
def test_integerize(raw, direction, bound, boundary):
    assert integerize(raw, direction) == (bound, boundary)


def test_square_well_classic_closed_forms():
    g = 10.0
    pot = make_builtin("squarewell", g)
    assert bs_upper(pot).raw == pytest.approx(g * g / 2, rel=1e-10)
    assert cc_upper(pot).raw == pytest.approx(2 * g / math.pi, rel=1e-10)
    assert martin_upper(pot).raw == pytest.approx(3 ** -0.25 * g, rel=1e-10)
    assert c_lower(pot).raw == pytest.approx(g / math.pi - 0.5, rel=1e-10)
    assert c0_lower(pot).raw == pytest.approx(g / math.pi - 0.5, rel=1e-10)


def test_stis_grid_row_classic_columns():
    # alpha = 1e4, g = 10: BS 821, CC 58, M 99, C 6, C0 3
    lims = {lim.name: lim for lim in classic_limits(make_builtin("stis", 10.0, 1.0, 1e4))}
    got = [lims[n].bound for n in (LimitName.BS, LimitName.CC, LimitName.M, LimitName.C,
                                   LimitName.C0)]
    assert got == [821, 58, 99, 6, 3]


@pytest.mark.parametrize("kind", ["hulthen", "yukawa"])
def test_singular_potentials_skip_m_and_c0(kind):
    lims = {lim.name: lim for lim in classic_limits(make_builtin(kind, 3.0))}
    assert not lims[LimitName.M].applicable
    assert not lims[LimitName.C0].applicable
    assert lims[LimitName.M].reason
    assert lims[LimitName.BS].applicable and lims[LimitName.C].applicable


def test_hulthen_classic_values():
    g = 2.5
    lims = {lim.name: lim for lim in classic_limits(make_builtin("hulthen", g))}
    assert lims[LimitName.CC].raw == pytest.approx(2 * g, rel=1e-10)
    assert lims[LimitName.CC].bound == 5 and lims[LimitName.CC].boundary
    assert lims[LimitName.BS].bound == 10


def test_limit_value_holds_for():
    up = cc_upper(make_builtin("squarewell", 10.0))  # bound 6
    assert up.holds_for(6) and not up.holds_for(7)
    low = c_lower(make_builtin("squarewell", 10.0))  # bound 3
    assert low.holds_for(3) and not low.holds_for(2)


def test_one_state_conditions_strong_and_weak():
    strong = sufficient_one_state(make_builtin("stis", 10.0, 1.0, 1.0))
    assert strong.any
    weak = sufficient_one_state(make_builtin("squarewell", 1.0))  # no bound state at all
    assert not weak.any


def test_one_state_rho_form_is_sufficient_only():
    # rho |V(rho)|^{1/2} = g/2 against 3 pi / 4
    assert sufficient_one_state(make_builtin("squarewell", 5.0)).rho_form
    flags = sufficient_one_state(make_builtin("squarewell", 4.0))
    assert flags.rho_form_value == pytest.approx(2.0, rel=1e-8)
    assert not flags.rho_form
    assert count_nodes(make_builtin("squarewell", 4.0)).n == 1
