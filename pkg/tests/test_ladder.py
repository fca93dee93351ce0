import math

import numpy as np
import pytest

from boundcount import make_builtin
from boundcount.ladder import (LadderDirection, check_ladder_sandwich, ladder_lower,
                               ladder_potential, ladder_upper, trace_down, trace_up)


def test_square_well_ladders():
    g = 10.0
    pot = make_builtin("squarewell", g)
    up_trace, up = ladder_upper(pot)
    down_trace, down = ladder_lower(pot)
    q = 1 - math.pi / (2 * g)
    h = math.pi / (2 * g)
    assert up_trace.q == pytest.approx(q)
    assert np.allclose(np.diff(up_trace.radii), h)
    # J = last index with j h < q
    J = math.ceil(q / h) - 1
    assert up_trace.J == J and up.bound == (J + 1) // 2 + 1 == 4
    assert down.bound == 2
    assert not up.boundary and not down.boundary


def test_stis_ladder_bounds_bracket_exact():
    pot = make_builtin("stis", 100.0, 1.0, 1.0)
    _, up = ladder_upper(pot)
    _, down = ladder_lower(pot)
    assert (down.bound, up.bound) == (21, 23)  # exact N = 22


def test_increasing_ladder_needs_regular_origin():
    pot = make_builtin("hulthen", 5.0)
    trace, lim = ladder_upper(pot)
    assert trace is None and not lim.applicable
    with pytest.raises(ValueError):
        trace_up(pot, 1.0)
    trace, lim = ladder_lower(pot)
    assert trace is not None and lim.applicable


@pytest.mark.parametrize("kind, alpha", [("squarewell", None), ("poschlteller", None),
                                         ("exponential", None), ("stis", 100.0)])
@pytest.mark.parametrize("g", [3.0, 10.0, 40.0])
def test_sandwich_and_ladder_counts(kind, alpha, g):
    pot = make_builtin(kind, g, 1.0, alpha)
    for builder in (ladder_upper, ladder_lower):
        trace, _ = builder(pot)
        chk = check_ladder_sandwich(pot, trace)
        assert chk.ok, (trace.direction, chk.worst)
        if trace.direction is LadderDirection.UP:
            assert chk.ladder_count == chk.expected_count
        else:
            assert chk.ladder_count >= chk.expected_count


def test_sandwich_for_singular_decreasing_ladder():
    pot = make_builtin("yukawa", 8.0)
    trace, _ = ladder_lower(pot)
    assert check_ladder_sandwich(pot, trace).ok


def test_ladder_potential_shape():
    pot = make_builtin("poschlteller", 6.0)
    trace, _ = ladder_upper(pot)
    edges, values = ladder_potential(pot, trace)
    assert edges[0] == 0.0 and edges[-1] == pytest.approx(trace.q)
    assert np.all(np.diff(edges) > 0)
    assert np.all(np.diff(values) >= 0)


def test_trace_rows_and_degenerate_anchor():
    pot = make_builtin("exponential", 5.0)
    trace = trace_down(pot, 2.0)
    rows = trace.rows()
    assert rows[0][1] == 2.0 and rows[-1][1] <= 0.0
    assert math.isnan(rows[-1][2])
    empty = trace_down(pot, 0.0)
    assert empty.bound == 0


def test_weak_potential_ladders_short_circuit():
    pot = make_builtin("exponential", 0.5)
    assert ladder_upper(pot)[1].bound == 0
    assert ladder_lower(pot)[1].bound == 0
