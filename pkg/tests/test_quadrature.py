import math

import pytest

from boundcount import make_builtin
from boundcount.errors import NotIntegrableError
from boundcount.quadrature import Moment, integrate, integrate_function, tail_radius


@pytest.mark.parametrize("kind, moment, expected", [
    ("squarewell", Moment.SqrtAbsV, 3.0),
    ("squarewell", Moment.R_AbsV, 4.5),
    ("exponential", Moment.SqrtAbsV, 6.0),
    ("exponential", Moment.R_AbsV, 9.0),
    ("poschlteller", Moment.SqrtAbsV, 1.5 * math.pi),
    ("poschlteller", Moment.AbsV, 9.0),
    ("hulthen", Moment.R_AbsV, math.pi ** 2 / 6 * 9.0),
    ("hulthen", Moment.SqrtAbsV, 3.0 * math.pi),
    ("yukawa", Moment.R_AbsV, 9.0),
    ("yukawa", Moment.SqrtAbsV, 3.0 * math.sqrt(2 * math.pi)),
])
def test_moments_match_closed_forms(kind, moment, expected):
    assert integrate(make_builtin(kind, 3.0), moment) == pytest.approx(expected, rel=1e-9)


def test_stis_moments():
    g, a = 4.0, 99.0
    pot = make_builtin("stis", g, 1.0, a)
    L = math.log1p(a)
    assert integrate(pot, Moment.SqrtAbsV) == pytest.approx(g * L, rel=1e-10)
    assert integrate(pot, Moment.AbsV) == pytest.approx(g * g * a / (1 + a), rel=1e-10)


def test_partial_ranges_add_up():
    pot = make_builtin("exponential", 2.0)
    whole = integrate(pot, Moment.SqrtAbsV)
    parts = integrate(pot, Moment.SqrtAbsV, 0.0, 1.3) + integrate(pot, Moment.SqrtAbsV, 1.3)
    assert parts == pytest.approx(whole, rel=1e-10)


@pytest.mark.parametrize("kind", ["hulthen", "yukawa"])
def test_divergent_moment_raises(kind):
    with pytest.raises(NotIntegrableError):
        integrate(make_builtin(kind, 2.0), Moment.AbsV)


def test_integrate_function_on_singular_potential():
    pot = make_builtin("yukawa", 2.0)
    # int r^2 |V| = g^2 int r e^{-r} = g^2
    value = integrate_function(pot, lambda r: r * r * abs(float(pot(r))))
    assert value == pytest.approx(4.0, rel=1e-8)


def test_tail_radius_bounds_the_neglected_phase():
    pot = make_builtin("exponential", 5.0)
    r_t = tail_radius(pot)
    rest = integrate(pot, Moment.SqrtAbsV, r_t)
    assert rest <= 1e-6 * integrate(pot, Moment.SqrtAbsV)


def test_rejects_bad_tolerance_and_range():
    pot = make_builtin("exponential", 1.0)
    with pytest.raises(ValueError):
        integrate(pot, Moment.SqrtAbsV, rel_tol=0.5)
    with pytest.raises(ValueError):
        integrate(pot, Moment.SqrtAbsV, 2.0, 1.0)
