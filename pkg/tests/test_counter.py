import math

import numpy as np
import pytest
from scipy.special import jn_zeros

from boundcount import count_nodes, make_builtin
from boundcount.counter import count_piecewise_constant, phase_profile, wavefunction_samples


@pytest.mark.parametrize("g", [0.5, 1.0, 1.6, 4.0, 10.0, 33.3, 200.0])
def test_square_well_count(g):
    # the m-th state appears at g = (m - 1/2) pi
    assert count_nodes(make_builtin("squarewell", g)).n == math.floor(g / math.pi + 0.5)


def test_square_well_nodes_are_exact():
    g = 10.0
    res = count_nodes(make_builtin("squarewell", g))
    # u = sin(g r) inside the well: zeros at k pi / g
    want = np.arange(1, res.n) * math.pi / g
    assert np.allclose(res.nodes[: want.size], want, rtol=1e-6)


@pytest.mark.parametrize("g", [0.9, 1.5, 3.0, 7.7, 12.0])
def test_exponential_counts_follow_bessel_zeros(g):
    # bound states appear when 2 g crosses a zero of J0
    want = int(np.sum(jn_zeros(0, 50) <= 2 * g))
    assert count_nodes(make_builtin("exponential", g)).n == want


@pytest.mark.parametrize("delta_c, n", [(1.19061, 1), (0.31026, 2), (0.13945, 3)])
def test_yukawa_critical_screening(delta_c, n):
    # literature critical screening lengths of -exp(-delta r)/r (atomic units): g^2 = 2/delta
    g = math.sqrt(2.0 / delta_c)
    assert count_nodes(make_builtin("yukawa", g * (1 - 1e-4))).n == n - 1
    assert count_nodes(make_builtin("yukawa", g * (1 + 1e-4))).n == n


def test_hulthen_thresholds_at_integer_g():
    for m in (1, 2, 7, 40):
        assert count_nodes(make_builtin("hulthen", m * (1 - 1e-6))).n == m - 1
        assert count_nodes(make_builtin("hulthen", m * (1 + 1e-6))).n == m


def test_large_count_near_threshold():
    # Poschl-Teller: N = floor((sqrt(1 + 4 g^2) + 1) / 4); N = 1000 first at g^2 = (3999^2 - 1)/4
    g = math.sqrt((3999.0 ** 2 - 1.0) / 4.0)
    assert count_nodes(make_builtin("poschlteller", g * (1 - 1e-6))).n == 999
    assert count_nodes(make_builtin("poschlteller", g * (1 + 1e-6))).n == 1000


def test_marginal_flag_at_threshold():
    g = math.pi / 2
    res = count_nodes(make_builtin("squarewell", g))
    assert res.marginal_flag
    assert res.n in (0, 1)
    assert not count_nodes(make_builtin("squarewell", 3.0)).marginal_flag


def test_nodes_and_extrema_interlace():
    res = count_nodes(make_builtin("poschlteller", 20.0))
    assert res.extrema.size >= res.nodes.size
    merged = np.sort(np.concatenate([res.nodes, res.extrema[: res.nodes.size]]))
    kinds = [0 if x in set(res.extrema) else 1 for x in merged]
    assert kinds[: 2 * res.nodes.size] == [0, 1] * res.nodes.size


def test_piecewise_constant_single_cell_is_square_well():
    for g in (1.0, 2.0, 5.0, 9.0):
        assert count_piecewise_constant([0.0, 1.0], [-g * g]) == math.floor(g / math.pi + 0.5)


def test_piecewise_constant_two_cells():
    # depth 25 on [0, 0.5) and 4 on [0.5, 1): transfer across the step by hand
    k1, k2 = 5.0, 2.0
    u, du = math.sin(k1 * 0.5), k1 * math.cos(k1 * 0.5)
    theta = math.atan2(k2 * u, du)  # phase at 0.5 in the second cell
    zeros_first = math.floor(k1 * 0.5 / math.pi)
    eta_end = theta % math.pi + k2 * 0.5 + zeros_first * math.pi
    want = math.floor(eta_end / math.pi + 0.5)
    assert count_piecewise_constant([0.0, 0.5, 1.0], [-25.0, -4.0]) == want


def test_wavefunction_samples_solve_the_equation():
    pot = make_builtin("exponential", 3.0)
    data = wavefunction_samples(pot)
    r, u = data["r"], data["u"]
    assert np.all(np.diff(r) > 0)
    sign_changes = int(np.sum(np.sign(u[1:]) * np.sign(u[:-1]) < 0))
    n = count_nodes(pot).n
    assert sign_changes in (n, n - 1)  # the last zero may lie beyond the mesh


def test_phase_profile_agrees_with_node_count():
    for kind, g in (("poschlteller", 6.0), ("exponential", 4.0), ("yukawa", 3.0)):
        pot = make_builtin(kind, g)
        prof = phase_profile(pot)
        assert prof.n == count_nodes(pot).n
        # the phase never exceeds (N + 1/2) pi
        assert np.all(prof.eta < (prof.n + 0.5) * math.pi + 1e-9)
