import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from smoothonline.pwl import (INF, BreakpointFunction, evaluate, insert_point, insertion_gain,
                              nonnesting_witnesses, q_action, scale)


def bf(*pts):
    return BreakpointFunction.from_points(pts)


def random_bf(rng, n=10, span=5.0):
    us = np.sort(rng.uniform(-span, span, n))
    return BreakpointFunction.from_points(zip(us, rng.normal(size=n)))


def quadrature_action(f, q, per_segment=16):
    """Composite trapezoid of |f'|^q on a fine grid through every breakpoint (piecewise-constant integrand)."""
    if len(f) < 2:
        return 0.0
    grid = np.unique(np.concatenate([np.linspace(a, b, per_segment) for a, b in zip(f.us, f.us[1:])]))
    vals = np.interp(grid, f.us, f.vs)
    h = np.diff(grid)
    slopes = np.abs(np.diff(vals) / h) ** q
    # trapezoid on each cell with the constant cell slope at both ends
    return float(np.sum(h * (slopes + slopes) / 2))


# -- evaluate ---------------------------------------------------------------

def test_empty_function_is_zero():
    assert evaluate(BreakpointFunction(), 7.3) == 0


def test_interpolation_midpoint():
    assert evaluate(bf((0, 0), (2, 2)), 1) == 1


def test_constant_extension_right_and_left():
    f = bf((0, 0), (2, 2))
    assert evaluate(f, 5) == 2
    assert evaluate(f, -40) == 0


def test_exact_at_breakpoints():
    f = bf((0.1, 0.3), (0.7, 1 / 3), (2.9, -5.5))
    for u, v in f.points:
        assert f(u) == v


def test_rejects_unsorted_breakpoints():
    with pytest.raises(ValueError):
        BreakpointFunction((0.0, 0.0), (1.0, 2.0))


def test_json_roundtrip():
    f = bf((0, 0), (1.5, -2), (4, 3))
    text = f.to_json()
    assert json.loads(text) == [[0.0, 0.0], [1.5, -2.0], [4.0, 3.0]]
    assert BreakpointFunction.from_json(text) == f


# -- q_action ---------------------------------------------------------------

def test_action_unit_slope():
    assert q_action(bf((0, 0), (1, 1)), 2) == 1


def test_action_half_slope():
    assert q_action(bf((0, 0), (2, 1)), 2) == 0.5


def test_action_infinity_is_max_slope():
    assert q_action(bf((0, 0), (1, 3), (3, 2)), INF) == 3


def test_action_rejects_small_q():
    with pytest.raises(ValueError):
        q_action(bf((0, 0), (1, 1)), 0.5)


def test_action_zero_iff_constant():
    assert q_action(bf((0, 2), (5, 2), (9, 2)), 3) == 0
    assert q_action(bf((0, 2), (5, 2.001)), 3) > 0


@pytest.mark.parametrize("q", [1.0, 1.5, 2.0, 3.0, 7.0])
def test_action_matches_quadrature(q):
    rng = np.random.default_rng(int(q * 10))
    for _ in range(50):
        f = random_bf(rng, int(rng.integers(2, 12)))
        a, b = q_action(f, q), quadrature_action(f, q)
        assert a == pytest.approx(b, rel=1e-10)


# -- insert_point -------------------------------------------------------------

def test_insert_into_empty():
    f = insert_point(BreakpointFunction(), 0, 5)
    assert f.points == [(0.0, 5.0)]
    assert f(-100) == 5 and f(100) == 5


def test_insert_between():
    assert insert_point(bf((0, 0), (2, 0)), 1, 3).points == [(0, 0), (1, 3), (2, 0)]


def test_insert_duplicate_rejected():
    with pytest.raises(ValueError):
        insert_point(bf((0, 0), (2, 0)), 2, 1)


def test_insert_action_increase_equidistant():
    # equidistant neighbours: gain is exactly 2 y^2 / 1
    for y in (0.5, 1.0, 3.0, -2.0):
        f = bf((0, 0), (2, 0))
        assert q_action(insert_point(f, 1, y), 2) == q_action(f, 2) + 2 * y * y


def test_insert_action_increase_asymmetric():
    f = bf((0, 0), (4, 0))
    for y in (1.0, 3.0):
        gain = q_action(insert_point(f, 1, y), 2) - q_action(f, 2)
        assert gain == pytest.approx(y * y / 1 + y * y / 3, rel=1e-15)
        assert gain >= y * y / 1


def test_insertion_gain_matches_rebuild():
    rng = np.random.default_rng(3)
    for _ in range(200):
        f = random_bf(rng, int(rng.integers(1, 8)))
        x, y = float(rng.uniform(-7, 7)), float(rng.normal())
        q = float(rng.uniform(1.1, 4))
        direct = q_action(insert_point(f, x, y), q) - q_action(f, q)
        assert insertion_gain(f.us, f.vs, x, y, q) == pytest.approx(direct, rel=1e-9, abs=1e-12)


# -- scale --------------------------------------------------------------------

def test_scale_identity():
    f = bf((0, 0), (1, 1))
    assert scale(f, 1, 2) == f


def test_scale_example():
    g = scale(bf((0, 0), (1, 1)), 4, 2)
    assert g.points == [(0, 0), (0.25, 0.5)]
    assert q_action(g, 2) == 1


def test_scale_random_preserves_action():
    rng = np.random.default_rng(37)
    f = random_bf(rng, 10)
    assert q_action(scale(f, 0.37, 3), 3) / q_action(f, 3) == pytest.approx(1, rel=1e-12)


@pytest.mark.parametrize("R", [0, -1.5])
def test_scale_rejects_nonpositive(R):
    with pytest.raises(ValueError):
        scale(bf((0, 0), (1, 1)), R, 2)


def test_scale_rejects_infinite_q():
    with pytest.raises(ValueError):
        scale(bf((0, 0), (1, 1)), 2, INF)


# -- non-nesting witnesses ----------------------------------------------------

def test_spike_train_q_integral():
    for N in (1, 5, 40):
        rep = nonnesting_witnesses(2, 3, spikes=N)
        assert rep["spike_train"].q_integral == pytest.approx(1 - 2.0 ** -N, rel=1e-14)
        assert rep["spike_train"].r_integral > rep["spike_train"].q_integral


def test_identity_witness_grows():
    for T in (10.0, 1e3, 1e6):
        assert nonnesting_witnesses(2, 4, half_width=T)["identity"].q_integral == 2 * T


def test_tail_witness_against_quadrature():
    q, r, T = 2.0, 4.0, 1e3
    rep = nonnesting_witnesses(q, r, half_width=T)["tail"]
    half_q = quad(lambda x: (1 + x) ** -1, 0, T, limit=200)[0]
    half_r = quad(lambda x: (1 + x) ** (-r / q), 0, T, limit=200)[0]
    assert half_q == pytest.approx(math.log1p(T), rel=1e-9)
    assert rep.q_integral == pytest.approx(2 * half_q, rel=1e-9)
    assert rep.r_integral == pytest.approx(2 * half_r, rel=1e-9)
    assert rep.r_integral <= 2 / (r / q - 1)


def test_cusp_witness_against_quadrature():
    q, r, T = 2.0, 3.0, 1e4
    rep = nonnesting_witnesses(q, r, half_width=T)["cusp"]
    half_r = quad(lambda x: x ** -1, 1 / T, 1, limit=200)[0]
    half_q = quad(lambda x: x ** (-q / r), 1 / T, 1, limit=200)[0]
    assert rep.r_integral == pytest.approx(2 * half_r, rel=1e-8)
    assert rep.q_integral == pytest.approx(2 * half_q, rel=1e-8)
    assert rep.q_integral < 2 / (1 - q / r)


def test_witness_trends():
    small, large = nonnesting_witnesses(2, 4, 10, 1e2), nonnesting_witnesses(2, 4, 40, 1e8)
    assert large["tail"].q_integral > small["tail"].q_integral
    assert large["tail"].r_integral < 2 / (4 / 2 - 1)
    assert large["cusp"].r_integral > small["cusp"].r_integral
    assert large["spike_train"].sup_slope > small["spike_train"].sup_slope


@pytest.mark.parametrize("q,r", [(3, 2), (2, 2), (0.5, 2), (2, INF)])
def test_witness_rejects_bad_order(q, r):
    with pytest.raises(ValueError):
        nonnesting_witnesses(q, r)


# -- properties -----------------------------------------------------------------

values = st.floats(-20, 20, allow_nan=False)


@st.composite
def functions(draw, min_size=1):
    # breakpoints on a 0.01 grid: segments a few ulps wide make every relative check ill-conditioned
    us = draw(st.lists(st.integers(-5000, 5000).map(lambda k: k / 100), min_size=min_size, max_size=12,
                       unique=True))
    vs = draw(st.lists(values, min_size=len(us), max_size=len(us)))
    return BreakpointFunction.from_points(zip(us, vs))


@given(functions(), st.floats(1e-3, 1e3), st.floats(1.1, 6))
def test_scaling_isometry(f, R, q):
    a = q_action(f, q)
    assert q_action(scale(f, R, q), q) == pytest.approx(a, rel=1e-10, abs=1e-300)


@given(functions(), st.floats(1, 100))
def test_constant_extension_exact(f, d):
    assert f(f.us[0] - d) == f.vs[0]
    assert f(f.us[-1] + d) == f.vs[-1]


@given(functions(), st.floats(-60, 60, allow_nan=False), values)
def test_insertion_lower_bound(f, x, y):
    if x in f.us:
        return
    dmin = min(abs(x - u) for u in f.us)
    if dmin < 1e-6:
        return
    gain = insertion_gain(f.us, f.vs, x, y, 2.0)
    bound = (y - f(x)) ** 2 / dmin
    assert gain >= bound * (1 - 1e-9) - 1e-9


def test_interpolation_minimality_1000_pairs():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        g = random_bf(rng, int(rng.integers(2, 15)), span=10)
        xs = rng.uniform(-12, 12, int(rng.integers(1, 10)))
        f_S = BreakpointFunction.from_points({float(x): g(float(x)) for x in xs}.items())
        assert q_action(f_S, 2) <= q_action(g, 2) * (1 + 1e-12) + 1e-15
