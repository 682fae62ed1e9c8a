import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from smoothonline.classes import (Finite, Ginf, Gq, Gqd, SeparableTentFunction, TentFamily, TruncatedLinear,
                                  class_from_json, class_to_json, f_eps_family, f_n_eps_family,
                                  family_m_value, g_n_eps_constant, g_n_eps_family, is_member, pair_gap,
                                  tent_critical_offsets, tent_evaluate, tent_slice, tent_slice_action,
                                  truncated_linear_evaluate)
from smoothonline.pwl import BreakpointFunction


def bf(*pts):
    return BreakpointFunction.from_points(pts)


def grid_gap(f1, f2, step=1e-4, pad=3.0):
    """Brute-force m: agreement points on a dense grid (with exact linear crossings), dilated by 1."""
    us = sorted(set(f1.us) | set(f2.us))
    lo, hi = us[0] - pad, us[-1] + pad
    grid = np.union1d(np.arange(lo, hi, step), us)
    d = np.array([f1(x) - f2(x) for x in grid])
    zeros = list(grid[d == 0])
    s = d[:-1] * d[1:] < 0
    zeros += list(grid[:-1][s] + d[:-1][s] * (grid[1:][s] - grid[:-1][s]) / (d[:-1][s] - d[1:][s]))
    if not zeros:
        return 0.0
    zeros = np.array(sorted(zeros))
    # distance from each grid point to the agreement set
    idx = np.clip(np.searchsorted(zeros, grid), 1, len(zeros) - 1)
    near = np.minimum(np.abs(grid - zeros[idx - 1]), np.abs(grid - zeros[np.minimum(idx, len(zeros) - 1)]))
    if len(zeros) == 1:
        near = np.abs(grid - zeros[0])
    best = float(np.max(np.abs(d[near <= 1]), initial=0.0))
    for z in zeros:
        for e in (z - 1, z + 1):
            best = max(best, abs(f1(e) - f2(e)))
    return best


# -- membership ---------------------------------------------------------------

def test_member_boundary():
    m = is_member(Gq(2), bf((0, 0), (1, 1)))
    assert m and m.action == 1


def test_not_member():
    m = is_member(Gq(2), bf((0, 0), (1, 2)))
    assert not m and m.action == 4


def test_ginf_membership():
    assert is_member(Ginf(), bf((0, 0), (1, 1), (3, 0)))
    assert not is_member(Ginf(), bf((0, 0), (1, 1.5)))


def test_geometric_escape_interpolant_member():
    x, y, pts = 0.0, 0.0, [(0.0, 0.0)]
    for i in range(1, 60):
        x += 2.0 ** i
        y += 1.0
        pts.append((x, y))
    assert is_member(Gq(2), BreakpointFunction.from_points(pts))


def test_membership_needs_gq_or_ginf():
    with pytest.raises(TypeError):
        is_member(TruncatedLinear(2, 1.0), bf((0, 0)))


@pytest.mark.parametrize("bad", [lambda: Gq(1), lambda: Gqd(2, 0), lambda: TruncatedLinear(0, 1),
                                 lambda: TruncatedLinear(2, 0), lambda: Finite(())])
def test_class_validation(bad):
    with pytest.raises(ValueError):
        bad()


@given(st.lists(st.tuples(st.floats(-10, 10), st.floats(-3, 3)), min_size=2, max_size=8,
                unique_by=lambda p: p[0]), st.floats(0.001, 1))
def test_membership_monotone_in_amplitude(pts, lam):
    f = BreakpointFunction.from_points(pts)
    if is_member(Gq(2), f):
        g = BreakpointFunction(f.us, tuple(lam * v for v in f.vs))
        assert is_member(Gq(2), g)


# -- serialization --------------------------------------------------------------

@pytest.mark.parametrize("cls", [Gq(2.5), Ginf(), Gqd(2, 3), TruncatedLinear(4, 0.5), f_eps_family(0.02),
                                 f_n_eps_family(4, 0.01)])
def test_class_json_roundtrip(cls):
    back = class_from_json(class_to_json(cls))
    assert back == cls


# -- families -----------------------------------------------------------------

def test_f_eps_members():
    fam = f_eps_family(0.01)
    assert [m(3) for m in fam.members] == [-0.01, 0.0, 0.01]
    assert all(m(2) == 0 and m(4) == 0 for m in fam.members)


def test_f_n_eps_bits():
    fam = f_n_eps_family(8, 0.01)
    for i, m in enumerate(fam.members):
        for j in range(3):
            assert m(4 * j + 3) == (-1.0) ** ((i >> j) & 1)
            assert m(4 * j + 2) == 0 and m(4 * j + 1) == pytest.approx(i * 0.01)


def test_f_n_eps_needs_power_of_two():
    with pytest.raises(ValueError):
        f_n_eps_family(6)


def test_g_n_eps_members():
    fam = g_n_eps_family(5, 0.01)
    for i, m in enumerate(fam.members, 1):
        for j in range(1, 6):
            assert m(4 * j - 1) == (1.0 if i == j else -1.0)
            assert m(4 * j - 3) == pytest.approx(i * 0.01)


def test_g_n_eps_constant():
    assert g_n_eps_constant(5, 2) == pytest.approx(16 / 9, rel=1e-15)
    assert g_n_eps_constant(17, 1e4) == pytest.approx(4, rel=1e-3)


def test_finite_consistency():
    fam = f_eps_family(0.01)
    assert fam.consistent([(2.0, 0.0)]) == [0, 1, 2]
    assert fam.consistent([(1.0, 1.0)]) == [0, 1]
    assert fam.consistent_values([(1.0, 1.0), (5.0, -1.0)], 3.0) == [0.0]


# -- truncated linear -----------------------------------------------------------

def test_truncated_linear_examples():
    assert truncated_linear_evaluate((1, 0), (0.5, 9), 1) == 0.5
    assert truncated_linear_evaluate((3, 0), (1, 0), 1) == 0
    assert truncated_linear_evaluate((0, 0, 0), (4, -2, 7), 1) == 0


def test_truncated_linear_dimension_mismatch():
    with pytest.raises(ValueError):
        truncated_linear_evaluate((1, 2), (1, 2, 3), 1)


# -- pair gap -------------------------------------------------------------------

def test_pair_gap_identical():
    f = bf((0, 1), (3, -2))
    assert family_m_value(f, f) == 0


def test_pair_gap_ramp_vs_zero():
    f1, f2 = bf((0, 0), (1, 1)), bf((0, 0))
    g = pair_gap(f1, f2)
    assert g.m == 1 and g.x == 1
    assert grid_gap(f1, f2) == pytest.approx(1, abs=1e-6)


def test_pair_gap_f_eps_members():
    fam = f_eps_family(0.01)
    f1, f3 = fam.members[0], fam.members[2]
    assert family_m_value(f1, f3) == 2
    assert grid_gap(f1, f3) == pytest.approx(2, abs=1e-6)


def test_pair_gap_never_agree():
    g = pair_gap(bf((0, 1), (1, 2)), bf((0, 0), (1, 0)))
    assert g.m == 0 and g.x is None


def test_pair_gap_random_against_grid_oracle():
    rng = np.random.default_rng(11)
    for _ in range(500):
        k = int(rng.integers(2, 6))
        us = np.sort(rng.choice(np.arange(0, 8), size=k, replace=False)).astype(float)
        f1 = BreakpointFunction(tuple(us), tuple(float(v) for v in rng.integers(-2, 3, size=k)))
        f2 = BreakpointFunction(tuple(us), tuple(float(v) for v in rng.integers(-2, 3, size=k)))
        m12, m21 = family_m_value(f1, f2), family_m_value(f2, f1)
        assert m12 == m21
        assert m12 == pytest.approx(grid_gap(f1, f2, step=1e-3), abs=1e-6)


# -- tents ----------------------------------------------------------------------

def tent(N=20, q=2.0, eta=0.05, seed=0):
    tf = SeparableTentFunction(q, eta)
    rng = np.random.default_rng(seed)
    for t in range(1, N + 1):
        tf.set_round(t, int(rng.integers(0, 2)))
    return tf


def test_tent_parameters():
    tf = SeparableTentFunction(2.0, 0.05)
    assert tf.alpha == math.sqrt(1 - 0.05 ** 2)
    assert tf.a == pytest.approx(math.sqrt(0.0125 / 2), rel=1e-14)
    assert math.hypot(tf.alpha, tf.eta) == pytest.approx(1, abs=1e-15)


def test_tent_eta_range():
    with pytest.raises(ValueError):
        SeparableTentFunction(2.0, 0.1)


def test_tent_evaluate_examples():
    tf = SeparableTentFunction(2.0, 0.05, {1: 1, 2: 0})
    assert tent_evaluate(tf, (50.0, -3.0)) == 0
    assert tent_evaluate(tf, tf.center(1)) == tf.a
    assert tent_evaluate(tf, tf.center(2)) == 0


def test_tent_slice_examples():
    tf = SeparableTentFunction(2.0, 0.05, {1: 1})
    cx, cy = tf.center(1)
    assert tent_slice_action(tf, "x", 100.0) == 0
    assert tent_slice_action(tf, "x", cy) == pytest.approx(tf.a ** 2 * 2 * tf.L ** -1, rel=1e-14)
    assert tent_slice_action(tf, "y", cx) == pytest.approx(tf.a ** 2 * 2 * tf.b ** -1, rel=1e-14)
    assert tent_slice_action(tf, "y", cx) <= 1 + 1e-12


@pytest.mark.parametrize("q", [1.5, 2.0, 3.0])
def test_tent_slices_within_budget(q):
    tf = tent(30, q)
    assert tf.rectangles_disjoint()
    crit = tent_critical_offsets(tf)
    for axis, lo, hi in (("x", -tf.b, 30 * tf.eta + tf.b), ("y", -tf.L, 30 * tf.alpha + tf.L)):
        offsets = list(np.linspace(lo, hi, 1000)) + crit[axis]
        assert max(tent_slice_action(tf, axis, float(o)) for o in offsets) <= 1 + 1e-12


def test_tent_slice_matches_evaluate():
    tf = tent(10)
    rng = np.random.default_rng(5)
    for _ in range(300):
        x, y = rng.uniform(0, 10 * tf.alpha), rng.uniform(0, 10 * tf.eta)
        assert tent_slice(tf, "x", y)(x) == pytest.approx(tent_evaluate(tf, (x, y)), abs=1e-15)
        assert tent_slice(tf, "y", x)(y) == pytest.approx(tent_evaluate(tf, (x, y)), abs=1e-15)


def test_tent_family_values():
    tf = SeparableTentFunction(2.0, 0.05)
    fam = TentFamily(tf)
    assert fam.consistent_values([], tf.center(3)) == [0.0, tf.a]
    assert fam.consistent_values([(tf.center(3), tf.a)], tf.center(3)) == [tf.a]
    assert fam.consistent_values([], (0.5 * tf.alpha, 0.0)) == [0.0]
