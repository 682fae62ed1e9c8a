import math

import pytest
from hypothesis import given, strategies as st

from smoothonline.engine import (DuplicateInputError, GameConfig, ProtocolViolation, Scenario, Transcript,
                                 farther, is_admissible, penalized_rounds, ratio_bound_check,
                                 rescale_transcript, run_game, scenario_monotonicity_check, score,
                                 validate_transcript, weighted_loss)
from smoothonline.learners import Linint, ZeroLearner
from smoothonline.weights import WeightFunction

from conftest import Constant, Scripted


def play(inputs, labels, scenario=Scenario.base(), learner=None, p=2.0, dim=1, horizon=1000):
    cfg = GameConfig(p, 2.0, scenario, horizon, dim)
    return run_game(cfg, learner or ZeroLearner(), Scripted(inputs, labels))


# -- scoring ------------------------------------------------------------------

def test_round_zero_never_scored():
    tr = play([0.0], [5.0])
    assert tr.cumulative_loss == 0
    assert not tr.rounds[0].counted


def test_base_counts_every_round():
    tr = play([0, 100, 1e6], [0, 1, -2])
    assert tr.cumulative_loss == 1 + 4
    assert tr.counted_set() == {1, 2}


def test_s2_counts_only_nearby_inputs():
    tr = play([0, 10, 10.5], [0, 1, 1], Scenario.s2(1.0))
    assert tr.counted_set() == {2}
    assert tr.cumulative_loss == 1


def test_s1_rejects_far_input():
    with pytest.raises(ProtocolViolation) as err:
        play([0, 0.5, 3.0], [0, 0, 0], Scenario.s1(1.0))
    assert err.value.t == 2


def test_s1_radius_boundary_is_inclusive():
    tr = play([0, 1.0, 2.0], [0, 1, 1], Scenario.s1(1.0))
    assert len(tr.rounds) == 3


def test_s3_identity_weight():
    tr = play([0, math.e], [0, math.e], Scenario.s3(WeightFunction.identity()), p=2)
    assert tr.cumulative_loss == pytest.approx(math.e, rel=1e-15)
    assert tr.rounds[1].weight == pytest.approx(1 / math.e, rel=1e-15)


def test_s3_exponential_weight():
    tr = play([0, 2.0], [0, 1.0], Scenario.s3(WeightFunction.exponential(0.5)))
    assert tr.cumulative_loss == pytest.approx(math.exp(-1), rel=1e-15)


def test_s3_duplicate_rejected():
    with pytest.raises(DuplicateInputError):
        play([0, 1, 0], [0, 0, 0], Scenario.s3(WeightFunction.identity()))


@pytest.mark.parametrize("sc", [Scenario.base(), Scenario.s2(1.0)])
def test_duplicates_allowed_elsewhere(sc):
    tr = play([0, 0, 0], [0, 1, 1], sc)
    assert tr.rounds[1].delta == 0
    assert tr.cumulative_loss == 2


def test_score_function():
    assert score(Scenario.base(), 0, None) == (False, 0.0)
    assert score(Scenario.s2(2.0), 3, 2.0) == (True, 1.0)
    assert score(Scenario.s2(2.0), 3, 2.1) == (False, 0.0)


def test_horizon_caps_game():
    tr = play(list(range(50)), [0.0] * 50, horizon=10)
    assert len(tr.rounds) == 10


def test_dimension_checks():
    with pytest.raises(ValueError):
        play([(0.0, 1.0)], [0.0], dim=1)
    with pytest.raises(ValueError):
        play([(0.0,)], [0.0], dim=2)


def test_multidim_delta():
    tr = play([(0.0, 0.0), (3.0, 4.0), (3.0, 5.0)], [0, 0, 0], dim=2)
    assert [r.delta for r in tr.rounds] == [None, 5.0, 1.0]


@pytest.mark.parametrize("bad", [dict(p=0), dict(q=1.0), dict(horizon=0), dict(dim=0)])
def test_config_validation(bad):
    with pytest.raises(ValueError):
        GameConfig(**bad)


def test_scenario_validation():
    with pytest.raises(ValueError):
        Scenario("s4")
    with pytest.raises(ValueError):
        Scenario.s2(0)
    with pytest.raises(ValueError):
        Scenario("s3")


# -- tie-break ------------------------------------------------------------------

def test_farther():
    assert farther(0.0, 1.0, -3.0) == -3.0
    assert farther(0.0, 1.0, -1.0) == 1.0
    assert farther(0.0, -1.0, 1.0) == 1.0


# -- serialization ----------------------------------------------------------------

def test_jsonl_roundtrip():
    tr = play([0, 0.5, 1.5], [0, 1, -1], Scenario.s2(1.0), learner=Linint())
    text = tr.to_jsonl()
    assert len(text.strip().splitlines()) == 3
    back = Transcript.from_jsonl(text, tr.config)
    assert back.to_jsonl() == text
    assert back.cumulative_loss == tr.cumulative_loss


def test_summary_csv():
    tr = play([0, 1], [0, 1], learner=Constant(0.5))
    lines = tr.summary_csv().strip().splitlines()
    assert lines[0].split(",") == list(Transcript.SUMMARY_FIELDS)
    row = dict(zip(lines[0].split(","), lines[1].split(",")))
    assert row["config_hash"] == tr.config.config_hash()
    assert float(row["cumulative_loss"]) == 0.25
    assert row["rounds"] == "2"


def test_config_hash_stable_and_sensitive():
    a, b = GameConfig(seed=1), GameConfig(seed=1)
    assert a.config_hash() == b.config_hash()
    assert a.config_hash() != GameConfig(seed=2).config_hash()


# -- transcript checks ---------------------------------------------------------------

def test_validate_transcript():
    assert validate_transcript(play([0, 1], [0, 1]))
    assert not validate_transcript(play([0, 1], [0, 2]))


def test_ratio_check_identity_vs_exp():
    tr = play([0, 0.3, 2.0, 7.0, 7.5], [0, 1, -1, 0.5, 2.0])
    g, h = WeightFunction.identity(), WeightFunction.exponential(1.0)
    rc = ratio_bound_check(tr, g, h)
    assert rc.holds and not rc.vacuous
    assert rc.constant == pytest.approx(1 / math.e)
    assert rc.loss_h == pytest.approx(weighted_loss(tr, h))


def test_ratio_check_infinite_constant_is_vacuous():
    tr = play([0, 1], [0, 1])
    rc = ratio_bound_check(tr, WeightFunction.one(), WeightFunction.identity())
    assert rc.holds and rc.vacuous


def test_ratio_check_detects_violation():
    tr = play([0, 10.0], [0, 1])
    assert not ratio_bound_check(tr, WeightFunction.identity(), WeightFunction.one(), constant=1.0).holds


def test_indicator_equals_s2_and_one_equals_base():
    inputs, labels = [0, 0.4, 3.0, 3.9, 5.0, 4.5], [0, 1, -1, 2, 0.5, 1]
    s2 = play(inputs, labels, Scenario.s2(1.0), learner=Linint())
    ind = play(inputs, labels, Scenario.s3(WeightFunction.indicator()), learner=Linint())
    base = play(inputs, labels, learner=Linint())
    one = play(inputs, labels, Scenario.s3(WeightFunction.one()), learner=Linint())
    assert s2.cumulative_loss == ind.cumulative_loss
    assert base.cumulative_loss == one.cumulative_loss


def test_penalized_rounds_and_admissibility():
    xs = [0, 10, 10.5]
    assert penalized_rounds(xs, 1.0) == {2}
    assert not is_admissible(xs, 1.0)
    assert is_admissible(xs, 10.0)
    assert is_admissible([0.0], 0.1)


def test_monotonicity_example():
    rep = scenario_monotonicity_check([0, 1.5, 2.0, 10], 1.0, 2.0, [0, 0, 0, 0], [0, 1, 1, 1])
    assert rep.penalized_small == {2} and rep.penalized_large == {1, 2}
    assert rep.loss_small == 1 and rep.loss_large == 2
    assert rep.ok


def test_monotonicity_rejects_bad_order():
    with pytest.raises(ValueError):
        scenario_monotonicity_check([0, 1], 2.0, 1.0)


def test_rescale_transcript():
    tr = play([0, 0.5, 1.2], [0, 1, -1], Scenario.s2(1.0), learner=Linint())
    R = 4.0
    big = rescale_transcript(tr, R)
    assert big.config.scenario.radius == 4.0
    assert big.cumulative_loss == pytest.approx(tr.cumulative_loss * R ** 1.0, rel=1e-12)
    assert [r.x for r in big.rounds] == [0.0, 2.0, 4.8]
    with pytest.raises(ValueError):
        rescale_transcript(play([0, 1], [0, 1]), 2.0)


# -- properties ------------------------------------------------------------------

inputs_st = st.lists(st.floats(-100, 100, allow_nan=False), min_size=1, max_size=30)


@given(inputs_st, st.floats(0.01, 10), st.floats(0.01, 10))
def test_penalized_sets_nested(xs, r1, r2):
    lo, hi = min(r1, r2), max(r1, r2)
    rep = scenario_monotonicity_check(xs, lo, hi, [0.0] * len(xs), [1.0] * len(xs))
    assert rep.ok


@given(inputs_st, st.floats(0.01, 10))
def test_admissible_means_every_round_penalized(xs, r):
    if is_admissible(xs, r):
        assert penalized_rounds(xs, r) == set(range(1, len(xs)))


@given(st.lists(st.tuples(st.floats(-50, 50), st.floats(-5, 5)), min_size=2, max_size=20,
                unique_by=lambda p: p[0]))
def test_weighted_loss_ratio_invariant(pairs):
    xs, ys = zip(*pairs)
    tr = play(xs, ys, learner=Linint())
    for g, h in ((WeightFunction.identity(), WeightFunction.exponential(2.0)),
                 (WeightFunction.one(), WeightFunction.indicator()),
                 (WeightFunction.exponential(0.5), WeightFunction.exponential(1.0))):
        assert ratio_bound_check(tr, g, h).holds
