from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapsim.corpus import (
    BLOCK_REFLECT,
    leaky_family,
    rotation_system,
    unitary_corpus,
    zero_error_family,
)
from gapsim.errors import BoundsError, ResourceError
from gapsim.evolve import (
    accept_probability,
    classify_bqp,
    evolve,
    float_check,
    path_sum,
)
from gapsim.model import make_system

ROTATION = rotation_system(BLOCK_REFLECT, 0, 1, 1)
ROTATION_T2 = rotation_system(BLOCK_REFLECT, 0, 1, 2)
IDENTITY_SELF = make_system(1, [(0, 0, 5)], 0, 0, 3)

corpus = unitary_corpus()
corpus_ids = [name for name, _ in corpus]


def test_evolve_single_step():
    assert evolve(ROTATION, 1).entries == (3, 4)


def test_evolve_two_steps_is_scaled_identity():
    # V^2 = 25 I for the reflection block, so the start column returns home
    assert evolve(ROTATION_T2, 2).entries == (25, 0)


def test_evolve_zero_steps():
    vec = evolve(ROTATION, 0)
    assert vec.entries == (1, 0) and vec.steps == 0


def test_evolve_bounds():
    with pytest.raises(BoundsError):
        evolve(ROTATION, 2)
    with pytest.raises(BoundsError):
        evolve(ROTATION, -1)


def test_accept_probability_rotation():
    prob = accept_probability(ROTATION)
    assert (prob.numerator, prob.log5_denominator) == (16, 2)
    assert prob.as_fraction() == Fraction(16, 25)


def test_accept_probability_zero():
    prob = accept_probability(ROTATION_T2)
    assert (prob.numerator, prob.log5_denominator) == (0, 4)


def test_accept_probability_unreduced_identity():
    prob = accept_probability(IDENTITY_SELF)
    # kept unreduced: 5**6 over 5**6, not 1/1
    assert (prob.numerator, prob.log5_denominator) == (5**6, 6)
    assert prob.is_one()


def test_path_sum_by_hand():
    # two length-2 paths back to the start: 3*3 and 4*4
    assert path_sum(ROTATION_T2, 2).entries[0] == 3 * 3 + 4 * 4


def test_path_sum_trivial_lengths():
    assert path_sum(ROTATION, 0).entries == (1, 0)
    assert path_sum(ROTATION, 1).entries == (3, 4)


def test_path_sum_cap():
    system = rotation_system(BLOCK_REFLECT, 0, 1, 10)
    with pytest.raises(ResourceError):
        path_sum(system, 10, cap=100)


def test_path_cap_env_override(monkeypatch):
    system = rotation_system(BLOCK_REFLECT, 0, 1, 10)
    monkeypatch.setenv("GAPSIM_MAX_PATHS", "100")
    with pytest.raises(ResourceError):
        path_sum(system, 10)
    monkeypatch.setenv("GAPSIM_MAX_PATHS", "2000")
    path_sum(system, 10)


@pytest.mark.parametrize("name,system", corpus, ids=corpus_ids)
def test_path_sum_matches_evolve(name, system):
    assert path_sum(system, system.t_bound) == evolve(system, system.t_bound)


@pytest.mark.parametrize("name,system", corpus, ids=corpus_ids)
def test_norm_conserved_every_step(name, system):
    for t in range(system.t_bound + 1):
        assert evolve(system, t).norm_squared == 25**t


@settings(deadline=None)
@given(
    index=st.integers(min_value=0, max_value=len(corpus) - 1),
    t=st.integers(min_value=0, max_value=10),
)
def test_norm_conserved_random(index, t):
    system = corpus[index][1]
    t = min(t, system.t_bound)
    assert evolve(system, t).norm_squared == 25**t


def test_float_check_values():
    assert float_check(ROTATION) == pytest.approx(0.64, abs=1e-12)
    assert float_check(IDENTITY_SELF) == pytest.approx(1.0, abs=1e-12)
    assert float_check(ROTATION_T2) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("name,system", corpus, ids=corpus_ids)
def test_float_check_agreement(name, system):
    exact = float(accept_probability(system).as_fraction())
    assert abs(float_check(system) - exact) <= 1e-9


def test_classify_flags_leaky_promise():
    family, language = leaky_family()
    report = classify_bqp(family, ["", "1", "11"], language)
    by_input = {row.x: row for row in report.rows}
    # members land at 16/25, strictly between the thresholds
    assert by_input[""].category == "violation"
    assert by_input["11"].category == "violation"
    assert by_input["1"].category == "reject" and by_input["1"].consistent
    assert not report.ok


def test_classify_accepts_zero_error():
    family, language = zero_error_family()
    report = classify_bqp(family, ["", "0", "1", "01", "11"], language)
    assert report.ok
    assert {row.category for row in report.rows} == {"accept", "reject"}
