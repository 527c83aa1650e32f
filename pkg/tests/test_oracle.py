from fractions import Fraction

import pytest

from gapsim.corpus import (
    classical_route_system,
    decider_conditions,
    decider_corpus,
    deep_chain_system,
    flip_stability_corpus,
    four_way_phase_system,
    global_phase_system,
    oracle_free_system,
    phase_split_system,
)
from gapsim.errors import (
    CategoricalityError,
    DomainError,
    ModelError,
    OracleError,
    ResourceError,
    StructuralError,
)
from gapsim.evolve import accept_probability
from gapsim.oracle import (
    OracleAssignment,
    SensitivityParams,
    TowerCondition,
    acceptance_prob_rel,
    categorical_check,
    l_member,
    query_magnitudes,
    rerelativized_decide,
    sensitive_set,
    tower,
    verify_flip_stability,
)

EPS = Fraction(1, 7)


def params_for(system, x=""):
    return SensitivityParams(EPS, system.p(len(x)))


def test_tower_values():
    assert tower(0) == 2
    assert tower(1) == 4
    assert tower(2) == 16
    assert tower(3) == 65536
    assert tower(4) == 2**65536


def test_tower_budget_and_domain():
    with pytest.raises(ResourceError):
        tower(5)
    with pytest.raises(StructuralError):
        tower(-1)


def test_assignment_totality():
    oracle = OracleAssignment(2, frozenset({"01"}))
    assert oracle.value("01") == 1 and oracle.value("00") == 0
    with pytest.raises(OracleError):
        oracle.value("000")
    flipped = oracle.flipped("01")
    assert flipped.value("01") == 0
    assert flipped.flipped("01") == oracle


def test_condition_shape_validation():
    domain = frozenset(range(5))
    TowerCondition(frozenset({2, 4}), domain, frozenset({"10", "0011"}))
    with pytest.raises(ModelError):  # no string at an acceptable covered length
        TowerCondition(frozenset({2, 4}), domain, frozenset({"10"}))
    with pytest.raises(ModelError):  # two strings at one length
        TowerCondition(frozenset({2}), domain, frozenset({"10", "01"}))
    with pytest.raises(ModelError):  # value 1 away from acceptable lengths
        TowerCondition(frozenset({2}), domain, frozenset({"10", "011"}))
    with pytest.raises(ModelError):  # 3 is not a tower value
        TowerCondition(frozenset({3}), domain, frozenset({"011"}))


def test_condition_values_and_domain():
    condition = TowerCondition(
        frozenset({2}), frozenset({0, 1, 2}), frozenset({"10"})
    )
    assert condition.value("10") == 1 and condition.value("01") == 0
    with pytest.raises(DomainError):
        condition.value("0000")
    with pytest.raises(DomainError):
        condition.to_assignment(4)


def test_l_member_examples():
    domain = frozenset({0, 1, 2})
    with_00 = TowerCondition(frozenset({2}), domain, frozenset({"00"}))
    assert l_member(with_00, 2)
    with pytest.raises(DomainError):
        l_member(with_00, 3)
    empty = OracleAssignment(2, frozenset())
    assert not l_member(empty, 2)
    with_01 = TowerCondition(frozenset({2}), domain, frozenset({"01"}))
    assert not l_member(with_01, 2)  # witness must end in 0
    assert not l_member(with_00, 0)


def test_oracle_free_probability_matches_plain():
    system = oracle_free_system()
    inst = system.instance("")
    for ones in (frozenset(), frozenset({"0", "111"})):
        rel = acceptance_prob_rel(system, OracleAssignment(3, ones), "")
        assert rel == accept_probability(inst.system)


def test_classical_query_decides():
    system = classical_route_system("101")
    hit = OracleAssignment(3, frozenset({"101"}))
    miss = OracleAssignment(3, frozenset())
    assert acceptance_prob_rel(system, hit, "").is_one()
    assert acceptance_prob_rel(system, miss, "").is_zero()


def test_assignment_must_cover_queries():
    system = classical_route_system("101")
    with pytest.raises(OracleError):
        acceptance_prob_rel(system, OracleAssignment(2, frozenset()), "")


def test_magnitudes_and_sensitive_sets():
    free = oracle_free_system()
    oracle3 = OracleAssignment(3, frozenset())
    assert query_magnitudes(free, oracle3, "") == {}
    assert sensitive_set(free, oracle3, "", params_for(free)) == frozenset()

    route = classical_route_system("101")
    mags = query_magnitudes(route, oracle3, "")
    assert mags == {"101": Fraction(1)}
    assert sensitive_set(route, oracle3, "", params_for(route)) == {"101"}


def test_split_magnitude_is_fractional():
    system = phase_split_system("00")
    mags = query_magnitudes(system, OracleAssignment(3, frozenset()), "")
    assert mags == {"00": Fraction(9, 25)}


def test_bound_value():
    params = SensitivityParams(Fraction(1, 7), 1)
    assert params.bound == 196  # 4 * 1 * 49
    with pytest.raises(ModelError):
        SensitivityParams(Fraction(1, 6), 1)
    with pytest.raises(ModelError):
        SensitivityParams(Fraction(0), 1)


def test_flip_stability_on_corpus_both_epsilons():
    for name, system, ones in flip_stability_corpus():
        oracle = OracleAssignment(system.universe_length, ones)
        for eps in (Fraction(1, 7), Fraction(1, 10)):
            params = SensitivityParams(eps, system.p(0))
            report = verify_flip_stability(system, oracle, "", params)
            assert report.ok, f"{name} at eps={eps}"
            assert len(report.sensitive) <= params.bound


def test_flip_deviation_zero_outside_single_query():
    system = classical_route_system("101")
    oracle = OracleAssignment(3, frozenset())
    report = verify_flip_stability(system, oracle, "", params_for(system))
    assert report.max_outside_deviation == 0
    inside = {row.string: row.deviation for row in report.rows}
    assert inside["101"] == 1  # the sensitive string flips the outcome entirely


def test_deep_chain_query_escapes_sensitive_set():
    system = deep_chain_system(11, "110")
    oracle = OracleAssignment(3, frozenset())
    params = params_for(system)
    mags = query_magnitudes(system, oracle, "")
    assert mags["110"] == Fraction(9, 25) ** 11
    assert mags["110"] > 0
    assert "110" not in sensitive_set(system, oracle, "", params)
    report = verify_flip_stability(system, oracle, "", params)
    assert report.ok


def test_global_phase_never_matters():
    system = global_phase_system("111")
    oracle = OracleAssignment(3, frozenset())
    report = verify_flip_stability(system, oracle, "", params_for(system))
    assert report.max_outside_deviation == 0
    assert all(row.deviation == 0 for row in report.rows)


def test_four_way_system_is_not_categorical():
    system = four_way_phase_system()
    with pytest.raises(CategoricalityError) as info:
        categorical_check(system, "")
    witness = info.value.witness
    oracle = OracleAssignment(3, frozenset(witness))
    prob = acceptance_prob_rel(system, oracle, "").as_fraction()
    assert Fraction(1, 3) < prob < Fraction(2, 3)


def test_decider_corpus_is_categorical():
    for name, system in decider_corpus():
        categorical_check(system, "0")


def assignment_from(condition, system):
    return condition.to_assignment(system.universe_length)


def test_decider_matches_truth_and_stays_frugal():
    system = classical_route_system("101")  # universe too small for length 4
    condition = TowerCondition(
        frozenset({2}), frozenset({0, 1, 2, 3}), frozenset({"10"})
    )
    result = rerelativized_decide(system, condition, "", params_for(system))
    truth = acceptance_prob_rel(system, assignment_from(condition, system), "")
    assert result.accept == (truth.as_fraction() >= Fraction(2, 3))
    assert len(result.query_log) <= result.probe_budget


def test_decider_probes_only_shorts_and_sensitive():
    _, condition = decider_conditions()[0]
    for name, system in decider_corpus():
        result = rerelativized_decide(system, condition, "0", params_for(system, "0"))
        allowed = {y for y in result.query_log if len(y) == 2}
        long_probes = [y for y in result.query_log if len(y) == 4]
        assert len(allowed) == 4  # the short length is read exhaustively
        assert set(long_probes) <= set(result.sensitive)
        universe = sum(1 << n for n in range(system.universe_length + 1))
        assert len(result.query_log) < universe


def test_decider_every_long_placement():
    for name, system in decider_corpus():
        for cond_name, condition in decider_conditions():
            result = rerelativized_decide(
                system, condition, "0", params_for(system, "0"), check_categorical=False
            )
            truth = acceptance_prob_rel(
                system, assignment_from(condition, system), "0"
            ).as_fraction()
            assert result.accept == (truth >= Fraction(2, 3)), (name, cond_name)
