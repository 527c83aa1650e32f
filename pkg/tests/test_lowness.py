import json

import pytest

from gapsim.corpus import adversarial_lowness_search, lowness_corpus
from gapsim.errors import ModelError
from gapsim.gapp import check_awpp, gap_of
from gapsim.lowness import (
    OracleGapMachine,
    inline_construction,
    load_instance_bundle,
    machine_from_tables,
    near_extreme_instance,
    path_count,
    true_gap,
    validate_instance,
    verify_sign_preservation,
)
from gapsim.trees import ACCEPT, REJECT, Branch


def single_query_machine(yes_gap=1, no_gap=-1):
    trees = {
        "1": Branch((ACCEPT,) * yes_gap) if yes_gap > 1 else ACCEPT,
        "0": Branch((REJECT,) * -no_gap) if no_gap < -1 else REJECT,
    }
    return machine_from_tables(1, {"": "00"}, trees)


def test_true_gap_follows_oracle():
    instance = near_extreme_instance(
        single_query_machine(), frozenset({"00"}), (2, 4), (0, 4)
    )
    assert true_gap(instance, "01") == 1
    empty = near_extreme_instance(
        single_query_machine(), frozenset(), (2, 4), (0, 4)
    )
    assert true_gap(empty, "01") == -1


def test_no_query_machine_ignores_oracle():
    machine = OracleGapMachine(
        query_count=0,
        next_query=lambda x, a: "",
        finish=lambda x, a: Branch((ACCEPT, ACCEPT, REJECT)),
    )
    for oracle in (frozenset(), frozenset({"0", "1"})):
        instance = near_extreme_instance(machine, oracle, (2, 4), (0, 4))
        assert true_gap(instance, "0") == 1


def test_inline_no_queries_is_the_same_tree():
    tree = Branch((ACCEPT, REJECT, ACCEPT))
    machine = OracleGapMachine(
        query_count=0, next_query=lambda x, a: "", finish=lambda x, a: tree
    )
    instance = near_extreme_instance(machine, frozenset(), (2, 4), (0, 4))
    inlined = inline_construction(instance, "00")
    assert inlined.evaluator("00") is tree


def test_inline_gap_is_weighted_combination():
    # independent arithmetic: f * yes + (g - f) * no
    instance = near_extreme_instance(
        single_query_machine(yes_gap=2, no_gap=-3), frozenset({"00"}), (2, 4), (0, 4)
    )
    g = instance.approximator.g_value(2)
    f = g - 1
    want = f * 2 + (g - f) * -3
    assert gap_of(inline_construction(instance, "01"), "01") == want


def test_sign_preserved_exhaustively_on_corpus():
    for name, instance, inputs in lowness_corpus():
        valid, why = validate_instance(instance, inputs)
        assert valid, f"{name}: {why}"
        report = verify_sign_preservation(instance, inputs)
        assert report.ok, f"{name} flipped: {report.flips()}"
        for row in report.rows:
            assert row.error_within_budget
            assert row.error_mass < abs(row.main_weight * row.true_gap)


def test_corpus_is_large_enough():
    assert len(lowness_corpus()) >= 10


def test_approximator_certificates_hold_on_queries():
    for name, instance, inputs in lowness_corpus():
        for x in inputs:
            queries, _ = instance.machine.answer_trace(
                x, lambda y: y in instance.oracle
            )
            labeled = [(y, y in instance.oracle) for y in queries]
            assert check_awpp(instance.approximator, labeled, len(x)).ok


def test_adversarial_flip_found_and_budget_violated():
    instance, inputs, fraction, no_gap = adversarial_lowness_search()
    report = verify_sign_preservation(instance, inputs)
    flips = report.flips()
    assert flips
    valid, why = validate_instance(instance, inputs)
    assert not valid
    assert "2**(q/2)" in why
    row = flips[0]
    assert row.error_mass > 0
    assert not row.paths_within_budget


def test_large_margin_is_trivially_safe():
    instance = near_extreme_instance(
        single_query_machine(yes_gap=4, no_gap=-4), frozenset({"00"}), (2, 4), (0, 4)
    )
    report = verify_sign_preservation(instance, ["00", "11"])
    assert report.ok
    for row in report.rows:
        assert row.paths_within_budget


def test_path_count_is_max_over_answer_patterns():
    machine = machine_from_tables(
        1,
        {"": "00"},
        {"1": Branch((ACCEPT,) * 5), "0": ACCEPT},
    )
    instance = near_extreme_instance(machine, frozenset(), (2, 4), (0, 4))
    assert path_count(instance, "x") == 5


def test_incomplete_tables_rejected():
    with pytest.raises(ModelError):
        machine_from_tables(2, {"": "00"}, {"00": ACCEPT})
    with pytest.raises(ModelError):
        machine_from_tables(1, {"": "00"}, {"1": ACCEPT})


def test_bundle_round_trip(tmp_path):
    doc = {
        "machine": {
            "query_count": 1,
            "queries": {"": "00"},
            "trees": {"1": "accept", "0": ["reject", "reject"]},
        },
        "oracle": ["00"],
        "certificate": {"style": "near-extreme", "g_pow2": [2, 4]},
        "q": [0, 4],
        "inputs": ["00", "01"],
    }
    path = tmp_path / "bundle.json"
    path.write_text(json.dumps(doc))
    instance, inputs = load_instance_bundle(str(path))
    assert inputs == ("00", "01")
    assert true_gap(instance, "00") == 1
    assert verify_sign_preservation(instance, inputs).ok
