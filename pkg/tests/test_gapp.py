import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapsim.corpus import (
    BLOCK_REFLECT,
    amplified_family,
    gap_machine_corpus,
    leaky_family,
    rotation_system,
    unitary_corpus,
    zero_error_family,
)
from gapsim.errors import ParseError, PromiseViolation, ResourceError
from gapsim.evolve import accept_probability
from gapsim.gapp import (
    ClassCertificate,
    GapMachine,
    bqp_to_awpp,
    check_awpp,
    check_ceqp,
    check_lwpp,
    check_pp,
    eqp_to_lwpp,
    exp_sum,
    gap_of,
    load_gap_machine,
    negate,
    poly_product,
    system_to_gap_machine,
    tree_from_json,
    tree_to_json,
)
from gapsim.model import make_system
from gapsim.strings import index_string, pair, strings_up_to, unpair
from gapsim.trees import ACCEPT, REJECT, Branch


def constant_machine(value):
    children = [ACCEPT] * value if value >= 0 else [REJECT] * -value
    tree = Branch(tuple(children) or (ACCEPT, REJECT))
    return GapMachine(lambda x: tree)


def table_machine(fn):
    """Gap given by fn on the second pair component (the combinator's index)."""

    def evaluator(z):
        _, y = unpair(z)
        value = fn(y)
        children = [ACCEPT] * value if value >= 0 else [REJECT] * -value
        return Branch(tuple(children) or (ACCEPT, REJECT))

    return GapMachine(evaluator)


def test_negate_examples():
    machine = constant_machine(2)
    assert gap_of(negate(machine), "") == -2
    assert gap_of(negate(constant_machine(0)), "") == 0
    assert gap_of(negate(constant_machine(-4)), "") == 4


def test_negate_is_involution_on_machines():
    machine = gap_machine_corpus()[1][1]
    double = negate(negate(machine))
    for x in ("", "0", "1101"):
        assert gap_of(double, x) == gap_of(machine, x)


def test_exp_sum_counts_short_strings():
    # gap 1 on every input: the sum counts {empty, 0, 1}
    ones = GapMachine(lambda z: ACCEPT)
    assert gap_of(exp_sum(ones, (1,)), "") == 3


def test_exp_sum_zero_machine():
    zero = constant_machine(0)
    assert gap_of(exp_sum(zero, (2,)), "10") == 0


def test_exp_sum_singleton():
    machine = table_machine(lambda y: 5 if y == "" else 99)
    assert gap_of(exp_sum(machine, (0,)), "11") == 5


def test_exp_sum_respects_branch_bound():
    ones = GapMachine(lambda z: ACCEPT, branch_bound=4)
    with pytest.raises(ResourceError):
        gap_of(exp_sum(ones, (2,)), "")


def test_poly_product_two_factors():
    machine = table_machine(lambda y: {"": 2, "0": 3}.get(y, 1))
    assert gap_of(poly_product(machine, (1,)), "") == 6


def test_poly_product_annihilates():
    machine = table_machine(lambda y: {"": 2, "0": 0}.get(y, 1))
    assert gap_of(poly_product(machine, (1,)), "") == 0


def test_poly_product_signs():
    machine = table_machine(lambda y: -1)
    assert gap_of(poly_product(machine, (2,)), "") == -1  # three factors of -1


@settings(deadline=None)
@given(
    x=st.text(alphabet="01", max_size=5),
    q=st.integers(min_value=0, max_value=2),
    seed=st.integers(min_value=0, max_value=2**16),
)
def test_combinators_match_value_arithmetic(x, q, seed):
    def fn(y):
        return ((hash((seed, y)) % 7) - 3) or 2

    machine = table_machine(fn)
    want_sum = sum(gap_of(machine, pair(x, y)) for y in strings_up_to(q))
    assert gap_of(exp_sum(machine, (q,)), x) == want_sum
    want_product = 1
    for k in range(q + 1):
        want_product *= gap_of(machine, pair(x, index_string(k)))
    assert gap_of(poly_product(machine, (q,)), x) == want_product


def test_system_machines_reproduce_numerators():
    rotation = rotation_system(BLOCK_REFLECT, 0, 1, 1)
    assert gap_of(system_to_gap_machine(rotation), "") == 16
    flat = rotation_system(BLOCK_REFLECT, 0, 1, 2)
    assert gap_of(system_to_gap_machine(flat), "") == 0
    ident = make_system(1, [(0, 0, 5)], 0, 0, 4)
    assert gap_of(system_to_gap_machine(ident), "") == 25**4


@pytest.mark.parametrize("name,system", unitary_corpus(), ids=[n for n, _ in unitary_corpus()])
def test_round_trip_on_corpus(name, system):
    assert gap_of(system_to_gap_machine(system), "") == accept_probability(system).numerator


def test_check_pp():
    plus = ClassCertificate("pp", constant_machine(1))
    minus = ClassCertificate("pp", constant_machine(-3))
    zero = ClassCertificate("pp", constant_machine(0))
    assert check_pp(plus, [("x", True)]).ok
    assert check_pp(minus, [("x", False)]).ok
    assert not check_pp(zero, [("x", True)]).ok
    assert not check_pp(zero, [("x", False)]).ok  # never passes a zero gap


def test_check_lwpp_target():
    ident = make_system(1, [(0, 0, 5)], 0, 0, 1)

    def builder(x, m):
        return ident if x == "1" else make_system(2, [(0, 0, 5), (1, 1, 5)], 0, 1, 1)

    from gapsim.model import MachineFamily

    family = MachineFamily(builder, (1,))
    cert = eqp_to_lwpp(family, [("1", True), ("0", False)])
    assert cert.g_value(1) == 25
    report = check_lwpp(cert, [("1", True), ("0", False)])
    assert report.ok
    off_target = ClassCertificate("lwpp", constant_machine(24), g=lambda n: 25)
    assert not check_lwpp(off_target, [("x", True)]).ok


def awpp_table_cert(values, g=25, q=(1,)):
    def evaluator(z):
        x, _padding = unpair(z)
        value = values[x]
        return Branch((ACCEPT,) * value) if value else Branch((ACCEPT, REJECT))

    return ClassCertificate("awpp", GapMachine(evaluator), g=lambda m: g, q_coeffs=q)


def test_check_awpp_threshold_arithmetic():
    # cleared denominators: member 2*20 >= (2-1)*25, non-member 2*12 <= 25
    cert = awpp_table_cert({"0": 20, "1": 12})
    assert check_awpp(cert, [("0", True)], m=1).ok
    assert check_awpp(cert, [("1", False)], m=1).ok
    assert not check_awpp(cert, [("0", False)], m=1).ok
    assert not check_awpp(cert, [("1", True)], m=1).ok


def test_check_awpp_strictness_on_members():
    cert = awpp_table_cert({"0": 0})
    report = check_awpp(cert, [("0", True)], m=1)
    assert not report.ok
    assert not report.rows[0].strict_interior


def test_check_awpp_range():
    cert = awpp_table_cert({"0": 30})
    report = check_awpp(cert, [("0", True)], m=1)
    assert not report.rows[0].in_range
    assert not report.ok


def test_check_ceqp_examples():
    flat = rotation_system(BLOCK_REFLECT, 0, 1, 2)
    rotation = rotation_system(BLOCK_REFLECT, 0, 1, 1)
    rejecting = make_system(2, [(0, 0, 5), (1, 1, 5)], 0, 1, 1)
    machine = system_to_gap_machine(flat)
    assert check_ceqp(machine, [("", True)]).ok
    assert not check_ceqp(system_to_gap_machine(rotation), [("", True)]).ok
    assert check_ceqp(system_to_gap_machine(rejecting), [("", True)]).ok


def test_bqp_to_awpp_zero_error_any_q():
    family, language = zero_error_family()
    labeled = [(x, language(x)) for x in strings_up_to(2)]
    cert = bqp_to_awpp(family, (3,), labeled, paddings=[3])
    assert check_awpp(cert, labeled, m=3).ok


def test_bqp_to_awpp_tally_value():
    family, language = zero_error_family(t=3)
    cert = bqp_to_awpp(family, (1,), [("", True)], paddings=[2])
    assert cert.g_value(2) == 15625  # 5**(2*3)


def test_bqp_to_awpp_refuses_leaky_family():
    family, language = leaky_family()
    labeled = [(x, language(x)) for x in ("", "0", "11")]
    with pytest.raises(PromiseViolation) as info:
        bqp_to_awpp(family, (2,), labeled, paddings=[2])
    x, m, prob = info.value.witness
    assert prob == accept_probability(family.system(x, m)).as_fraction()


def test_amplified_family_margin():
    # independent oracle: the 2x2 integer recurrence for the rotation block
    a, b = 1, 0
    for _ in range(22):
        a, b = 3 * a - 4 * b, 4 * a + 3 * b
    assert a * a + b * b == 25**22
    family, language = amplified_family()
    prob = accept_probability(family.system("", 8))
    assert prob.numerator == b * b
    # error below 2**-8 with cleared denominators
    assert (5**44 - b * b) * 2**8 <= 5**44


def test_eqp_to_lwpp_refuses_rotation():
    family, language = leaky_family()
    with pytest.raises(PromiseViolation):
        eqp_to_lwpp(family, [("", True)])


def test_tree_files_round_trip(tmp_path):
    from gapsim.trees import gap as tree_gap

    tree = Branch((ACCEPT, Branch((REJECT, ACCEPT)), REJECT))
    doc = {"kind": "tree", "tree": tree_to_json(tree)}
    path = tmp_path / "machine.json"
    path.write_text(json.dumps(doc))
    machine = load_gap_machine(str(path))
    assert gap_of(machine, "anything") == tree_gap(tree)


def test_tree_file_rejects_empty_branch():
    with pytest.raises(ParseError):
        tree_from_json([])
    with pytest.raises(ParseError):
        tree_from_json("maybe")


def test_system_reference_file(tmp_path):
    system = rotation_system(BLOCK_REFLECT, 0, 1, 1)
    (tmp_path / "machines").mkdir()
    (tmp_path / "machines" / "rot.json").write_text(
        json.dumps(system.to_file_dict())
    )
    (tmp_path / "trees").mkdir()
    ref = tmp_path / "trees" / "ref.json"
    ref.write_text(json.dumps({"kind": "system", "path": "../machines/rot.json"}))
    assert gap_of(load_gap_machine(str(ref)), "") == 16
