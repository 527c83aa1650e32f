"""Inlining an amplified-threshold approximator in place of oracle queries.

An oracle gap machine asks the same number of queries on every path, with
the next query string determined by the answers so far.  Replacing each
query by a weighted run of the approximator's machine keeps the composed
object an ordinary gap machine and, when the approximation error is small
against the path count, preserves the sign of the gap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import trees
from .errors import ModelError
from .gapp import DEFAULT_BRANCH_BOUND, ClassCertificate, GapMachine, gap_of
from .poly import eval_poly
from .strings import pair, unpair
from .trees import Branch, Node

Answers = tuple[bool, ...]


@dataclass(frozen=True)
class OracleGapMachine:
    """Query-driven machine: k queries per path, then a computation tree.

    next_query(x, answers_so_far) names the string asked next; finish(x,
    answers) is the tree once all k answers are fixed.  Machines whose
    paths would ask different numbers of queries are rejected up front by
    the loaders instead of being padded here.
    """

    query_count: int
    next_query: Callable[[str, Answers], str]
    finish: Callable[[str, Answers], Node]
    branch_bound: int = DEFAULT_BRANCH_BOUND

    def answer_trace(self, x: str, oracle: Callable[[str], bool]) -> tuple[
        tuple[str, ...], Answers
    ]:
        """Queries asked and answers received against a ground-truth oracle."""
        queries: list[str] = []
        answers: list[bool] = []
        for _ in range(self.query_count):
            y = self.next_query(x, tuple(answers))
            queries.append(y)
            answers.append(bool(oracle(y)))
        return tuple(queries), tuple(answers)


@dataclass(frozen=True)
class LownessInstance:
    """An oracle machine, its language, and an approximator certificate."""

    machine: OracleGapMachine
    oracle: frozenset[str]
    approximator: ClassCertificate
    q_coeffs: tuple[int, ...]

    def q_value(self, n: int) -> int:
        return eval_poly(self.q_coeffs, n)


def true_gap(instance: LownessInstance, x: str) -> int:
    """Gap of the machine run with ground-truth oracle answers."""
    _, answers = instance.machine.answer_trace(x, lambda y: y in instance.oracle)
    tree = instance.machine.finish(x, answers)
    return trees.gap(tree, node_budget=instance.machine.branch_bound)


def _approximator_tree(instance: LownessInstance, y: str, m: int) -> Node:
    return instance.approximator.f.evaluator(pair(y, "1" * m))


def inline_construction(instance: LownessInstance, x: str) -> GapMachine:
    """Machine with each query replaced by a weighted run of the approximator.

    A query for y with continuations T_yes and T_no becomes three branches
    whose gaps add to f(y) * gap(T_yes) + (g - f(y)) * gap(T_no): the
    approximator tree feeding T_yes (rejects negated), a block of g copies
    of T_no, and the approximator tree feeding negated T_no.  Correct
    answers thus carry weight at least (1 - 2**-q) g and wrong ones at most
    2**-q g.
    """
    machine = instance.machine
    m = len(x)
    g = instance.approximator.g_value(m)

    def build(answers: Answers) -> Node:
        if len(answers) == machine.query_count:
            return machine.finish(x, answers)
        y = machine.next_query(x, answers)
        t_yes = build(answers + (True,))
        t_no = build(answers + (False,))
        f_tree = _approximator_tree(instance, y, m)
        yes_part = trees.substituted(f_tree, t_yes, trees.negated(t_yes))
        no_block = Branch((t_no,) * g)
        no_correction = trees.substituted(f_tree, trees.negated(t_no), t_no)
        return Branch((yes_part, no_block, no_correction))

    if machine.query_count == 0:
        tree = machine.finish(x, ())
    else:
        tree = build(())
    return GapMachine(lambda _x: tree, machine.branch_bound)


def path_count(instance: LownessInstance, x: str) -> int:
    """Largest leaf count of the machine's tree over all answer patterns."""
    machine = instance.machine
    worst = 0
    for bits in range(1 << machine.query_count):
        answers = tuple(bool((bits >> i) & 1) for i in range(machine.query_count))
        worst = max(worst, trees.unfolded_leaves(machine.finish(x, answers)))
    return worst


@dataclass(frozen=True)
class QueryAudit:
    string: str
    member: bool
    f_value: int
    tally: int
    majority_correct: bool  # approximator on the right side of g/2


@dataclass(frozen=True)
class SignRow:
    x: str
    true_gap: int
    inlined_gap: int
    sign_ok: bool
    path_count: int
    paths_within_budget: bool  # path_count**2 < 2**q(len(x))
    queries: tuple[QueryAudit, ...]
    main_weight: int  # product of correct-answer weights
    error_mass: int  # |inlined - main_weight * true|
    error_budget: Fraction  # (2**k - 1) * paths * g**k / 2**q
    error_within_budget: bool

    @property
    def ok(self) -> bool:
        return self.sign_ok and self.paths_within_budget


@dataclass(frozen=True)
class SignReport:
    rows: tuple[SignRow, ...]
    ok: bool

    def flips(self) -> tuple[SignRow, ...]:
        return tuple(row for row in self.rows if not row.sign_ok)


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def verify_sign_preservation(
    instance: LownessInstance, inputs: Iterable[str]
) -> SignReport:
    """Compare true and inlined gap signs, with exact error accounting.

    The per-query error bound 2**-q * g is multiplied out against the path
    count so the report shows the slack actually consumed; rows for
    instances that break the path-count budget are still evaluated, which
    is how the adversarial suite exhibits its sign flips.
    """
    machine = instance.machine
    rows = []
    for x in inputs:
        n = len(x)
        q = instance.q_value(n)
        g = instance.approximator.g_value(n)
        k = machine.query_count
        queries, answers = machine.answer_trace(x, lambda y: y in instance.oracle)
        tgap = true_gap(instance, x)
        igap = gap_of(inline_construction(instance, x), x)
        audits = []
        main_weight = 1
        for y, answer in zip(queries, answers):
            f_value = trees.gap(_approximator_tree(instance, y, n))
            main_weight *= f_value if answer else g - f_value
            audits.append(
                QueryAudit(
                    string=y,
                    member=y in instance.oracle,
                    f_value=f_value,
                    tally=g,
                    majority_correct=(2 * f_value >= g) == (y in instance.oracle),
                )
            )
        paths = path_count(instance, x)
        error_mass = abs(igap - main_weight * tgap)
        budget = Fraction(((1 << k) - 1) * paths * g**k, 1 << q)
        rows.append(
            SignRow(
                x=x,
                true_gap=tgap,
                inlined_gap=igap,
                sign_ok=_sign(igap) == _sign(tgap),
                path_count=paths,
                paths_within_budget=paths * paths < (1 << q),
                queries=tuple(audits),
                main_weight=main_weight,
                error_mass=error_mass,
                error_budget=budget,
                error_within_budget=Fraction(error_mass) <= budget,
            )
        )
    return SignReport(tuple(rows), all(r.ok for r in rows))


def near_extreme_certificate(
    members: frozenset[str],
    g_pow2: Sequence[int],
    q_coeffs: Sequence[int],
    member_value: Callable[[int], int] | None = None,
) -> ClassCertificate:
    """Table approximator: value g(m) - 1 on members, 1 elsewhere, g(m) = 2**poly(m).

    member_value overrides the member row, which is how the adversarial
    suite weakens the approximation while keeping the same shape.
    """
    g_pow2 = tuple(g_pow2)

    def g(m: int) -> int:
        return 1 << eval_poly(g_pow2, m)

    def evaluator(z: str) -> Node:
        y, padding = unpair(z)
        m = len(padding)
        if y in members:
            value = (g(m) - 1) if member_value is None else member_value(g(m))
        else:
            value = 1
        if value < 1:
            raise ModelError(f"table value {value} must be positive")
        return Branch((trees.ACCEPT,) * value) if value != 1 else trees.ACCEPT

    return ClassCertificate(
        kind="awpp", f=GapMachine(evaluator), g=g, q_coeffs=tuple(q_coeffs)
    )


def near_extreme_instance(
    machine: OracleGapMachine,
    oracle: frozenset[str],
    g_pow2: Sequence[int],
    q_coeffs: Sequence[int],
    member_value: Callable[[int], int] | None = None,
) -> LownessInstance:
    """Instance whose approximator is the near-extreme table for the oracle set."""
    cert = near_extreme_certificate(oracle, g_pow2, q_coeffs, member_value)
    return LownessInstance(machine, oracle, cert, tuple(q_coeffs))


def machine_from_tables(
    query_count: int,
    queries: dict[str, str],
    finish_trees: dict[str, Node],
    branch_bound: int = DEFAULT_BRANCH_BOUND,
) -> OracleGapMachine:
    """Input-independent machine from answer-prefix tables.

    Every prefix shorter than query_count must name a query and every full
    answer string must have a tree; anything partial is rejected rather
    than padded, keeping the per-path query count uniform by construction.
    """
    for bits in range(1 << query_count):
        for depth in range(query_count):
            prefix = format(bits, f"0{query_count}b")[:depth] if depth else ""
            if prefix not in queries:
                raise ModelError(f"no query named after answers {prefix!r}")
        full = format(bits, f"0{query_count}b") if query_count else ""
        if full not in finish_trees:
            raise ModelError(f"no computation tree for answers {full!r}")

    def encode(answers: Answers) -> str:
        return "".join("1" if a else "0" for a in answers)

    return OracleGapMachine(
        query_count=query_count,
        next_query=lambda _x, answers: queries[encode(answers)],
        finish=lambda _x, answers: finish_trees[encode(answers)],
        branch_bound=branch_bound,
    )


def load_instance_bundle(path: str) -> tuple[LownessInstance, tuple[str, ...]]:
    """Read an instance bundle file; returns the instance and its input list."""
    import json

    from .errors import ParseError
    from .gapp import tree_from_json

    with open(path, "r", encoding="utf-8") as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    try:
        table = doc["machine"]
        machine = machine_from_tables(
            table["query_count"],
            dict(table["queries"]),
            {key: tree_from_json(node) for key, node in table["trees"].items()},
        )
        cert = doc["certificate"]
        if cert["style"] != "near-extreme":
            raise ParseError(f"unknown certificate style {cert['style']!r}")
        instance = near_extreme_instance(
            machine,
            frozenset(doc["oracle"]),
            tuple(cert["g_pow2"]),
            tuple(doc["q"]),
        )
        return instance, tuple(doc["inputs"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{path}: malformed instance bundle ({exc})") from exc


def validate_instance(
    instance: LownessInstance, inputs: Sequence[str]
) -> tuple[bool, str]:
    """Check the declared budget and the approximator promise on reachable queries."""
    from .gapp import check_awpp  # local import to keep module load light

    for x in inputs:
        if path_count(instance, x) ** 2 >= (1 << instance.q_value(len(x))):
            return False, f"path count of {x!r} reaches 2**(q/2)"
        queries, _ = instance.machine.answer_trace(
            x, lambda y: y in instance.oracle
        )
        labeled = [(y, y in instance.oracle) for y in queries]
        report = check_awpp(instance.approximator, labeled, len(x))
        if not report.ok:
            return False, f"approximator promise fails on queries of {x!r}"
    return True, "ok"
