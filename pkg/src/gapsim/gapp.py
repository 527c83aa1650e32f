"""Gap machines: finite nondeterministic computations valued by their gap.

A machine maps an input string to a computation tree; its value is the
number of accepting minus rejecting leaves.  The closure combinators below
are machine transformations only: they rearrange trees and never touch the
gap values themselves, so brute-force gap arithmetic stays available as an
independent oracle in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import trees
from .errors import ParseError, PromiseViolation, ResourceError, StructuralError
from .evolve import accept_probability
from .model import MachineFamily, UnitarySystem
from .poly import eval_poly
from .strings import index_string, pair, strings_up_to, unpair
from .trees import ACCEPT, REJECT, Branch, Node

DEFAULT_BRANCH_BOUND = 1 << 20


@dataclass(frozen=True)
class GapMachine:
    """Evaluator from input strings to computation trees, with a size guard."""

    evaluator: Callable[[str], Node]
    branch_bound: int = DEFAULT_BRANCH_BOUND


def gap_of(machine: GapMachine, x: str) -> int:
    """Exact gap by full traversal; the ground truth for every combinator."""
    tree = machine.evaluator(x)
    return trees.gap(tree, node_budget=machine.branch_bound)


def negate(machine: GapMachine) -> GapMachine:
    """Machine with every leaf label swapped, so gaps change sign."""
    return GapMachine(
        lambda x: trees.negated(machine.evaluator(x)), machine.branch_bound
    )


def exp_sum(machine: GapMachine, q: Sequence[int]) -> GapMachine:
    """Branch over every y with len(y) <= q(len(x)), then run machine on <x, y>."""
    q = tuple(q)

    def evaluator(x: str) -> Node:
        bound = eval_poly(q, len(x))
        if bound < 0:
            raise StructuralError("negative branching length")
        if (1 << (bound + 1)) - 1 > machine.branch_bound:
            raise ResourceError(
                f"2**{bound + 1} branches exceed the bound {machine.branch_bound}"
            )
        return Branch(
            tuple(machine.evaluator(pair(x, y)) for y in strings_up_to(bound))
        )

    return GapMachine(evaluator, machine.branch_bound)


def poly_product(machine: GapMachine, q: Sequence[int]) -> GapMachine:
    """Sequential composition computing the product over y = 0 .. q(len(x)).

    Numbers index binary strings canonically.  Each factor is spliced into
    the leaves of the running tree, with the reject side negated so leaf
    label parity tracks the sign of the partial product.
    """
    q = tuple(q)

    def evaluator(x: str) -> Node:
        bound = eval_poly(q, len(x))
        if bound < 0:
            raise StructuralError("negative product range")
        factors = [
            machine.evaluator(pair(x, index_string(k))) for k in range(bound + 1)
        ]
        result = factors[0]
        for factor in factors[1:]:
            result = trees.substituted(result, factor, trees.negated(factor))
        return result

    return GapMachine(evaluator, machine.branch_bound)


_ZERO = Branch((ACCEPT, REJECT))


def system_tree(system: UnitarySystem) -> Node:
    """Tree whose gap is the squared accept amplitude of the system.

    Layer s holds, per configuration and sign, a subtree whose gap is the
    signed sum over remaining paths to the accept configuration of the
    products of edge weights; |w| repeated children realize a weight-w edge.
    The square is the signed product of two copies of the path sum.
    """
    t = system.t_bound
    pos: list[Node] = [
        ACCEPT if c == system.accept else _ZERO for c in range(system.n_configs)
    ]
    neg: list[Node] = [
        REJECT if c == system.accept else _ZERO for c in range(system.n_configs)
    ]
    for _ in range(t):
        new_pos: list[Node] = []
        new_neg: list[Node] = []
        for c in range(system.n_configs):
            same: list[Node] = []
            flipped: list[Node] = []
            for r, w in system.column(c):
                if w > 0:
                    same.extend([pos[r]] * w)
                    flipped.extend([neg[r]] * w)
                else:
                    same.extend([neg[r]] * -w)
                    flipped.extend([pos[r]] * -w)
            new_pos.append(Branch(tuple(same)))
            new_neg.append(Branch(tuple(flipped)))
        pos, neg = new_pos, new_neg
    amplitude = pos[system.start]
    return trees.substituted(amplitude, amplitude, neg[system.start])


def system_to_gap_machine(
    system: UnitarySystem, branch_bound: int = DEFAULT_BRANCH_BOUND
) -> GapMachine:
    """Constant machine whose gap equals the acceptance-probability numerator."""
    tree = system_tree(system)
    return GapMachine(lambda _x: tree, branch_bound)


def family_gap_machine(
    family: MachineFamily, branch_bound: int = DEFAULT_BRANCH_BOUND
) -> GapMachine:
    """Machine on pair codes <x, 1**m> evaluating the family member at padding m."""
    cache: dict[str, Node] = {}

    def evaluator(z: str) -> Node:
        if z not in cache:
            x, padding = unpair(z)
            if padding.strip("1"):
                raise StructuralError("padding must be a block of ones")
            cache[z] = system_tree(family.system(x, len(padding)))
        return cache[z]

    return GapMachine(evaluator, branch_bound)


def plain_family_gap_machine(
    family: MachineFamily, branch_bound: int = DEFAULT_BRANCH_BOUND
) -> GapMachine:
    """Machine on raw inputs evaluating the family member at minimal padding."""
    cache: dict[str, Node] = {}

    def evaluator(x: str) -> Node:
        if x not in cache:
            cache[x] = system_tree(family.system(x))
        return cache[x]

    return GapMachine(evaluator, branch_bound)


CERT_KINDS = ("pp", "lwpp", "awpp", "ceqp")


@dataclass(frozen=True)
class ClassCertificate:
    """The (f, g, q) data instantiating a promise-class definition."""

    kind: str
    f: GapMachine
    g: Callable[[int], int] | None = None
    q_coeffs: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in CERT_KINDS:
            raise StructuralError(f"unknown certificate kind {self.kind!r}")

    def g_value(self, m: int) -> int:
        if self.g is None:
            raise StructuralError(f"{self.kind} certificate has no tally function")
        value = self.g(m)
        if value <= 0:
            raise StructuralError(f"tally g({m}) = {value} must be positive")
        return value

    def q_value(self, m: int) -> int:
        if self.q_coeffs is None:
            raise StructuralError(f"{self.kind} certificate has no polynomial q")
        return eval_poly(self.q_coeffs, m)


@dataclass(frozen=True)
class CheckRow:
    x: str
    member: bool
    value: int
    ok: bool
    note: str = ""


@dataclass(frozen=True)
class CheckReport:
    kind: str
    rows: tuple[CheckRow, ...]
    ok: bool

    def violations(self) -> tuple[CheckRow, ...]:
        return tuple(row for row in self.rows if not row.ok)


LabeledInputs = Iterable[tuple[str, bool]]


def check_pp(cert: ClassCertificate, labeled_inputs: LabeledInputs) -> CheckReport:
    """Members need positive gap, non-members negative; zero always fails."""
    rows = []
    for x, member in labeled_inputs:
        value = gap_of(cert.f, x)
        if value == 0:
            rows.append(CheckRow(x, member, value, False, "gap 0 excluded"))
        elif member:
            rows.append(CheckRow(x, member, value, value > 0))
        else:
            rows.append(CheckRow(x, member, value, value < 0))
    return CheckReport("pp", tuple(rows), all(r.ok for r in rows))


def check_lwpp(cert: ClassCertificate, labeled_inputs: LabeledInputs) -> CheckReport:
    """Members need gap exactly g(len(x)); non-members exactly 0."""
    rows = []
    for x, member in labeled_inputs:
        value = gap_of(cert.f, x)
        target = cert.g_value(len(x))
        if member:
            rows.append(CheckRow(x, member, value, value == target, f"target {target}"))
        else:
            rows.append(CheckRow(x, member, value, value == 0))
    return CheckReport("lwpp", tuple(rows), all(r.ok for r in rows))


@dataclass(frozen=True)
class AwppRow:
    x: str
    member: bool
    value: int
    tally: int
    threshold_ok: bool
    in_range: bool
    strict_interior: bool

    @property
    def ok(self) -> bool:
        return self.threshold_ok and self.in_range


@dataclass(frozen=True)
class AwppReport:
    rows: tuple[AwppRow, ...]
    m: int
    ok: bool


def check_awpp(
    cert: ClassCertificate, labeled_inputs: LabeledInputs, m: int
) -> AwppReport:
    """Amplified-threshold check at padding m, cleared-denominator integers.

    Members need 2**q * f >= (2**q - 1) * g, non-members 2**q * f <= g, and
    every value must lie in [0, g].  The closed interval admits the exact
    0 and g endpoints reached by error-free machines; whether the open
    interval 0 < f < g also held is reported per row as strict_interior.
    """
    rows = []
    for x, member in labeled_inputs:
        if m < len(x):
            raise StructuralError(f"padding m={m} shorter than input {x!r}")
        value = gap_of(cert.f, pair(x, "1" * m))
        g = cert.g_value(m)
        scale = 1 << cert.q_value(m)
        if member:
            threshold_ok = scale * value >= (scale - 1) * g
        else:
            threshold_ok = scale * value <= g
        rows.append(
            AwppRow(
                x=x,
                member=member,
                value=value,
                tally=g,
                threshold_ok=threshold_ok,
                in_range=0 <= value <= g,
                strict_interior=0 < value < g,
            )
        )
    return AwppReport(tuple(rows), m, all(r.ok for r in rows))


def check_ceqp(
    subject: GapMachine | MachineFamily, labeled_inputs: LabeledInputs
) -> CheckReport:
    """Exact-zero characterization: in the language iff the value is zero."""
    rows = []
    for x, member in labeled_inputs:
        if isinstance(subject, MachineFamily):
            value = accept_probability(subject.system(x)).numerator
        else:
            value = gap_of(subject, x)
        rows.append(CheckRow(x, member, value, (value == 0) == member))
    return CheckReport("ceqp", tuple(rows), all(r.ok for r in rows))


def bqp_to_awpp(
    family: MachineFamily,
    q: Sequence[int],
    labeled_inputs: Sequence[tuple[str, bool]],
    paddings: Sequence[int] | None = None,
) -> ClassCertificate:
    """Certificate with f the squared-amplitude machine and g(m) = 5**(2 t(m)).

    Requires the amplified promise: member probability at least
    1 - 2**-q(m), non-member at most 2**-q(m), exactly, at every tested
    padding.  A violating (x, m) refuses the certificate as the witness.
    """
    q = tuple(q)
    if paddings is None:
        paddings = [max((len(x) for x, _ in labeled_inputs), default=0)]
    for x, member in labeled_inputs:
        for m in paddings:
            if m < len(x):
                continue
            prob = accept_probability(family.system(x, m)).as_fraction()
            error = 1 - prob if member else prob
            if error > Fraction(1, 1 << eval_poly(q, m)):
                raise PromiseViolation(
                    f"promise fails at x={x!r}, m={m}: error {error}",
                    witness=(x, m, prob),
                )
    return ClassCertificate(
        kind="awpp",
        f=family_gap_machine(family),
        g=lambda m: 5 ** (2 * family.t(m)),
        q_coeffs=q,
    )


def tree_from_json(node) -> Node:
    """Decode the nested-array tree form: "accept", "reject", or [child, ...]."""
    if node == "accept":
        return ACCEPT
    if node == "reject":
        return REJECT
    if isinstance(node, list):
        if not node:
            raise ParseError("a branch needs at least one child")
        return Branch(tuple(tree_from_json(child) for child in node))
    raise ParseError(f"bad tree node {node!r}")


def tree_to_json(node: Node):
    if isinstance(node, trees.Leaf):
        return "accept" if node.accepting else "reject"
    return [tree_to_json(child) for child in node.children]


def load_gap_machine(path: str) -> GapMachine:
    """Load a corpus machine: an explicit tree or a compiled system reference."""
    import json
    import os

    from .model import load_system

    with open(path, "r", encoding="utf-8") as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    kind = doc.get("kind")
    if kind == "tree":
        tree = tree_from_json(doc.get("tree"))
        return GapMachine(lambda _x: tree)
    if kind == "system":
        target = os.path.join(os.path.dirname(path), doc.get("path", ""))
        return system_to_gap_machine(load_system(target))
    raise ParseError(f"{path}: kind must be 'tree' or 'system'")


def eqp_to_lwpp(
    family: MachineFamily, labeled_inputs: Sequence[tuple[str, bool]]
) -> ClassCertificate:
    """Certificate with g(n) = 5**(2 t(n)) for an exactly zero-error family.

    Any tested input with probability strictly between 0 and 1 refuses the
    certificate with that input as the witness.
    """
    for x, member in labeled_inputs:
        prob = accept_probability(family.system(x))
        if member and not prob.is_one():
            raise PromiseViolation(
                f"member {x!r} accepted with probability {prob.as_fraction()} != 1",
                witness=(x, prob),
            )
        if not member and not prob.is_zero():
            raise PromiseViolation(
                f"non-member {x!r} accepted with probability {prob.as_fraction()} != 0",
                witness=(x, prob),
            )
    return ClassCertificate(
        kind="lwpp",
        f=plain_family_gap_machine(family),
        g=lambda n: 5 ** (2 * family.t(n)),
    )
