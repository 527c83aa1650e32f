"""Oracle-dependent systems: query magnitudes, flip stability, and a frugal decider.

Systems here consult a finite 0/1 assignment: selected configurations carry
an alternative transition column used at the steps where they query a
string whose bit is 1.  Everything is verified exhaustively at desk scale
with exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import (
    BoundsError,
    CategoricalityError,
    DomainError,
    ModelError,
    OracleError,
    ResourceError,
    StructuralError,
)
from .evolve import BQP_ACCEPT, BQP_REJECT, ExactProbability
from .model import UnitarySystem, _gram_first_violation
from .poly import eval_poly
from .strings import strings_of_length

_TOWER_EXPONENT_BUDGET = 1 << 20


def tower(n: int, exponent_budget: int = _TOWER_EXPONENT_BUDGET) -> int:
    """tower(0) = 2 and tower(n+1) = 2**tower(n), exactly.

    Refuses once the exponent itself no longer fits the big-integer budget.
    """
    if n < 0:
        raise StructuralError("tower is defined on nonnegative integers")
    value = 2
    for _ in range(n):
        if value > exponent_budget:
            raise ResourceError(f"tower({n}) exceeds the big-integer budget")
        value = 1 << value
    return value


def tower_values(limit: int) -> list[int]:
    """All tower values up to limit (limit stays far below the budget here)."""
    values = []
    v = 2
    while v <= limit:
        values.append(v)
        v = 1 << v
    return values


@dataclass(frozen=True)
class OracleAssignment:
    """Total 0/1 assignment on all strings up to a maximum length."""

    universe_length: int
    ones: frozenset[str]

    def __post_init__(self) -> None:
        for y in self.ones:
            if len(y) > self.universe_length:
                raise OracleError(f"{y!r} is longer than the declared universe")

    def value(self, y: str) -> int:
        if len(y) > self.universe_length:
            raise OracleError(f"{y!r} outside the assignment's universe")
        return 1 if y in self.ones else 0

    def flipped(self, y: str) -> "OracleAssignment":
        if len(y) > self.universe_length:
            raise OracleError(f"{y!r} outside the assignment's universe")
        ones = self.ones ^ {y}
        return OracleAssignment(self.universe_length, frozenset(ones))

    def strings(self) -> Iterable[str]:
        for length in range(self.universe_length + 1):
            yield from strings_of_length(length)


@dataclass(frozen=True)
class TowerCondition:
    """Partial assignment with one string set at each acceptable length.

    The domain is closed by length; acceptable lengths must be tower
    values; every length-covered string outside `ones` is 0.
    """

    acceptable_lengths: frozenset[int]
    domain_lengths: frozenset[int]
    ones: frozenset[str]

    def __post_init__(self) -> None:
        towers = set(tower_values(max(self.acceptable_lengths, default=2)))
        bad = self.acceptable_lengths - towers
        if bad:
            raise ModelError(f"lengths {sorted(bad)} are not tower values")
        per_length: dict[int, int] = {}
        for y in self.ones:
            if len(y) not in self.domain_lengths:
                raise ModelError(f"{y!r} lies outside the condition's domain")
            if len(y) not in self.acceptable_lengths:
                raise ModelError(f"{y!r} set at a non-acceptable length")
            per_length[len(y)] = per_length.get(len(y), 0) + 1
        for length in self.acceptable_lengths & self.domain_lengths:
            count = per_length.get(length, 0)
            if count != 1:
                raise ModelError(
                    f"length {length} has {count} strings set, expected exactly one"
                )

    def defined_on_length(self, n: int) -> bool:
        return n in self.domain_lengths

    def value(self, y: str) -> int:
        if len(y) not in self.domain_lengths:
            raise DomainError(f"condition undefined on length {len(y)}")
        return 1 if y in self.ones else 0

    def to_assignment(self, universe_length: int) -> OracleAssignment:
        missing = set(range(universe_length + 1)) - self.domain_lengths
        if missing:
            raise DomainError(f"condition undefined on lengths {sorted(missing)}")
        return OracleAssignment(
            universe_length,
            frozenset(y for y in self.ones if len(y) <= universe_length),
        )

    def without_length(self, length: int) -> "TowerCondition":
        """Same condition with the chosen string at one length dropped."""
        return TowerCondition(
            self.acceptable_lengths - {length},
            self.domain_lengths,
            frozenset(y for y in self.ones if len(y) != length),
        )


def l_member(x_like: TowerCondition | OracleAssignment, n: int) -> bool:
    """Whether some witness w of length n-1 has w0 set to 1."""
    if isinstance(x_like, TowerCondition):
        if not x_like.defined_on_length(n):
            raise DomainError(f"condition undefined on length {n}")
    else:
        if n > x_like.universe_length:
            raise DomainError(f"assignment undefined on length {n}")
    if n < 1:
        return False
    return any(x_like.value(w + "0") == 1 for w in strings_of_length(n - 1))


@dataclass(frozen=True)
class SensitivityParams:
    """Exact perturbation bound epsilon and the derived set-size bound."""

    epsilon: Fraction
    p_value: int

    def __post_init__(self) -> None:
        if not 0 < self.epsilon < Fraction(1, 6):
            raise ModelError("epsilon must lie strictly between 0 and 1/6")
        if self.p_value < 1:
            raise ModelError("running-time value must be positive")

    @property
    def bound(self) -> int:
        return math.ceil(4 * self.p_value**2 / self.epsilon**2)

    @property
    def magnitude_threshold(self) -> Fraction:
        return self.epsilon**2 / (4 * self.p_value**2)


@dataclass(frozen=True, eq=False)
class OracleInstance:
    """One input's transition structure: base system plus conditional columns."""

    system: UnitarySystem
    query_slots: Mapping[int, Mapping[int, str]] = field(default_factory=dict)
    alt_columns: Mapping[int, tuple[tuple[int, int], ...]] = field(
        default_factory=dict
    )

    def __post_init__(self) -> None:
        for step, slots in self.query_slots.items():
            if not 0 <= step < self.system.t_bound:
                raise StructuralError(f"query slot at step {step} out of range")
            for config in slots:
                if config not in self.alt_columns:
                    raise StructuralError(
                        f"config {config} queries but has no alternative column"
                    )
        self._validate_stepwise_unitarity()

    def queried_strings(self) -> frozenset[str]:
        return frozenset(
            y for slots in self.query_slots.values() for y in slots.values()
        )

    def _columns_for(self, step: int, bit_of: Callable[[str], int]) -> dict:
        columns = dict(self.system.columns)
        for config, y in self.query_slots.get(step, {}).items():
            if bit_of(y):
                columns[config] = self.alt_columns[config]
        return columns

    def _validate_stepwise_unitarity(self, combo_budget: int = 1 << 12) -> None:
        n = self.system.n_configs
        for step, slots in self.query_slots.items():
            names = sorted(set(slots.values()))
            if 1 << len(names) > combo_budget:
                raise ResourceError(
                    f"step {step} conditions on {len(names)} strings; too many mixes"
                )
            for mask in range(1 << len(names)):
                bits = {y: (mask >> i) & 1 for i, y in enumerate(names)}
                columns = self._columns_for(step, lambda y: bits[y])
                entries = [
                    (r, c, w) for c, col in columns.items() for r, w in col
                ]
                violation = _gram_first_violation(n, entries)
                if violation is not None:
                    raise ModelError(
                        f"step {step} with bits {bits} is not norm-preserving "
                        f"at {violation[:2]}"
                    )


@dataclass(frozen=True)
class OracleQuerySystem:
    """Input-indexed oracle machines with a shared running-time polynomial."""

    instantiate: Callable[[str], OracleInstance]
    p_coeffs: tuple[int, ...]
    universe_length: int

    def p(self, n: int) -> int:
        return eval_poly(self.p_coeffs, n)

    def instance(self, x: str) -> OracleInstance:
        inst = self.instantiate(x)
        if inst.system.t_bound > self.p(len(x)):
            raise BoundsError(
                f"instance runs {inst.system.t_bound} steps, bound is {self.p(len(x))}"
            )
        for y in inst.queried_strings():
            if len(y) > self.universe_length:
                raise StructuralError(f"query {y!r} outside the universe")
        return inst


def _run_with_oracle(
    inst: OracleInstance, bit_of: Callable[[str], int]
) -> tuple[list[int], list[list[int]]]:
    """Final amplitudes plus the per-step trajectory (scaled integers)."""
    system = inst.system
    current = [0] * system.n_configs
    current[system.start] = 1
    trajectory = [list(current)]
    for step in range(system.t_bound):
        columns = inst._columns_for(step, bit_of)
        nxt = [0] * system.n_configs
        for c, amp in enumerate(current):
            if amp:
                for r, w in columns.get(c, ()):
                    nxt[r] += w * amp
        current = nxt
        trajectory.append(list(current))
    return current, trajectory


def _oracle_bits(oracle: OracleAssignment) -> Callable[[str], int]:
    return oracle.value


def acceptance_prob_rel(
    system: OracleQuerySystem, oracle: OracleAssignment, x: str
) -> ExactProbability:
    """Exact acceptance probability of the oracle-instantiated run."""
    inst = system.instance(x)
    for y in inst.queried_strings():
        oracle.value(y)  # totality check; raises OracleError otherwise
    final, _ = _run_with_oracle(inst, _oracle_bits(oracle))
    amp = final[inst.system.accept]
    return ExactProbability(amp * amp, 2 * inst.system.t_bound)


def query_magnitudes(
    system: OracleQuerySystem, oracle: OracleAssignment, x: str
) -> dict[str, Fraction]:
    """Cumulative squared amplitude each string is queried with across the run."""
    inst = system.instance(x)
    _, trajectory = _run_with_oracle(inst, _oracle_bits(oracle))
    magnitudes: dict[str, Fraction] = {}
    for step, slots in inst.query_slots.items():
        amps = trajectory[step]
        scale = 25**step
        for config, y in slots.items():
            weight = Fraction(amps[config] ** 2, scale)
            if weight:
                magnitudes[y] = magnitudes.get(y, Fraction(0)) + weight
    return magnitudes


def sensitive_set(
    system: OracleQuerySystem,
    oracle: OracleAssignment,
    x: str,
    params: SensitivityParams,
) -> frozenset[str]:
    """Strings whose query magnitude exceeds epsilon**2 / (4 p**2).

    Flipping any single string outside this set moves the acceptance
    probability by at most epsilon; the flip-stability report checks that
    exhaustively.
    """
    threshold = params.magnitude_threshold
    magnitudes = query_magnitudes(system, oracle, x)
    result = frozenset(y for y, mag in magnitudes.items() if mag > threshold)
    if len(result) > params.bound:
        raise ModelError(
            f"sensitive set of size {len(result)} exceeds the bound {params.bound}"
        )
    return result


@dataclass(frozen=True)
class FlipRow:
    string: str
    in_sensitive_set: bool
    deviation: Fraction


@dataclass(frozen=True)
class FlipReport:
    rows: tuple[FlipRow, ...]
    sensitive: frozenset[str]
    size_bound: int
    max_outside_deviation: Fraction
    epsilon: Fraction
    ok: bool


def verify_flip_stability(
    system: OracleQuerySystem,
    oracle: OracleAssignment,
    x: str,
    params: SensitivityParams,
) -> FlipReport:
    """Exhaustive single-string flips over the whole universe, exact comparisons."""
    base = acceptance_prob_rel(system, oracle, x).as_fraction()
    sensitive = sensitive_set(system, oracle, x, params)
    rows = []
    worst = Fraction(0)
    for y in oracle.strings():
        deviation = abs(
            acceptance_prob_rel(system, oracle.flipped(y), x).as_fraction() - base
        )
        member = y in sensitive
        if not member:
            worst = max(worst, deviation)
        rows.append(FlipRow(y, member, deviation))
    ok = worst <= params.epsilon and len(sensitive) <= params.bound
    return FlipReport(
        rows=tuple(rows),
        sensitive=sensitive,
        size_bound=params.bound,
        max_outside_deviation=worst,
        epsilon=params.epsilon,
        ok=ok,
    )


def categorical_check(
    system: OracleQuerySystem, x: str, combo_budget: int = 1 << 12
) -> None:
    """Exhaustively confirm the promise holds for every assignment of queried bits.

    Raises CategoricalityError with a witness assignment otherwise.  Only
    the queried strings matter: the run never reads any other bit.
    """
    inst = system.instance(x)
    names = sorted(inst.queried_strings())
    if 1 << len(names) > combo_budget:
        raise ResourceError(f"{len(names)} queried strings; too many assignments")
    for mask in range(1 << len(names)):
        bits = {y: (mask >> i) & 1 for i, y in enumerate(names)}
        final, _ = _run_with_oracle(inst, lambda y: bits[y])
        amp = final[inst.system.accept]
        prob = Fraction(amp * amp, 25**inst.system.t_bound)
        if BQP_REJECT < prob < BQP_ACCEPT:
            ones = frozenset(y for y, b in bits.items() if b)
            raise CategoricalityError(
                f"probability {prob} on input {x!r} under bits {bits}",
                witness=ones,
            )


@dataclass(frozen=True)
class DeciderResult:
    accept: bool
    query_log: tuple[str, ...]
    sensitive: frozenset[str]
    assumed_probability: Fraction
    found_long_string: str | None
    probe_budget: int


def rerelativized_decide(
    system: OracleQuerySystem,
    condition: TowerCondition,
    x: str,
    params: SensitivityParams,
    short_budget: int = 8,
    check_categorical: bool = True,
) -> DeciderResult:
    """Decide the machine's answer with polynomially many condition probes.

    Short acceptable lengths are read exhaustively.  For the one length too
    long to enumerate, an in-process helper computes the sensitive set of
    the run that assumes the length is empty; only those strings are
    probed.  Helper work is charged zero probes, mirroring free access to
    the powering half of the oracle.
    """
    if check_categorical:
        categorical_check(system, x)
    lengths = sorted(condition.acceptable_lengths & condition.domain_lengths)
    long_lengths = [n for n in lengths if (1 << n) > short_budget]
    if len(long_lengths) > 1:
        raise ModelError(
            f"lengths {long_lengths} all exceed the probe budget; tower spacing "
            "admits at most one"
        )
    short_lengths = [n for n in lengths if (1 << n) <= short_budget]

    query_log: list[str] = []
    known_ones: set[str] = set()
    for n in short_lengths:
        for y in strings_of_length(n):
            query_log.append(y)
            if condition.value(y) == 1:
                known_ones.add(y)

    assumed = OracleAssignment(system.universe_length, frozenset(known_ones))
    assumed_prob = acceptance_prob_rel(system, assumed, x).as_fraction()
    sensitive: frozenset[str] = frozenset()
    found: str | None = None
    decision_prob = assumed_prob

    if long_lengths:
        long_length = long_lengths[0]
        sensitive = frozenset(
            y
            for y in sensitive_set(system, assumed, x, params)
            if len(y) == long_length
        )
        for y in sorted(sensitive):
            query_log.append(y)
            if condition.value(y) == 1:
                found = y
        if found is not None:
            full = OracleAssignment(
                system.universe_length, frozenset(known_ones | {found})
            )
            decision_prob = acceptance_prob_rel(system, full, x).as_fraction()

    if BQP_REJECT < decision_prob < BQP_ACCEPT:
        raise CategoricalityError(
            f"simulation left the promise interval: {decision_prob}",
            witness=decision_prob,
        )
    total_short = sum(1 << n for n in short_lengths)
    return DeciderResult(
        accept=decision_prob >= BQP_ACCEPT,
        query_log=tuple(query_log),
        sensitive=sensitive,
        assumed_probability=assumed_prob,
        found_long_string=found,
        probe_budget=params.bound + total_short,
    )
