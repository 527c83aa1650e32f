"""Finite configuration systems with fifth-integer transition amplitudes.

A system stores the integer matrix V (five times the amplitude matrix), a
start and a single accept configuration, and a running-time bound.  Every
accepted system satisfies the exact integer identity V^T V = 25 I, which is
the scaled statement that the amplitude matrix preserves the L2 norm.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .errors import AmplitudeError, ModelError, ParseError, StructuralError
from .poly import eval_poly

ALLOWED_NUMERATORS = frozenset({-5, -4, -3, 0, 3, 4, 5})
DEFAULT_MAX_CONFIGS = 4096

Entry = tuple[int, int, int]  # (row, col, numerator), numerator nonzero


@dataclass(frozen=True)
class UnitaryReport:
    """Outcome of an orthogonality check on an integer matrix."""

    ok: bool
    n: int
    first_violation: tuple[int, int, int, int] | None = None  # (i, j, got, want)

    @property
    def message(self) -> str:
        if self.ok:
            return f"columns orthogonal with squared norm 25 ({self.n} configs)"
        i, j, got, want = self.first_violation
        return f"inner product of columns ({i},{j}) is {got}, expected {want}"


def _gram_first_violation(
    n: int, entries: Iterable[Entry]
) -> tuple[int, int, int, int] | None:
    """First (i, j) with column inner product != 25*delta_ij, else None."""
    rows: dict[int, list[tuple[int, int]]] = {}
    for r, c, w in entries:
        rows.setdefault(r, []).append((c, w))
    gram: dict[tuple[int, int], int] = {}
    for items in rows.values():
        for ci, wi in items:
            for cj, wj in items:
                if ci <= cj:
                    gram[(ci, cj)] = gram.get((ci, cj), 0) + wi * wj
    bad: list[tuple[int, int, int, int]] = []
    for i in range(n):
        got = gram.pop((i, i), 0)
        if got != 25:
            bad.append((i, i, got, 25))
    bad.extend((i, j, got, 0) for (i, j), got in gram.items() if got != 0)
    return min(bad) if bad else None


def validate_unitary(matrix: Sequence[Sequence[int]]) -> UnitaryReport:
    """Check V^T V = 25 I exactly for a dense integer matrix.

    Raises StructuralError if the matrix is not square.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise StructuralError("transition matrix must be square")
    entries = [
        (r, c, w)
        for r, row in enumerate(matrix)
        for c, w in enumerate(row)
        if w != 0
    ]
    violation = _gram_first_violation(n, entries)
    return UnitaryReport(ok=violation is None, n=n, first_violation=violation)


@dataclass(frozen=True)
class UnitarySystem:
    """Validated configuration system; immutable and safe to share across threads."""

    n_configs: int
    entries: tuple[Entry, ...]  # sorted by (row, col), zeros omitted
    start: int
    accept: int
    t_bound: int

    @cached_property
    def columns(self) -> dict[int, tuple[tuple[int, int], ...]]:
        """Column index -> ((row, numerator), ...), rows ascending."""
        cols: dict[int, list[tuple[int, int]]] = {}
        for r, c, w in self.entries:
            cols.setdefault(c, []).append((r, w))
        return {c: tuple(items) for c, items in cols.items()}

    def column(self, c: int) -> tuple[tuple[int, int], ...]:
        return self.columns.get(c, ())

    def to_file_dict(self) -> dict:
        """Machine-file form of this system."""
        return {
            "n_configs": self.n_configs,
            "entries": [list(e) for e in self.entries],
            "start": self.start,
            "accept": self.accept,
            "t": self.t_bound,
        }


def make_system(
    n_configs: int,
    entries: Iterable[Entry],
    start: int,
    accept: int,
    t: int,
    max_configs: int = DEFAULT_MAX_CONFIGS,
) -> UnitarySystem:
    """Build and validate a system from already-typed fields."""
    if n_configs < 1:
        raise StructuralError("n_configs must be positive")
    if n_configs > max_configs:
        raise ModelError(
            f"{n_configs} configurations exceed the limit of {max_configs}"
        )
    if not 0 <= start < n_configs:
        raise StructuralError(f"start index {start} out of range")
    if not 0 <= accept < n_configs:
        raise StructuralError(f"accept index {accept} out of range")
    if t < 0:
        raise StructuralError("running time must be nonnegative")
    ordered = tuple(sorted((int(r), int(c), int(w)) for r, c, w in entries))
    for r, c, w in ordered:
        if not (0 <= r < n_configs and 0 <= c < n_configs):
            raise StructuralError(f"entry ({r},{c}) out of range")
        if w not in ALLOWED_NUMERATORS or w == 0:
            raise AmplitudeError(
                f"numerator {w} at ({r},{c}) not in the allowed set"
            )
    if len({(r, c) for r, c, _ in ordered}) != len(ordered):
        raise StructuralError("duplicate matrix entries")
    violation = _gram_first_violation(n_configs, ordered)
    if violation is not None:
        report = UnitaryReport(ok=False, n=n_configs, first_violation=violation)
        raise ModelError(f"not norm-preserving: {report.message}")
    return UnitarySystem(n_configs, ordered, start, accept, t)


def build_system(description: Mapping, max_configs: int = DEFAULT_MAX_CONFIGS) -> UnitarySystem:
    """Parse a machine-file dictionary into a validated UnitarySystem.

    The canonical file form has entries sorted by (row, col) with no
    duplicates and no explicit zeros; anything else is a ParseError.
    """
    required = {"n_configs", "entries", "start", "accept", "t"}
    if not isinstance(description, Mapping):
        raise ParseError("machine description must be a JSON object")
    missing = required - description.keys()
    if missing:
        raise ParseError(f"missing fields: {sorted(missing)}")
    extra = description.keys() - required
    if extra:
        raise ParseError(f"unknown fields: {sorted(extra)}")
    for field in ("n_configs", "start", "accept", "t"):
        if not isinstance(description[field], int):
            raise ParseError(f"field {field!r} must be an integer")
    raw = description["entries"]
    if not isinstance(raw, list):
        raise ParseError("entries must be an array of [row, col, numerator]")
    entries: list[Entry] = []
    for item in raw:
        if (
            not isinstance(item, list)
            or len(item) != 3
            or not all(isinstance(v, int) for v in item)
        ):
            raise ParseError(f"bad entry {item!r}")
        if item[2] == 0:
            raise ParseError("explicit zero entries must be omitted")
        entries.append((item[0], item[1], item[2]))
    keys = [(r, c) for r, c, _ in entries]
    if keys != sorted(keys):
        raise ParseError("entries must be sorted by (row, col)")
    if len(set(keys)) != len(keys):
        raise ParseError("duplicate entries")
    return make_system(
        description["n_configs"],
        entries,
        description["start"],
        description["accept"],
        description["t"],
        max_configs=max_configs,
    )


def load_system(path: str, max_configs: int = DEFAULT_MAX_CONFIGS) -> UnitarySystem:
    """Read a machine file from disk."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            doc = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    return build_system(doc, max_configs=max_configs)


@dataclass(frozen=True)
class MachineFamily:
    """Input-indexed systems sharing one running-time polynomial.

    builder(x, m) must return a system with t_bound equal to t(m) for every
    padding length m >= len(x).
    """

    builder: Callable[[str, int], UnitarySystem]
    t_poly: tuple[int, ...]

    def t(self, m: int) -> int:
        return eval_poly(self.t_poly, m)

    def system(self, x: str, m: int | None = None) -> UnitarySystem:
        m = len(x) if m is None else m
        if m < len(x):
            raise StructuralError("padding length shorter than the input")
        system = self.builder(x, m)
        if system.t_bound != self.t(m):
            raise ModelError(
                f"builder produced t={system.t_bound}, expected {self.t(m)}"
            )
        return system
