"""Integer polynomials given as coefficient tuples, constant term first."""

from __future__ import annotations

from typing import Sequence


def eval_poly(coeffs: Sequence[int], n: int) -> int:
    """Evaluate sum(c_i * n**i) by Horner's rule."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc
