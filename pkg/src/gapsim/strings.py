"""Binary strings, their numbering, and the pairing code used throughout.

Strings over {0,1} are identified with the positive integers by prepending
a 1 bit: "" <-> 1, "0" <-> 2, "1" <-> 3, "00" <-> 4, and so on.  Pairs of
strings are coded through the Cantor pairing of their numbers, which keeps
both directions computable in time polynomial in the code length.
"""

from __future__ import annotations

import math
from typing import Iterator

from .errors import DecodeError


def _check_binary(x: str) -> None:
    if not all(ch in "01" for ch in x):
        raise DecodeError(f"not a binary string: {x!r}")


def string_to_num(x: str) -> int:
    """Number of a binary string under the 1-prefix isomorphism (always >= 1)."""
    _check_binary(x)
    return int("1" + x, 2)


def num_to_string(n: int) -> str:
    """Inverse of string_to_num; defined for n >= 1."""
    if n < 1:
        raise DecodeError(f"no string is numbered {n}")
    return bin(n)[3:]


def index_string(k: int) -> str:
    """The k-th binary string (k >= 0) in length-then-lexicographic order."""
    return num_to_string(k + 1)


def pair(x: str, y: str) -> str:
    """Injective pair code of two binary strings, itself a binary string."""
    a = string_to_num(x)
    b = string_to_num(y)
    return num_to_string((a + b) * (a + b + 1) // 2 + b)


def unpair(z: str) -> tuple[str, str]:
    """Inverse of pair; raises DecodeError on codes pair never produces."""
    n = string_to_num(z)
    w = (math.isqrt(8 * n + 1) - 1) // 2
    b = n - w * (w + 1) // 2
    a = w - b
    if a < 1 or b < 1:
        raise DecodeError(f"{z!r} is not a pair code")
    return num_to_string(a), num_to_string(b)


def strings_of_length(n: int) -> Iterator[str]:
    """All binary strings of exactly length n, lexicographically."""
    for k in range(1 << n):
        yield format(k, f"0{n}b") if n else ""


def strings_up_to(n: int) -> Iterator[str]:
    """All binary strings of length <= n, shortest first."""
    for length in range(n + 1):
        yield from strings_of_length(length)
