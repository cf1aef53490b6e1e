"""Fixed enumerations of pairs and prefix order on finite strings.

Two bijections are fixed once and used everywhere:

* ``pair_diag`` enumerates ordered pairs by diagonals of constant sum,
  increasing in the second coordinate.  For fixed ``i`` it is strictly
  increasing in ``b``, and ``b <= pair_diag(i, b)`` always holds; the
  diagonalization engines rely on both facts.
* ``code_unordered`` enumerates distinct unordered pairs via the
  combinatorial number system ``max*(max-1)/2 + min``.  It is O(1) both
  ways and symmetric in its arguments.
"""

from __future__ import annotations

from math import isqrt
from typing import Tuple


def pair_diag(i: int, b: int) -> int:
    """Diagonal pairing code of the ordered pair (i, b)."""
    if i < 0 or b < 0:
        raise ValueError("pair_diag expects naturals")
    s = i + b
    return s * (s + 1) // 2 + b


def unpair_diag(k: int) -> Tuple[int, int]:
    """Inverse of pair_diag."""
    if k < 0:
        raise ValueError("unpair_diag expects a natural")
    # largest s with s(s+1)/2 <= k
    s = (isqrt(8 * k + 1) - 1) // 2
    b = k - s * (s + 1) // 2
    return s - b, b


def code_unordered(a: int, b: int) -> int:
    """Code of the unordered pair {a, b}, a != b."""
    if a == b:
        raise ValueError("unordered pairs must have distinct members")
    if a < 0 or b < 0:
        raise ValueError("code_unordered expects naturals")
    hi, lo = (a, b) if a > b else (b, a)
    return hi * (hi - 1) // 2 + lo


def decode_unordered(k: int) -> Tuple[int, int]:
    """Inverse of code_unordered; returns (lo, hi)."""
    if k < 0:
        raise ValueError("decode_unordered expects a natural")
    # largest hi with hi(hi-1)/2 <= k
    hi = (isqrt(8 * k + 1) + 1) // 2
    while hi * (hi - 1) // 2 > k:
        hi -= 1
    lo = k - hi * (hi - 1) // 2
    if lo >= hi:  # k sits on the next column
        hi += 1
        lo = k - hi * (hi - 1) // 2
    return lo, hi


def is_prefix(shorter, longer) -> bool:
    """Prefix order on finite strings (tuples of naturals)."""
    return len(shorter) <= len(longer) and tuple(longer[: len(shorter)]) == tuple(shorter)


def comparable(s, t) -> bool:
    return is_prefix(s, t) or is_prefix(t, s)
