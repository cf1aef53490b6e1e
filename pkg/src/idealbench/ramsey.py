"""Finite-sums algebra and exhaustive canonical-form searches.

The canonical forms are the rigid shapes a colouring can take on a
structured domain: for pair colourings the four cases constant / min /
max / injective, and for colourings of finite sums over a block-disjoint
ground sequence the five cases constant / min-support / max-support /
min-and-max-support / injective.  ``classify_canonical`` tests every
biconditional exhaustively on the finite domain; when several cases hold
at once (possible on tiny domains) the smallest case number wins, so the
answer is deterministic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .sets import subset_sums

RAMSEY = "ramsey"
HINDMAN = "hindman"

_CASE_RANGE = {RAMSEY: (1, 2, 3, 4), HINDMAN: (1, 2, 3, 4, 5)}


@dataclass(frozen=True)
class CanonicalForm:
    family: str
    case: int

    def __post_init__(self):
        if self.case not in _CASE_RANGE[self.family]:
            raise ValueError(f"case {self.case} outside {self.family} range")


def fs(a: Iterable[int]) -> Tuple[int, ...]:
    """All non-empty sums of distinct elements, deduplicated and sorted."""
    seq = list(a)
    members = sorted(set(seq))
    if len(members) != len(seq):
        raise ValueError("finite-sum input must have distinct elements")
    if any(x < 0 for x in members):
        raise ValueError("finite-sum input must be naturals")
    return subset_sums(tuple(members))


def support(x: int) -> Tuple[int, ...]:
    """Unique powers-of-two decomposition of a positive natural."""
    if x < 1:
        raise ValueError("support is defined for positive naturals")
    out = []
    bit = 1
    while x:
        if x & 1:
            out.append(bit)
        x >>= 1
        bit <<= 1
    return tuple(out)


def delta(b: Iterable[int]) -> Tuple[int, ...]:
    """Positive differences of distinct elements."""
    members = sorted(set(b))
    return tuple(sorted({y - x for x, y in combinations(members, 2)}))


def block_disjoint(h: Sequence[int]) -> bool:
    """Whether consecutive supports are fully separated."""
    seq = list(h)
    if any(x < 1 for x in seq):
        raise ValueError("block disjointness needs positive entries")
    for cur, nxt in zip(seq, seq[1:]):
        if max(support(cur)) >= min(support(nxt)):
            return False
    return True


# -- canonical-form classification ----------------------------------------

def _holds_on(f: Dict, domain: List, key: Callable) -> bool:
    """Whether f(x)=f(y) <-> key(x)=key(y) for all x, y in the domain."""
    for x, y in combinations(domain, 2):
        if (f[x] == f[y]) != (key(x) == key(y)):
            return False
    return True


def _ramsey_keys():
    return {
        1: lambda x: 0,
        2: lambda x: min(x),
        3: lambda x: max(x),
        4: lambda x: x,
    }


def _hindman_keys():
    return {
        1: lambda x: 0,
        2: lambda x: min(support(x)),
        3: lambda x: max(support(x)),
        4: lambda x: (min(support(x)), max(support(x))),
        5: lambda x: x,
    }


def matching_cases(f: Dict, domain: Iterable, family: str) -> List[int]:
    """Every case whose biconditional holds on the finite domain."""
    dom = list(domain)
    keys = _ramsey_keys() if family == RAMSEY else _hindman_keys()
    return [case for case in _CASE_RANGE[family] if _holds_on(f, dom, keys[case])]


def classify_canonical(f: Dict, domain: Iterable, family: str) -> Optional[CanonicalForm]:
    """The matching canonical case, smallest case number on ties."""
    cases = matching_cases(f, domain, family)
    if not cases:
        return None
    return CanonicalForm(family, cases[0])


def canonical_ramsey_search(
    f: Dict, n: int, m: int
) -> Optional[Tuple[Tuple[int, ...], CanonicalForm]]:
    """Least T in [n] of size m whose pair restriction is canonical.

    ``f`` maps frozenset pairs of [n] to values and must be total there.
    """
    if m > n:
        return None
    for t in combinations(range(n), m):
        domain = [frozenset(p) for p in combinations(t, 2)]
        form = classify_canonical(f, domain, RAMSEY)
        if form is not None:
            return t, form
    return None


def _block_disjoint_tuples(length: int, bound: int):
    """Ascending block-disjoint tuples with all entries below bound, lex order."""

    def extend(prefix: Tuple[int, ...], lo: int):
        if len(prefix) == length:
            yield prefix
            return
        for h in range(lo, bound):
            if not prefix or max(support(prefix[-1])) < min(support(h)):
                yield from extend(prefix + (h,), h + 1)

    yield from extend((), 1)


def canonical_hindman_search(
    f: Dict, sum_bound: int, m: int
) -> Optional[Tuple[Tuple[int, ...], CanonicalForm]]:
    """Least block-disjoint tuple of length m with canonical sums below sum_bound.

    ``f`` maps every positive natural below sum_bound to a value.
    """
    if m < 1:
        raise ValueError("need at least one element")
    for h in _block_disjoint_tuples(m, sum_bound):
        if sum(h) >= sum_bound:
            continue
        domain = list(fs(h))
        if domain[-1] >= sum_bound:
            continue
        form = classify_canonical(f, domain, HINDMAN)
        if form is not None:
            return h, form
    return None


# -- difference multiplicities ---------------------------------------------

def diff_multiplicity(a: Iterable[int]) -> Dict[int, int]:
    """How many ordered pairs (m, n), m > n, realize each difference."""
    members = sorted(set(a))
    table: Counter = Counter()
    for x, y in combinations(members, 2):
        table[y - x] += 1
    return dict(table)


@dataclass(frozen=True)
class SparsenessReport:
    passed: bool
    bound: int
    violations: Tuple[Tuple[int, int], ...]  # (difference, multiplicity)


def eventually_sparse_check(a: Iterable[int], multiplicity_bound: int) -> SparsenessReport:
    """Check every difference multiplicity against a bound on this window."""
    table = diff_multiplicity(a)
    bad = tuple(sorted((d, c) for d, c in table.items() if c > multiplicity_bound))
    return SparsenessReport(passed=not bad, bound=multiplicity_bound, violations=bad)
