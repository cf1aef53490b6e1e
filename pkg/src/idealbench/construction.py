"""Interval partition of an initial segment of omega with descending weights.

The partition data consists of consecutive intervals I_0, I_1, ... and
strictly descending positive rationals r_0 > r_1 > ... subject to

  (1)  |I_0 u ... u I_{n-1}|  <=  r_n * |I_n|      for 1 <= n < depth,
  (2)  |I_n| * r_{n+1}        <=  2^(-n-1)         for 0 <= n < depth,
  (3)  I_0 = {0} and r_0 = 1.

The greedy builder takes the smallest interval and the largest next
rational permitted at each step:

  L_n = ceil(|I_<n| / r_n),   I_n = next L_n integers,
  r_{n+1} = min(r_n / 2, 2^(-n-1) / L_n).

Every r_n the greedy rule produces is a unit fraction 1/R_n with
R_{n+1} = max(2 R_n, 2^(n+1) L_n), so L_n = |I_<n| * R_n exactly and
conditions (1) and (2) hold with equality-tight slack.  Conditions (1)
and (2) jointly force |I_{n+1}| >= 2^(n+1) |I_n|^2, i.e. interval sizes
whose digit counts double every level; around depth 24 the arithmetic
leaves interactive timescales no matter how it is implemented.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

from .errors import HorizonExhausted, StructuralError
from .sets import DescribedSet
from .serialize import rat_str, rat_parse

DEFAULT_DEPTH = 12


@dataclass(frozen=True)
class PartitionData:
    """Intervals as (start, length) pairs plus rationals r_0 .. r_depth."""

    starts: Tuple[int, ...]
    lengths: Tuple[int, ...]
    rationals: Tuple[Fraction, ...]

    @property
    def depth(self) -> int:
        return len(self.lengths)

    def end(self, n: int) -> int:
        return self.starts[n] + self.lengths[n]

    @property
    def coverage_end(self) -> int:
        return self.end(self.depth - 1)

    def interval_of(self, m: int) -> int:
        """Index n with m in I_n; raises beyond coverage."""
        if m < 0 or m >= self.coverage_end:
            raise HorizonExhausted(
                f"point {m} outside partition coverage [0, {self.coverage_end})"
            )
        lo, hi = 0, self.depth - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if m < self.end(mid):
                hi = mid
            else:
                lo = mid + 1
        return lo

    def prefix_size(self, n: int) -> int:
        """|I_<n| = number of points below interval n."""
        return self.starts[n]

    def interval_members(self, n: int, cap: int = 1 << 22) -> range:
        if self.lengths[n] > cap:
            raise HorizonExhausted(f"interval {n} too large to enumerate")
        return range(self.starts[n], self.end(n))

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "starts": [str(s) for s in self.starts],
            "lengths": [str(l) for l in self.lengths],
            "rationals": [rat_str(r) for r in self.rationals],
        }

    @staticmethod
    def from_json(obj: dict) -> "PartitionData":
        starts = tuple(int(s) for s in obj["starts"])
        lengths = tuple(int(l) for l in obj["lengths"])
        rationals = tuple(rat_parse(r) for r in obj["rationals"])
        return PartitionData(starts, lengths, rationals)


def build_partition(depth: int) -> PartitionData:
    """Greedy partition of the given depth (number of intervals)."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    starts: List[int] = [0]
    lengths: List[int] = [1]
    r_dens: List[int] = [1]  # r_n = 1 / r_dens[n]
    covered = 1
    r_dens.append(max(2 * r_dens[0], 2 * lengths[0]))
    for n in range(1, depth):
        length = covered * r_dens[n]  # ceil(|I_<n| / r_n), exact for unit fractions
        starts.append(covered)
        lengths.append(length)
        covered += length
        r_dens.append(max(2 * r_dens[n], (1 << (n + 1)) * length))
    rationals = tuple(Fraction(1, d) for d in r_dens)
    return PartitionData(tuple(starts), tuple(lengths), rationals)


@dataclass(frozen=True)
class ConditionReport:
    name: str
    index: int
    holds: bool
    slack: Optional[Fraction]  # bound minus attained value, exact

    def to_json(self) -> dict:
        return {
            "condition": self.name,
            "index": self.index,
            "holds": self.holds,
            "slack": None if self.slack is None else rat_str(self.slack),
        }


@dataclass(frozen=True)
class PartitionReport:
    passed: bool
    reports: Tuple[ConditionReport, ...]

    def failures(self) -> Tuple[ConditionReport, ...]:
        return tuple(r for r in self.reports if not r.holds)

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": [r.to_json() for r in self.reports]}


def verify_partition(p: PartitionData) -> PartitionReport:
    """Exact per-condition verification with rational slack."""
    if p.depth < 1 or len(p.rationals) != p.depth + 1:
        raise StructuralError("need depth intervals and depth+1 rationals")
    if p.starts[0] != 0:
        raise StructuralError("intervals must start at 0")
    for n in range(1, p.depth):
        if p.starts[n] != p.end(n - 1):
            raise StructuralError(f"interval {n} is not contiguous")
    if any(l < 1 for l in p.lengths):
        raise StructuralError("intervals must be non-empty")
    if any(r <= 0 for r in p.rationals):
        raise StructuralError("rationals must be positive")

    reports: List[ConditionReport] = []
    # condition (3): I_0 = {0}, r_0 = 1
    reports.append(
        ConditionReport(
            "base", 0, p.lengths[0] == 1 and p.rationals[0] == 1, None
        )
    )
    # condition (1): |I_<n| <= r_n |I_n|
    for n in range(1, p.depth):
        bound = p.rationals[n] * p.lengths[n]
        slack = bound - p.prefix_size(n)
        reports.append(ConditionReport("growth", n, slack >= 0, slack))
    # condition (2): |I_n| r_{n+1} <= 2^{-n-1}
    for n in range(p.depth):
        attained = p.rationals[n + 1] * p.lengths[n]
        slack = Fraction(1, 1 << (n + 1)) - attained
        reports.append(ConditionReport("decay", n, slack >= 0, slack))
    # strictly descending rationals
    for n in range(len(p.rationals) - 1):
        slack = p.rationals[n] - p.rationals[n + 1]
        reports.append(ConditionReport("descending", n, slack > 0, slack))

    return PartitionReport(all(r.holds for r in reports), tuple(reports))


@dataclass(frozen=True)
class WeightFunction:
    """Total weight assignment on the partition's coverage.

    divergence records why the induced ideal is proper: "harmonic" for the
    canonical 1/(n+1) weights, "interval-block" for selector weights with a
    co-infinite selector, "none" when no divergence certificate applies.
    """

    evaluator: Callable[[int], Fraction]
    divergence: str
    name: str

    def __call__(self, m: int) -> Fraction:
        return self.evaluator(m)

    def to_json(self) -> dict:
        return {"name": self.name, "divergence": self.divergence}


def harmonic_weight() -> WeightFunction:
    return WeightFunction(lambda m: Fraction(1, m + 1), "harmonic", "harmonic")


def weight_fn(selector: DescribedSet, p: PartitionData) -> WeightFunction:
    """Selector weights: r_n off the selector, r_{n+1} on it."""
    from .sets import is_co_infinite

    def evaluate(m: int) -> Fraction:
        n = p.interval_of(m)
        return p.rationals[n + 1] if selector.contains(n) else p.rationals[n]

    co_inf = is_co_infinite(selector)
    divergence = "interval-block" if co_inf else "none"
    return WeightFunction(evaluate, divergence, "selector")


def interval_weight(selector: DescribedSet, p: PartitionData, n: int) -> Fraction:
    """Exact selector-weight of the whole interval I_n, without enumeration."""
    value = p.rationals[n + 1] if selector.contains(n) else p.rationals[n]
    return value * p.lengths[n]


def degenerate_prefix_weight(p: PartitionData, upto: int) -> Fraction:
    """Sum of full-selector weights over [0, upto), upto within coverage.

    With the selector equal to omega every point of I_n weighs r_{n+1}, so
    the sum telescopes interval by interval; the result stays below 1 by
    the decay condition.
    """
    if upto <= 0:
        return Fraction(0)
    last = p.interval_of(upto - 1)
    total = Fraction(0)
    for n in range(last):
        total += p.rationals[n + 1] * p.lengths[n]
    total += p.rationals[last + 1] * (upto - p.starts[last])
    return total
