"""Finitely presented subsets of the naturals.

A DescribedSet is a symbolic expression whose membership predicate is
decidable element by element.  Boolean combinations stay symbolic; nothing
ever enumerates the whole of omega.  ``shape()`` normalizes an expression
to one of a small whitelist of recognized shapes (finite, cofinite,
arithmetic progression, complement of the multiples of m); membership
decision procedures key on those shapes and refuse to guess elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Tuple

from .errors import StructuralError

_FS_GEN_CAP = 22  # 2^22 subset sums is already beyond any sane scenario


def _nat_tuple(xs: Iterable[int]) -> Tuple[int, ...]:
    out = tuple(sorted(set(int(x) for x in xs)))
    if out and out[0] < 0:
        raise ValueError("members must be naturals")
    return out


class DescribedSet:
    """Base class; subclasses are immutable descriptor nodes."""

    def contains(self, x: int) -> bool:
        raise NotImplementedError

    def enumerate_upto(self, horizon: int) -> list:
        """Members strictly below horizon, ascending."""
        if horizon < 0:
            raise ValueError("horizon must be a natural")
        return [x for x in range(horizon) if self.contains(x)]

    # -- normalized shape -------------------------------------------------
    def shape(self):
        """Normalized whitelist shape or None.

        Returns one of
          ("finite", members) | ("cofinite", excluded) |
          ("ap", base, step) | ("modcomp", m)
        """
        return None

    def to_json(self) -> dict:
        raise NotImplementedError

    def __contains__(self, x: int) -> bool:
        return self.contains(x)


@dataclass(frozen=True)
class Finite(DescribedSet):
    members: Tuple[int, ...]

    def __init__(self, members: Iterable[int]):
        object.__setattr__(self, "members", _nat_tuple(members))

    def contains(self, x: int) -> bool:
        return x in self.members

    def enumerate_upto(self, horizon: int) -> list:
        return [m for m in self.members if m < horizon]

    def shape(self):
        return ("finite", self.members)

    def to_json(self) -> dict:
        return {"kind": "finite", "members": list(self.members)}


@dataclass(frozen=True)
class Cofinite(DescribedSet):
    excluded: Tuple[int, ...]

    def __init__(self, excluded: Iterable[int]):
        object.__setattr__(self, "excluded", _nat_tuple(excluded))

    def contains(self, x: int) -> bool:
        return x >= 0 and x not in self.excluded

    def shape(self):
        return ("cofinite", self.excluded)

    def to_json(self) -> dict:
        return {"kind": "cofinite", "excluded": list(self.excluded)}


@dataclass(frozen=True)
class Progression(DescribedSet):
    """Arithmetic progression {base + k*step : k >= 0}."""

    base: int
    step: int

    def __post_init__(self):
        if self.base < 0 or self.step < 1:
            raise ValueError("progression needs base >= 0, step >= 1")

    def contains(self, x: int) -> bool:
        return x >= self.base and (x - self.base) % self.step == 0

    def shape(self):
        return ("ap", self.base, self.step)

    def to_json(self) -> dict:
        return {"kind": "ap", "base": self.base, "step": self.step}


@dataclass(frozen=True)
class Intervals(DescribedSet):
    """Union of half-open intervals [a, b)."""

    spans: Tuple[Tuple[int, int], ...]

    def __init__(self, spans: Iterable[Tuple[int, int]]):
        norm = tuple(sorted((int(a), int(b)) for a, b in spans))
        for a, b in norm:
            if a < 0 or b < a:
                raise StructuralError(f"bad interval [{a}, {b})")
        object.__setattr__(self, "spans", norm)

    def contains(self, x: int) -> bool:
        return any(a <= x < b for a, b in self.spans)

    def members(self) -> Tuple[int, ...]:
        out = set()
        for a, b in self.spans:
            out.update(range(a, b))
        return tuple(sorted(out))

    def shape(self):
        return ("finite", self.members())

    def to_json(self) -> dict:
        return {"kind": "intervals", "spans": [list(s) for s in self.spans]}


def subset_sums(gens: Tuple[int, ...]) -> Tuple[int, ...]:
    """All non-empty subset sums of a finite set of distinct naturals."""
    sums = set()
    acc = {0}
    for g in gens:
        acc |= {s + g for s in acc}
    sums = acc - {0}
    return tuple(sorted(sums))


@dataclass(frozen=True)
class SumsOf(DescribedSet):
    """Finite non-empty sums of distinct elements of a finite generator set."""

    generators: Tuple[int, ...]

    def __init__(self, generators: Iterable[int]):
        gens = _nat_tuple(generators)
        if len(gens) > _FS_GEN_CAP:
            raise StructuralError("generator set too large to expand")
        object.__setattr__(self, "generators", gens)

    def members(self) -> Tuple[int, ...]:
        return subset_sums(self.generators)

    def contains(self, x: int) -> bool:
        return x in self.members()

    def shape(self):
        return ("finite", self.members())

    def to_json(self) -> dict:
        return {"kind": "fs_closure", "generators": list(self.generators)}


@dataclass(frozen=True)
class DiffsOf(DescribedSet):
    """Positive differences of distinct elements of a finite generator set."""

    generators: Tuple[int, ...]

    def __init__(self, generators: Iterable[int]):
        object.__setattr__(self, "generators", _nat_tuple(generators))

    def members(self) -> Tuple[int, ...]:
        g = self.generators
        return tuple(sorted({b - a for a, b in combinations(g, 2)}))

    def contains(self, x: int) -> bool:
        return x in self.members()

    def shape(self):
        return ("finite", self.members())

    def to_json(self) -> dict:
        return {"kind": "delta_image", "generators": list(self.generators)}


@dataclass(frozen=True)
class Union(DescribedSet):
    parts: Tuple[DescribedSet, ...]

    def __init__(self, parts: Iterable[DescribedSet]):
        object.__setattr__(self, "parts", tuple(parts))

    def contains(self, x: int) -> bool:
        return any(p.contains(x) for p in self.parts)

    def shape(self):
        shapes = [p.shape() for p in self.parts]
        if all(s is not None and s[0] == "finite" for s in shapes):
            acc = set()
            for s in shapes:
                acc.update(s[1])
            return ("finite", tuple(sorted(acc)))
        return None

    def to_json(self) -> dict:
        return {"kind": "union", "parts": [p.to_json() for p in self.parts]}


@dataclass(frozen=True)
class Intersection(DescribedSet):
    parts: Tuple[DescribedSet, ...]

    def __init__(self, parts: Iterable[DescribedSet]):
        object.__setattr__(self, "parts", tuple(parts))

    def contains(self, x: int) -> bool:
        return all(p.contains(x) for p in self.parts)

    def shape(self):
        shapes = [p.shape() for p in self.parts]
        finites = [s for s in shapes if s is not None and s[0] == "finite"]
        if finites and len(finites) == len(shapes):
            acc = set(finites[0][1])
            for s in finites[1:]:
                acc &= set(s[1])
            return ("finite", tuple(sorted(acc)))
        if finites:
            # intersection with a finite set is finite and fully decidable
            members = tuple(sorted(x for x in finites[0][1] if self.contains(x)))
            return ("finite", members)
        return None

    def to_json(self) -> dict:
        return {"kind": "intersection", "parts": [p.to_json() for p in self.parts]}


@dataclass(frozen=True)
class Complement(DescribedSet):
    inner: DescribedSet

    def contains(self, x: int) -> bool:
        return x >= 0 and not self.inner.contains(x)

    def shape(self):
        s = self.inner.shape()
        if s is None:
            return None
        if s[0] == "finite":
            return ("cofinite", s[1])
        if s[0] == "cofinite":
            return ("finite", s[1])
        if s[0] == "ap" and s[1] == 0 and s[2] >= 2:
            return ("modcomp", s[2])
        if s[0] == "modcomp":
            return ("ap", 0, s[1])
        return None

    def to_json(self) -> dict:
        return {"kind": "complement", "of": self.inner.to_json()}


# -- convenience constructors ---------------------------------------------

def evens() -> Progression:
    return Progression(0, 2)


def odds() -> Progression:
    return Progression(1, 2)


def modular_avoiders(m: int) -> Complement:
    """The set of naturals not divisible by m (m >= 2)."""
    if m < 2:
        raise ValueError("modulus must be >= 2")
    return Complement(Progression(0, m))


def full_set() -> Cofinite:
    return Cofinite(())


def set_from_json(obj: dict) -> DescribedSet:
    """Decode the tagged descriptor-tree serialization."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise StructuralError("set descriptor must be a tagged object")
    kind = obj["kind"]
    if kind == "finite":
        return Finite(obj["members"])
    if kind == "cofinite":
        return Cofinite(obj["excluded"])
    if kind == "ap":
        return Progression(obj["base"], obj["step"])
    if kind == "intervals":
        return Intervals(tuple((a, b) for a, b in obj["spans"]))
    if kind == "fs_closure":
        return SumsOf(obj["generators"])
    if kind == "delta_image":
        return DiffsOf(obj["generators"])
    if kind == "union":
        return Union(set_from_json(p) for p in obj["parts"])
    if kind == "intersection":
        return Intersection(set_from_json(p) for p in obj["parts"])
    if kind == "complement":
        return Complement(set_from_json(obj["of"]))
    raise StructuralError(f"unknown set kind {kind!r}")


def is_co_infinite(s: DescribedSet) -> Optional[bool]:
    """Whether the complement of s is infinite, when the shape decides it."""
    sh = s.shape()
    if sh is None:
        return None
    if sh[0] == "finite":
        return True
    if sh[0] == "cofinite":
        return False
    if sh[0] == "ap":
        return sh[2] >= 2  # step 1 progressions are cofinite
    if sh[0] == "modcomp":
        return True  # complement is the multiples of m
    return None
